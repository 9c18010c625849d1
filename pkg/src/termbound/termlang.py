"""A deterministic while-if language with certified transition invariants.

Programs operate on unbounded natural variables with four expression
forms (constant, copy, increment, truncated decrement) and compare
variables only with ``<``. Structured commands lower to a flat table of
numbered program points; a state is a location plus one value per
declared variable, and the interpreter takes one small step at a time.
A state whose location carries no instruction is final and steps to
itself.

A ranked relation is a binary relation on states together with a rank
into the naturals that must strictly decrease on every member pair; a
transition invariant is a finite list of ranked relations expected to
cover every ordered pair of distinct states along a trace. Relations are
given either as opaque predicates or in a serializable constraint form:
optional pre/post location sets plus a conjunction of atoms comparing
pre-variables, post-variables, the location token ``loc``, and
constants.

``check_invariant`` verifies coverage and rank descent over all pairs of
a bounded trace. The rank tuples of a covered trace embed into the
colored-tree measure of :mod:`termbound.erdos`; ``step_bound`` feeds
that measure to :mod:`termbound.bounds` and returns a number of steps by
which the program must have reached a final state.

Orientation: relations hold (earlier, later) pairs of the execution
order; the ranked certificate decreases from earlier to later.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

from .bounds import SequenceFn, bound_g
from .errors import BudgetExceeded, NotHomogeneous, ParseError

# --- expressions and commands ------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Inc:
    name: str

    def __str__(self) -> str:
        return f"{self.name} + 1"


@dataclass(frozen=True)
class Dec:
    """Truncated decrement: 0 - 1 = 0."""

    name: str

    def __str__(self) -> str:
        return f"{self.name} - 1"


Expr = Union[Const, Var, Inc, Dec]


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr


@dataclass(frozen=True)
class While:
    left: str
    right: str
    body: tuple["Cmd", ...]


@dataclass(frozen=True)
class If:
    left: str
    right: str
    then_body: tuple["Cmd", ...]
    else_body: tuple["Cmd", ...]


Cmd = Union[Assign, While, If]


def _expr_vars(e: Expr) -> tuple[str, ...]:
    if isinstance(e, Const):
        return ()
    return (e.name,)


def _cmd_points(c: Cmd) -> int:
    if isinstance(c, Assign):
        return 1
    if isinstance(c, While):
        return 1 + sum(_cmd_points(b) for b in c.body)
    return 1 + sum(_cmd_points(b) for b in c.then_body) + sum(
        _cmd_points(b) for b in c.else_body
    )


# Flat instruction table entries; locations are preorder command indices.
# ("assign", var_index, expr, next_loc)
# ("branch", left_index, right_index, true_loc, false_loc)


class Program:
    """A while-if program over declared natural variables.

    Locations number the commands in preorder; the location one past the
    last command is the single final point of a top-level run. Undeclared
    variable references are rejected at construction.
    """

    def __init__(self, variables: Sequence[str], body: Sequence[Cmd]):
        self.variables: tuple[str, ...] = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable declaration")
        self.body: tuple[Cmd, ...] = tuple(body)
        self._index = {name: i for i, name in enumerate(self.variables)}
        self._table: list[tuple] = []
        self._lower(self.body, 0, self.n_points)
        assert len(self._table) == self.n_points

    @property
    def n_points(self) -> int:
        return sum(_cmd_points(c) for c in self.body)

    def var_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"undeclared variable {name!r}") from None

    def _lower(self, cmds: Sequence[Cmd], start: int, exit_loc: int) -> None:
        loc = start
        starts = []
        for c in cmds:
            starts.append(loc)
            loc += _cmd_points(c)
        for pos, (c, begin) in enumerate(zip(cmds, starts)):
            after = begin + _cmd_points(c)
            cont = after if pos < len(cmds) - 1 else exit_loc
            if isinstance(c, Assign):
                for v in _expr_vars(c.expr):
                    self.var_index(v)
                self._table.append(None)
                self._table[begin] = ("assign", self.var_index(c.var), c.expr, cont)
            elif isinstance(c, While):
                self._table.append(None)
                self._table[begin] = (
                    "branch",
                    self.var_index(c.left),
                    self.var_index(c.right),
                    begin + 1 if c.body else begin,
                    cont,
                )
                self._lower(c.body, begin + 1, begin)
            else:
                then_start = begin + 1
                else_start = then_start + sum(_cmd_points(b) for b in c.then_body)
                self._table.append(None)
                self._table[begin] = (
                    "branch",
                    self.var_index(c.left),
                    self.var_index(c.right),
                    then_start if c.then_body else cont,
                    else_start if c.else_body else cont,
                )
                self._lower(c.then_body, then_start, cont)
                self._lower(c.else_body, else_start, cont)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Program):
            return NotImplemented
        return self.variables == other.variables and self.body == other.body

    def __repr__(self) -> str:
        return f"Program(variables={self.variables!r}, commands={self.n_points})"


@dataclass(frozen=True)
class State:
    """A program point plus one value per declared variable."""

    location: int
    env: tuple[int, ...]

    def env_dict(self, p: Program) -> dict[str, int]:
        return dict(zip(p.variables, self.env))


def initial_state(p: Program, assignments: Mapping[str, int] | None = None) -> State:
    """State at location 0; unassigned variables start at 0."""
    env = [0] * len(p.variables)
    for name, value in (assignments or {}).items():
        if value < 0:
            raise ValueError(f"variable {name!r} must be a natural number")
        env[p.var_index(name)] = value
    return State(0, tuple(env))


def is_final(p: Program, s: State) -> bool:
    return not 0 <= s.location < len(p._table)


def _eval_expr(e: Expr, env: tuple[int, ...], p: Program) -> int:
    if isinstance(e, Const):
        return e.value
    value = env[p.var_index(e.name)]
    if isinstance(e, Var):
        return value
    if isinstance(e, Inc):
        return value + 1
    return max(0, value - 1)


def step(p: Program, s: State) -> State:
    """One small step; final states repeat themselves."""
    if is_final(p, s):
        return s
    instr = p._table[s.location]
    if instr[0] == "assign":
        _, vidx, expr, nxt = instr
        value = _eval_expr(expr, s.env, p)
        env = s.env[:vidx] + (value,) + s.env[vidx + 1 :]
        return State(nxt, env)
    _, li, ri, t, f = instr
    return State(t if s.env[li] < s.env[ri] else f, s.env)


@dataclass
class Trace:
    """States from an initial one up to the first final state, inclusive.

    ``complete`` is False when the step budget ran out first; that is a
    reported condition, not an error.
    """

    states: list[State]
    complete: bool

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i):
        return self.states[i]

    @property
    def steps(self) -> int:
        return len(self.states) - 1


def run_trace(p: Program, s0: State, max_steps: int = 10_000) -> Trace:
    states = [s0]
    cur = s0
    for _ in range(max_steps):
        if is_final(p, cur):
            return Trace(states, True)
        cur = step(p, cur)
        states.append(cur)
    return Trace(states, is_final(p, cur))


# --- ranked relations --------------------------------------------------------

# Atom terms: ("const", n) | ("pre", var) | ("post", var) | ("preloc",) | ("postloc",)


@dataclass(frozen=True)
class Atom:
    lhs: tuple
    op: str  # "<" or "="
    rhs: tuple

    def __str__(self) -> str:
        return f"{_term_str(self.lhs)} {self.op} {_term_str(self.rhs)}"


def _term_str(t: tuple) -> str:
    kind = t[0]
    if kind == "const":
        return str(t[1])
    if kind == "pre":
        return t[1]
    if kind == "post":
        return f"{t[1]}'"
    if kind == "preloc":
        return "loc"
    return "loc'"


def pre(name: str) -> tuple:
    return ("pre", name)


def post(name: str) -> tuple:
    return ("post", name)


def const(n: int) -> tuple:
    return ("const", n)


PRE_LOC = ("preloc",)
POST_LOC = ("postloc",)


# Rank expressions: ("const", n) | ("var", name) | ("loc",)
# | ("add", l, r) | ("monus", l, r); subtraction truncates at zero.


def rank_const(n: int) -> tuple:
    return ("const", n)


def rank_var(name: str) -> tuple:
    return ("var", name)


RANK_LOC = ("loc",)


def rank_monus(l: tuple, r: tuple) -> tuple:
    return ("monus", l, r)


def rank_str(expr: tuple) -> str:
    kind = expr[0]
    if kind == "const":
        return str(expr[1])
    if kind == "var":
        return expr[1]
    if kind == "loc":
        return "loc"
    op = "+" if kind == "add" else "-"
    return f"{rank_str(expr[1])} {op} {rank_str(expr[2])}"


def parse_rank(text: str) -> tuple:
    """Parse ``term (('+'|'-') term)*`` with '-' truncating at zero."""
    tokens = text.split()
    if not tokens:
        raise ParseError("empty rank expression")

    def term(tok: str) -> tuple:
        if tok == "loc":
            return RANK_LOC
        if tok.isdigit():
            return rank_const(int(tok))
        if tok.isidentifier():
            return rank_var(tok)
        raise ParseError(f"bad rank term {tok!r}")

    expr = term(tokens[0])
    i = 1
    while i < len(tokens):
        op = tokens[i]
        if op not in "+-" or i + 1 >= len(tokens):
            raise ParseError(f"bad rank expression {text!r}")
        rhs = term(tokens[i + 1])
        expr = ("add" if op == "+" else "monus", expr, rhs)
        i += 2
    return expr


def parse_atom(text: str) -> Atom:
    for op in ("<", "="):
        if op in text:
            lhs, rhs = text.split(op, 1)
            return Atom(_parse_atom_term(lhs.strip()), op, _parse_atom_term(rhs.strip()))
    raise ParseError(f"atom {text!r} has no comparison operator")


def _parse_atom_term(tok: str) -> tuple:
    if tok == "loc":
        return PRE_LOC
    if tok == "loc'":
        return POST_LOC
    if tok.isdigit():
        return const(int(tok))
    if tok.endswith("'") and tok[:-1].isidentifier():
        return post(tok[:-1])
    if tok.isidentifier():
        return pre(tok)
    raise ParseError(f"bad atom term {tok!r}")


FALSE_ATOM = Atom(const(0), "<", const(0))


@dataclass(frozen=True)
class ConstraintRelation:
    """A ranked relation in serializable constraint form.

    Membership: the pre state's location lies in ``pre_locations`` (None
    means unrestricted), likewise the post state, and every atom holds.
    The rank evaluates on a single state; the certificate obligation is
    that it strictly decreases from pre to post on every member pair.
    """

    name: str
    atoms: tuple[Atom, ...]
    rank: tuple
    pre_locations: frozenset[int] | None = None
    post_locations: frozenset[int] | None = None

    def mentions_loc(self) -> bool:
        def term_has_loc(t: tuple) -> bool:
            return t[0] in ("preloc", "postloc")

        def rank_has_loc(e: tuple) -> bool:
            if e[0] == "loc":
                return True
            if e[0] in ("add", "monus"):
                return rank_has_loc(e[1]) or rank_has_loc(e[2])
            return False

        return (
            any(term_has_loc(a.lhs) or term_has_loc(a.rhs) for a in self.atoms)
            or rank_has_loc(self.rank)
            or self.pre_locations is not None
            or self.post_locations is not None
        )

    def is_unsatisfiable(self) -> bool:
        for a in self.atoms:
            if a.lhs[0] == "const" and a.rhs[0] == "const":
                l, r = a.lhs[1], a.rhs[1]
                if (a.op == "<" and not l < r) or (a.op == "=" and l != r):
                    return True
        return False

    def renamed(self, mapping: Mapping[str, str]) -> "ConstraintRelation":
        def rename_term(t: tuple) -> tuple:
            if t[0] in ("pre", "post"):
                return (t[0], mapping.get(t[1], t[1]))
            return t

        def rename_rank(e: tuple) -> tuple:
            if e[0] == "var":
                return ("var", mapping.get(e[1], e[1]))
            if e[0] in ("add", "monus"):
                return (e[0], rename_rank(e[1]), rename_rank(e[2]))
            return e

        return ConstraintRelation(
            self.name,
            tuple(Atom(rename_term(a.lhs), a.op, rename_term(a.rhs)) for a in self.atoms),
            rename_rank(self.rank),
            self.pre_locations,
            self.post_locations,
        )

    def guarded(self, guard: Iterable[Atom], name: str) -> "ConstraintRelation":
        return ConstraintRelation(
            name,
            tuple(guard) + self.atoms,
            self.rank,
            self.pre_locations,
            self.post_locations,
        )

    def compile_member(self, p: Program) -> Callable[[State, State], bool]:
        def term_fn(t: tuple) -> Callable[[State, State], int]:
            kind = t[0]
            if kind == "const":
                v = t[1]
                return lambda s, s2: v
            if kind == "pre":
                i = p.var_index(t[1])
                return lambda s, s2: s.env[i]
            if kind == "post":
                i = p.var_index(t[1])
                return lambda s, s2: s2.env[i]
            if kind == "preloc":
                return lambda s, s2: s.location
            return lambda s, s2: s2.location

        checks = []
        for a in self.atoms:
            lf, rf = term_fn(a.lhs), term_fn(a.rhs)
            if a.op == "<":
                checks.append(lambda s, s2, lf=lf, rf=rf: lf(s, s2) < rf(s, s2))
            else:
                checks.append(lambda s, s2, lf=lf, rf=rf: lf(s, s2) == rf(s, s2))
        pre_locs, post_locs = self.pre_locations, self.post_locations

        def member(s: State, s2: State) -> bool:
            if pre_locs is not None and s.location not in pre_locs:
                return False
            if post_locs is not None and s2.location not in post_locs:
                return False
            return all(c(s, s2) for c in checks)

        return member

    def compile_rank(self, p: Program) -> Callable[[State], int]:
        def eval_rank(e: tuple, s: State) -> int:
            kind = e[0]
            if kind == "const":
                return e[1]
            if kind == "var":
                return s.env[p.var_index(e[1])]
            if kind == "loc":
                return s.location
            l = eval_rank(e[1], s)
            r = eval_rank(e[2], s)
            return l + r if kind == "add" else max(0, l - r)

        return lambda s: eval_rank(self.rank, s)


@dataclass(frozen=True)
class OpaqueRelation:
    """A ranked relation given by black-box membership and rank functions."""

    name: str
    membership: Callable[[State, State], bool]
    rank_fn: Callable[[State], int]

    def compile_member(self, p: Program) -> Callable[[State, State], bool]:
        return self.membership

    def compile_rank(self, p: Program) -> Callable[[State], int]:
        return self.rank_fn


Relation = Union[ConstraintRelation, OpaqueRelation]


@dataclass(frozen=True)
class TransitionInvariant:
    """A nonempty list of ranked relations; ``k`` is its length."""

    relations: tuple[Relation, ...]

    def __post_init__(self):
        if not self.relations:
            raise ValueError("invariant needs at least one relation")

    @property
    def k(self) -> int:
        return len(self.relations)


# --- invariant checking ------------------------------------------------------


@dataclass
class InvariantReport:
    """Outcome of checking every ordered pair of a bounded trace."""

    trace_length: int
    reached_final: bool
    pairs_checked: int
    uncovered: list[tuple[int, int]] = field(default_factory=list)
    rank_violations: list[tuple[int, int, str]] = field(default_factory=list)
    uncovered_total: int = 0
    rank_violation_total: int = 0

    MAX_LISTED = 20

    @property
    def ok(self) -> bool:
        return self.uncovered_total == 0 and self.rank_violation_total == 0

    def to_doc(self) -> dict:
        return {
            "trace_length": self.trace_length,
            "reached_final": self.reached_final,
            "pairs_checked": self.pairs_checked,
            "ok": self.ok,
            "uncovered_total": self.uncovered_total,
            "rank_violation_total": self.rank_violation_total,
            "uncovered": [list(u) for u in self.uncovered],
            "rank_violations": [list(v) for v in self.rank_violations],
        }


def check_invariant(
    p: Program,
    s0: State,
    inv: TransitionInvariant,
    max_steps: int = 10_000,
) -> InvariantReport:
    """Check coverage and rank descent over all trace pairs (i < j).

    Every ordered pair of distinct trace states must belong to at least
    one relation of the invariant, and every relation containing a pair
    must strictly decrease its rank on it. Violations are collected, not
    raised.
    """
    trace = run_trace(p, s0, max_steps)
    states = trace.states
    members = [r.compile_member(p) for r in inv.relations]
    ranks = [r.compile_rank(p) for r in inv.relations]
    values = [[rank(s) for s in states] for rank in ranks]
    report = InvariantReport(
        trace_length=len(states),
        reached_final=trace.complete,
        pairs_checked=len(states) * (len(states) - 1) // 2,
    )
    for i in range(len(states)):
        si = states[i]
        for j in range(i + 1, len(states)):
            sj = states[j]
            covered = False
            for r, member in enumerate(members):
                if member(si, sj):
                    if values[r][j] < values[r][i]:
                        covered = True
                    else:
                        report.rank_violation_total += 1
                        if len(report.rank_violations) < report.MAX_LISTED:
                            report.rank_violations.append(
                                (i, j, inv.relations[r].name)
                            )
            if not covered:
                report.uncovered_total += 1
                if len(report.uncovered) < report.MAX_LISTED:
                    report.uncovered.append((i, j))
    return report


# --- the measure sequence and the step bound ---------------------------------


class PhiSequence:
    """Rank-tuple measure of the growing trace prefix, frozen at the end.

    Each trace state maps to the tuple of all relation ranks; the prefix
    of length x+1 embeds into a colored tree whose height below ``w^k``
    yields a k-vector. Extending the prefix strictly decreases the
    vector lexicographically until the final state repeats, after which
    the value is constant; that freeze point makes the sequence usable
    by the closed-form path of ``bound_g``.
    """

    def __init__(
        self,
        p: Program,
        s0: State,
        inv: TransitionInvariant,
        max_steps: int = 100_000,
    ):
        from .erdos import ErdosTree, height_of_tree
        from .ordinals import to_vector

        trace = run_trace(p, s0, max_steps)
        if not trace.complete:
            raise BudgetExceeded(
                f"no final state within {max_steps} steps; the measure "
                "sequence would not freeze"
            )
        ranks = [r.compile_rank(p) for r in inv.relations]
        self.points = [tuple(rank(s) for rank in ranks) for s in trace.states]
        self.k = inv.k
        tree = ErdosTree.empty(self.k)
        vecs: list[tuple[int, ...]] = []
        seen: list[tuple[int, ...]] = []
        for pt in self.points:
            seen.append(pt)
            for earlier in seen[:-1]:
                if not any(pt[h] < earlier[h] for h in range(self.k)):
                    raise NotHomogeneous(
                        f"rank tuples {earlier} -> {pt} do not descend; "
                        "the invariant does not cover this trace"
                    )
            tree = tree.insert(pt)
            vecs.append(to_vector(height_of_tree(tree), self.k))
        self.vectors = vecs
        self.final_step = len(vecs) - 1

    def value(self, x: int) -> tuple[int, ...]:
        return self.vectors[min(x, self.final_step)]

    def sequence(self) -> SequenceFn:
        return SequenceFn(
            self.value, self.k, eventually_constant_from=self.final_step
        )


def phi(
    p: Program,
    s0: State,
    inv: TransitionInvariant,
    x: int,
    max_steps: int = 100_000,
) -> tuple[int, ...]:
    """The measure vector of the trace prefix ``s0 .. t^x(s0)``."""
    return PhiSequence(p, s0, inv, max_steps).value(x)


def step_bound(
    p: Program,
    s0: State,
    inv: TransitionInvariant,
    max_steps: int = 100_000,
    max_value: int | None = None,
) -> int:
    """A number of steps within which the program reaches a final state.

    The measure sequence of a covered trace descends lexicographically
    while the program runs, and the descent bound of that sequence
    therefore caps the step count. The result is exact but can be
    astronomically loose.
    """
    seq = PhiSequence(p, s0, inv, max_steps).sequence()
    return bound_g(seq, 0, max_value=max_value)


# --- serialization -----------------------------------------------------------
#
# Program text: a ``vars`` line, then one command per line with its
# preorder location, two spaces of indentation per nesting level, and a
# bare ``else`` line separating the branches of an ``if``.


def program_to_text(p: Program) -> str:
    lines = [f"vars {' '.join(p.variables)}"] if p.variables else ["vars"]
    loc = 0

    def emit(cmds: Sequence[Cmd], depth: int) -> None:
        nonlocal loc
        pad = "  " * depth
        for c in cmds:
            if isinstance(c, Assign):
                lines.append(f"{loc}: {pad}{c.var} := {c.expr}")
                loc += 1
            elif isinstance(c, While):
                lines.append(f"{loc}: {pad}while {c.left} < {c.right}")
                loc += 1
                emit(c.body, depth + 1)
            else:
                lines.append(f"{loc}: {pad}if {c.left} < {c.right}")
                loc += 1
                emit(c.then_body, depth + 1)
                lines.append(f"{pad}else")
                emit(c.else_body, depth + 1)
    emit(p.body, 0)
    return "\n".join(lines) + "\n"


def program_from_text(text: str) -> Program:
    raw = [l for l in text.splitlines() if l.strip()]
    if not raw or not raw[0].startswith("vars"):
        raise ParseError("program text must start with a 'vars' line")
    variables = tuple(raw[0].split()[1:])

    # Each parsed line: (loc or None for else, depth, payload)
    parsed = []
    for line in raw[1:]:
        if line.strip() == "else":
            depth = (len(line) - len(line.lstrip())) // 2
            parsed.append((None, depth, "else"))
            continue
        head, _, rest = line.partition(":")
        if not head.strip().isdigit():
            raise ParseError(f"missing location in line {line!r}")
        loc = int(head.strip())
        body = rest[1:] if rest.startswith(" ") else rest
        depth = (len(body) - len(body.lstrip())) // 2
        parsed.append((loc, depth, body.strip()))

    pos = 0

    def parse_block(depth: int) -> tuple[Cmd, ...]:
        nonlocal pos
        cmds: list[Cmd] = []
        while pos < len(parsed):
            loc, d, payload = parsed[pos]
            if payload == "else" or d < depth:
                break
            if d > depth:
                raise ParseError(f"unexpected indentation in {payload!r}")
            pos += 1
            if payload.startswith("while "):
                left, right = _parse_cond(payload[len("while ") :])
                cmds.append(While(left, right, parse_block(depth + 1)))
            elif payload.startswith("if "):
                left, right = _parse_cond(payload[len("if ") :])
                then_body = parse_block(depth + 1)
                if (
                    pos < len(parsed)
                    and parsed[pos][2] == "else"
                    and parsed[pos][1] == depth
                ):
                    pos += 1
                    else_body = parse_block(depth + 1)
                else:
                    raise ParseError("if without matching else line")
                cmds.append(If(left, right, then_body, else_body))
            else:
                cmds.append(_parse_assign(payload))
        return tuple(cmds)

    body = parse_block(0)
    if pos != len(parsed):
        raise ParseError(f"unparsed trailing line {parsed[pos][2]!r}")
    program = Program(variables, body)
    locs = [entry[0] for entry in parsed if entry[0] is not None]
    if locs != list(range(len(locs))):
        raise ParseError("locations must number the commands in preorder")
    return program


def _parse_cond(text: str) -> tuple[str, str]:
    parts = text.split("<")
    if len(parts) != 2:
        raise ParseError(f"bad condition {text!r}")
    return parts[0].strip(), parts[1].strip()


def _parse_assign(text: str) -> Assign:
    if ":=" not in text:
        raise ParseError(f"bad command {text!r}")
    var, _, rhs = text.partition(":=")
    var = var.strip()
    rhs = rhs.strip()
    if rhs.isdigit():
        return Assign(var, Const(int(rhs)))
    if rhs.endswith("+ 1"):
        return Assign(var, Inc(rhs[:-3].strip()))
    if rhs.endswith("- 1"):
        return Assign(var, Dec(rhs[:-3].strip()))
    if rhs.isidentifier():
        return Assign(var, Var(rhs))
    raise ParseError(f"bad expression {rhs!r}")


def invariant_to_doc(inv: TransitionInvariant) -> list[dict]:
    doc = []
    for r in inv.relations:
        if not isinstance(r, ConstraintRelation):
            raise ValueError(f"relation {r.name!r} is opaque and not serializable")
        doc.append(
            {
                "name": r.name,
                "pre_locations": sorted(r.pre_locations)
                if r.pre_locations is not None
                else None,
                "post_locations": sorted(r.post_locations)
                if r.post_locations is not None
                else None,
                "atoms": [str(a) for a in r.atoms],
                "rank": rank_str(r.rank),
            }
        )
    return doc


def invariant_from_doc(doc: Sequence[Mapping]) -> TransitionInvariant:
    relations = []
    for entry in doc:
        relations.append(
            ConstraintRelation(
                name=entry["name"],
                atoms=tuple(parse_atom(a) for a in entry["atoms"]),
                rank=parse_rank(entry["rank"]),
                pre_locations=frozenset(entry["pre_locations"])
                if entry.get("pre_locations") is not None
                else None,
                post_locations=frozenset(entry["post_locations"])
                if entry.get("post_locations") is not None
                else None,
            )
        )
    return TransitionInvariant(tuple(relations))


def invariant_to_json(inv: TransitionInvariant) -> str:
    return json.dumps(invariant_to_doc(inv), sort_keys=True, indent=2)


def invariant_from_json(text: str) -> TransitionInvariant:
    return invariant_from_doc(json.loads(text))


def trace_to_doc(p: Program, trace: Trace) -> list[dict]:
    return [
        {"location": s.location, "env": s.env_dict(p)} for s in trace.states
    ]


def trace_from_doc(p: Program, doc: Sequence[Mapping]) -> Trace:
    states = []
    for entry in doc:
        env = tuple(int(entry["env"][name]) for name in p.variables)
        states.append(State(int(entry["location"]), env))
    complete = bool(states) and is_final(p, states[-1])
    return Trace(states, complete)
