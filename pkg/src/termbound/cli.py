"""Batch command-line front end, one subcommand per pipeline stage.

Exit codes: 0 all checks pass, 1 a check reported a violation, 2 parse
or usage error, 3 a configured budget was exceeded. With
``--format structured`` every subcommand prints a single JSON document,
byte-for-byte deterministic for fixed inputs and budgets.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bounds import SequenceFn, bound_g, find_nondescent
from .erdos import embed, erdos_to_json, f_star, f_star_vec
from .errors import BudgetExceeded, ParseError, TermboundError
from .ktree import height_nil
from .ordinals import Ordinal, add, exp_base_k, nat_prod_nat, nat_sum, parse_ordinal
from .prcompile import compile_term, eval_pr, parse_term
from .termlang import (
    check_invariant,
    initial_state,
    invariant_from_doc,
    invariant_to_doc,
    program_from_text,
    program_to_text,
    run_trace,
    step_bound,
    trace_to_doc,
)

# --- ordinal expression mini-language ----------------------------------------
#
#   expr    := primary ((" + " | " # ") primary | " #* " nat)*
#   primary := "exp" "(" nat "," expr ")" | "(" expr ")" | ordinal literal
#
# "+" is the standard sum, "#" the natural sum, "#* n" the natural product
# by n. Operators need surrounding whitespace; "+" without it belongs to
# the ordinal literal ("w*2+1").


class _ExprParser:
    LITERAL_CHARS = set("0123456789w^*")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def parse(self) -> Ordinal:
        value = self.expr()
        if not self.at_end():
            raise ParseError(f"trailing input at position {self.pos}")
        return value

    def expr(self) -> Ordinal:
        value = self.primary()
        while True:
            self.skip_ws()
            if self.text.startswith("#*", self.pos):
                self.pos += 2
                value = nat_prod_nat(value, self.nat())
            elif self.text.startswith("#", self.pos):
                self.pos += 1
                value = nat_sum(value, self.primary())
            elif self.text.startswith("+", self.pos):
                self.pos += 1
                value = add(value, self.primary())
            else:
                return value

    def primary(self) -> Ordinal:
        self.skip_ws()
        if self.text.startswith("exp", self.pos) and self.text[
            self.pos + 3 :
        ].lstrip().startswith("("):
            self.pos = self.text.index("(", self.pos) + 1
            base = self.nat()
            self.skip_ws()
            if not self.text.startswith(",", self.pos):
                raise ParseError("exp needs a base and an ordinal")
            self.pos += 1
            arg = self.expr()
            self.expect(")")
            return exp_base_k(base, arg)
        if self.text.startswith("(", self.pos):
            self.pos += 1
            value = self.expr()
            self.expect(")")
            return value
        return parse_ordinal(self.literal())

    def literal(self) -> str:
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in self.LITERAL_CHARS:
                self.pos += 1
            elif ch == "+" and self.pos + 1 < len(self.text) and self.text[
                self.pos + 1
            ] in "0123456789w":
                self.pos += 1
            elif ch == "(" and self.pos > start and self.text[self.pos - 1] == "^":
                depth += 1
                self.pos += 1
            elif ch == ")" and depth > 0:
                depth -= 1
                self.pos += 1
            else:
                break
        if start == self.pos:
            raise ParseError(f"expected an ordinal at position {start}")
        return self.text[start : self.pos]

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError(f"expected a number at position {start}")
        return int(self.text[start : self.pos])

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            raise ParseError(f"expected {ch!r} at position {self.pos}")
        self.pos += 1


def eval_ordinal_expr(text: str) -> Ordinal:
    return _ExprParser(text).parse()


# --- output helpers -----------------------------------------------------------


def _emit(args, doc: dict, human_lines: list[str]) -> None:
    if args.format == "structured":
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for line in human_lines:
            print(line)


def _parse_point(text: str, k: int | None) -> tuple[int, ...]:
    try:
        point = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise ParseError(f"bad point {text!r}; expected comma-separated naturals")
    if k is not None and len(point) != k:
        raise ParseError(f"point {text!r} does not have {k} coordinates")
    return point


def _parse_assignments(pairs: list[str]) -> dict[str, int]:
    env = {}
    for item in pairs:
        name, _, value = item.partition("=")
        if not name or not value.isdigit():
            raise ParseError(f"bad assignment {item!r}; expected name=nat")
        env[name.strip()] = int(value)
    return env


# --- subcommands ---------------------------------------------------------------


def cmd_ord(args) -> int:
    value = eval_ordinal_expr(args.expr)
    _emit(args, {"result": str(value)}, [str(value)])
    return 0


def cmd_tree_height(args) -> int:
    alpha = parse_ordinal(args.alpha)
    value = height_nil(args.k, alpha)
    _emit(
        args,
        {"k": args.k, "alpha": str(alpha), "height": str(value)},
        [str(value)],
    )
    return 0


def cmd_embed(args) -> int:
    first = _parse_point(args.points[0], None)
    k = args.k if args.k is not None else len(first)
    points = [_parse_point(p, k) for p in args.points]
    tree = embed(points, k)
    measure = f_star(points, k)
    vec = f_star_vec(points, k)
    doc = {
        "k": k,
        "tree": json.loads(erdos_to_json(tree)),
        "f_star": str(measure),
        "f_star_vec": list(vec),
    }
    _emit(
        args,
        doc,
        [
            f"branches: {tree.branch_count()}",
            f"f*: {measure}",
            f"vector: {vec}",
        ],
    )
    return 0


def cmd_bound(args) -> int:
    with open(args.sigma_file) as fh:
        doc = json.load(fh)
    rows = doc["rows"]
    sigma = SequenceFn.from_rows(rows)
    if doc.get("k") is not None and doc["k"] != sigma.k:
        raise ParseError(f"file says k={doc['k']} but rows have {sigma.k} components")
    bound = bound_g(sigma, args.n, max_value=args.max_bound)
    witness = find_nondescent(sigma, args.n, max_value=args.max_bound)
    out = {
        "n": args.n,
        "bound": bound,
        "witness": witness,
        "value_at_witness": list(sigma(witness)),
        "value_after_witness": list(sigma(witness + 1)),
    }
    _emit(
        args,
        out,
        [
            f"bound g({args.n}) = {bound}",
            f"first non-descent at m = {witness}: "
            f"{tuple(sigma(witness))} <= {tuple(sigma(witness + 1))}",
        ],
    )
    return 0


def cmd_compile(args) -> int:
    with open(args.term_file) as fh:
        term = parse_term(fh.read())
    unit = compile_term(term)
    doc = _unit_doc(unit)
    _emit(
        args,
        doc,
        [
            f"program: {unit.program.n_points} commands, "
            f"{len(unit.program.variables)} variables",
            f"inputs: {' '.join(unit.input_vars)}",
            f"result: {unit.result_var}",
            f"invariant: {unit.invariant.k} relations "
            f"({', '.join(r.name for r in unit.invariant.relations)})",
        ],
    )
    return 0


def _unit_doc(unit) -> dict:
    return {
        "program": program_to_text(unit.program),
        "invariant": invariant_to_doc(unit.invariant),
        "result_var": unit.result_var,
        "input_vars": list(unit.input_vars),
    }


def cmd_run(args) -> int:
    with open(args.program_file) as fh:
        program = program_from_text(fh.read())
    s0 = initial_state(program, _parse_assignments(args.set or []))
    trace = run_trace(program, s0, args.max_steps)
    doc = {
        "trace": trace_to_doc(program, trace),
        "reached_final": trace.complete,
        "steps": trace.steps,
    }
    lines = [
        f"{s.location}: {s.env_dict(program)}" for s in trace.states
    ] + [f"steps: {trace.steps} ({'final' if trace.complete else 'budget'})"]
    _emit(args, doc, lines)
    return 0 if trace.complete else 3


def cmd_check(args) -> int:
    with open(args.program_file) as fh:
        program = program_from_text(fh.read())
    with open(args.invariant) as fh:
        invariant = invariant_from_doc(json.load(fh))
    s0 = initial_state(program, _parse_assignments(args.set or []))
    report = check_invariant(program, s0, invariant, args.max_steps)
    doc = report.to_doc()
    _emit(
        args,
        doc,
        [
            f"pairs checked: {report.pairs_checked}",
            f"uncovered: {report.uncovered_total}",
            f"rank violations: {report.rank_violation_total}",
            f"verdict: {'pass' if report.ok else 'FAIL'}",
        ],
    )
    return 0 if report.ok else 1


def cmd_pipeline(args) -> int:
    with open(args.term_file) as fh:
        term = parse_term(fh.read())
    unit = compile_term(term)
    if len(args.inputs) != len(unit.input_vars):
        raise ParseError(
            f"term takes {len(unit.input_vars)} inputs, got {len(args.inputs)}"
        )
    invariant = unit.invariant
    if args.invariant:
        with open(args.invariant) as fh:
            invariant = invariant_from_doc(json.load(fh))

    s0 = initial_state(unit.program, dict(zip(unit.input_vars, args.inputs)))
    trace = run_trace(unit.program, s0, args.max_steps)
    if not trace.complete:
        raise BudgetExceeded(f"no final state within {args.max_steps} steps")
    result = trace.states[-1].env_dict(unit.program)[unit.result_var]
    oracle = eval_pr(term, args.inputs)
    report = check_invariant(unit.program, s0, invariant, args.max_steps)

    bound = None
    bound_holds = None
    if report.ok:
        # The descent bound is exact but astronomically loose; it is
        # reported in full rather than capped by --max-bound.
        bound = step_bound(unit.program, s0, invariant, max_steps=args.max_steps)
        bound_holds = trace.steps <= bound

    ok = report.ok and result == oracle and bool(bound_holds)
    doc = {
        "result": result,
        "oracle": oracle,
        "result_matches": result == oracle,
        "invariant_ok": report.ok,
        "uncovered": report.uncovered_total,
        "rank_violations": report.rank_violation_total,
        "trace_length": len(trace),
        "steps": trace.steps,
        "step_bound": bound,
        "bound_holds": bound_holds,
        "ok": ok,
    }
    lines = [
        f"result: {result} (oracle {oracle})",
        f"invariant: {'pass' if report.ok else 'FAIL'} "
        f"({report.uncovered_total} uncovered, "
        f"{report.rank_violation_total} rank violations)",
        f"steps: {trace.steps}",
        f"step bound: {bound}",
        f"verdict: {'pass' if ok else 'FAIL'}",
    ]
    _emit(args, doc, lines)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="termbound",
        description="Ordinal tree heights and certified termination bounds.",
    )
    parser.add_argument(
        "--format",
        choices=("human", "structured"),
        default="human",
        help="human-readable lines or a single JSON document",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ord", help="evaluate an ordinal expression")
    p.add_argument("expr")
    p.set_defaults(fn=cmd_ord)

    p = sub.add_parser("tree-height", help="height of the empty k-tree below alpha")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("alpha")
    p.set_defaults(fn=cmd_tree_height)

    p = sub.add_parser("embed", help="embed a homogeneous sequence of points")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("points", nargs="+", metavar="P", help="points like 3,4")
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("bound", help="descent bound and non-descent witness")
    p.add_argument("sigma_file")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--max-bound", type=int, default=10**9)
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser("compile", help="compile a primitive recursive term")
    p.add_argument("term_file")
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("run", help="run a program to its final state")
    p.add_argument("program_file")
    p.add_argument("--set", action="append", metavar="VAR=NAT")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("check", help="check an invariant over a bounded trace")
    p.add_argument("program_file")
    p.add_argument("--invariant", required=True)
    p.add_argument("--set", action="append", metavar="VAR=NAT")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser(
        "pipeline", help="compile, run, check and bound a term on inputs"
    )
    p.add_argument("term_file")
    p.add_argument("inputs", nargs="*", type=int)
    p.add_argument("--invariant", help="override the emitted invariant")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.set_defaults(fn=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ParseError, json.JSONDecodeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TermboundError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
