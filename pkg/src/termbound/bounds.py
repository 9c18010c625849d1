"""Primitive recursive bounds for lexicographic descent.

Given a total sequence of k-tuples of naturals, a strict lexicographic
descent cannot continue forever; ``bound_g`` computes, by recursion on
the number of components, a point by which a non-descent must occur, and
``find_nondescent`` locates the least such point inside the bound.

For one component the bound is ``n + sigma(n) + 1``. For k+1 components
it iterates the k-component bound of the tail:

    H(0, x) = x,   H(i, x) = g_k(H(i-1, x) + 1),
    g(n)    = H(sigma_1(n) + 2, n),

which splits ``[n, g(n)]`` into sigma_1(n) + 2 intervals each containing
a tail non-descent; the head component can strictly decrease at most
sigma_1(n) + 1 times across them.

The bound grows non-elementarily in k, so evaluation is budgeted. When a
sequence is known to be eventually constant (every trace measure from
the interpreter is, once the program halts), each level's bound function
becomes ``x + constant`` above the freeze point, and the iteration is
finished off in closed form; values stay exact however large.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import BudgetExceeded, LemmaViolated, LengthMismatch, NoWitness

DEFAULT_MAX_ITERATIONS = 2_000_000


@dataclass(frozen=True)
class SequenceFn:
    """A total deterministic sequence of k-tuples of naturals.

    ``eventually_constant_from`` is an optional promise that
    ``fn(m) == fn(F)`` for every ``m >= F``; it licenses the closed-form
    evaluation in ``bound_g`` and is trusted, not checked.
    """

    fn: Callable[[int], tuple[int, ...]]
    k: int
    eventually_constant_from: int | None = None

    def __call__(self, n: int) -> tuple[int, ...]:
        value = self.fn(n)
        if len(value) != self.k:
            raise ValueError(f"sequence produced {value}, expected {self.k} components")
        return value

    @classmethod
    def constant(cls, values: Sequence[int]) -> "SequenceFn":
        values = tuple(values)
        return cls(lambda n: values, len(values), eventually_constant_from=0)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "SequenceFn":
        """Prefix given explicitly; the last row repeats forever."""
        rows = [tuple(r) for r in rows]
        if not rows:
            raise ValueError("need at least one row")
        k = len(rows[0])
        if any(len(r) != k for r in rows):
            raise ValueError("rows of unequal length")
        last = len(rows) - 1

        def fn(n: int) -> tuple[int, ...]:
            return rows[min(n, last)]

        return cls(fn, k, eventually_constant_from=last)


def lex_le(u: Sequence[int], v: Sequence[int]) -> bool:
    """Lexicographic u <= v for tuples of equal length."""
    if len(u) != len(v):
        raise LengthMismatch(f"{len(u)} vs {len(v)} components")
    return tuple(u) <= tuple(v)


def find_adjacent_increase(sigma1: Callable[[int], int], m: int, n: int) -> int:
    """Least p in [m, n-1] with sigma1(p) < sigma1(p+1).

    A witness exists whenever m < n and sigma1(m) < sigma1(n); the scan
    is the decidable content of that statement. Raises NoWitness only
    when the precondition is violated.
    """
    for p in range(m, n):
        if sigma1(p) < sigma1(p + 1):
            return p
    raise NoWitness(f"no adjacent increase in [{m}, {n - 1}]")


@dataclass
class _Budget:
    max_value: int | None
    max_iterations: int
    iterations: int = 0

    def spend(self) -> None:
        self.iterations += 1
        if self.iterations > self.max_iterations:
            raise BudgetExceeded(
                f"bound evaluation exceeded {self.max_iterations} iterations"
            )

    def check_value(self, x: int) -> int:
        if self.max_value is not None and x > self.max_value:
            raise BudgetExceeded(f"bound value exceeded ceiling {self.max_value}")
        return x


@dataclass
class _Evaluator:
    sigma: SequenceFn
    budget: _Budget
    values: dict[int, tuple[int, ...]] = field(default_factory=dict)
    memo: dict[tuple[int, int], int] = field(default_factory=dict)
    deltas: dict[int, int] = field(default_factory=dict)

    def component(self, n: int, idx: int) -> int:
        freeze = self.sigma.eventually_constant_from
        if freeze is not None and n > freeze:
            n = freeze
        row = self.values.get(n)
        if row is None:
            row = self.sigma(n)
            self.values[n] = row
        return row[idx]

    def delta(self, depth: int) -> int:
        """Increment of the depth-level bound above the freeze point.

        g_1(x) = x + c_k + 1 there, and each further level applies the
        previous one sigma-component + 2 times with a +1 between steps.
        """
        cached = self.deltas.get(depth)
        if cached is not None:
            return cached
        freeze = self.sigma.eventually_constant_from
        assert freeze is not None
        head = self.sigma.k - depth
        if depth == 1:
            d = self.component(freeze, self.sigma.k - 1) + 1
        else:
            d = (self.component(freeze, head) + 2) * (self.delta(depth - 1) + 1)
        self.deltas[depth] = d
        return d

    def bound(self, depth: int, n: int) -> int:
        """Bound for the last ``depth`` components, evaluated at n."""
        freeze = self.sigma.eventually_constant_from
        if freeze is not None and n >= freeze:
            return self.budget.check_value(n + self.delta(depth))
        key = (depth, n)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        head = self.sigma.k - depth
        if depth == 1:
            result = self.budget.check_value(n + self.component(n, head) + 1)
        else:
            steps = self.component(n, head) + 2
            x = n
            done = 0
            while done < steps:
                if freeze is not None and x >= freeze:
                    x += (steps - done) * (self.delta(depth - 1) + 1)
                    break
                self.budget.spend()
                x = self.bound(depth - 1, x + 1)
                done += 1
            result = self.budget.check_value(x)
        self.memo[key] = result
        return result


def bound_g(
    sigma: SequenceFn,
    n: int,
    max_value: int | None = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> int:
    """A point by which the lexicographic descent of sigma must pause.

    Raises BudgetExceeded when the value passes ``max_value`` or the
    evaluation needs more than ``max_iterations`` iteration steps.
    """
    if sigma.k < 1:
        raise ValueError("sequence must have at least one component")
    if n < 0:
        raise ValueError("n must be a natural number")
    evaluator = _Evaluator(sigma, _Budget(max_value, max_iterations))
    return evaluator.bound(sigma.k, n)


def find_nondescent(
    sigma: SequenceFn,
    n: int,
    max_value: int | None = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> int:
    """Least m in [n, bound_g(sigma, n)] with sigma(m) <=_lex sigma(m+1).

    Raises LemmaViolated if the whole interval strictly descends, which
    would refute the bound construction; tests treat that as failure.
    """
    limit = bound_g(sigma, n, max_value=max_value, max_iterations=max_iterations)
    m = n
    while m <= limit:
        if m - n > max_iterations:
            raise BudgetExceeded(
                f"non-descent scan exceeded {max_iterations} evaluations"
            )
        if lex_le(sigma(m), sigma(m + 1)):
            return m
        m += 1
    raise LemmaViolated(
        f"strict lexicographic descent throughout [{n}, {limit}]"
    )
