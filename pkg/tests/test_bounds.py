import pytest

from termbound.bounds import (
    SequenceFn,
    bound_g,
    find_adjacent_increase,
    find_nondescent,
    lex_le,
)
from termbound.errors import BudgetExceeded, LengthMismatch, NoWitness


class TestLexLe:
    def test_reflexive(self):
        assert lex_le((0, 0), (0, 0))

    def test_first_coordinate_decides(self):
        assert lex_le((1, 9), (2, 0))

    def test_asymmetry(self):
        assert not lex_le((2, 0), (1, 9))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            lex_le((1,), (1, 2))


class TestFindAdjacentIncrease:
    def test_identity(self):
        assert find_adjacent_increase(lambda n: n, 0, 3) == 0

    def test_scan(self):
        values = [5, 5, 2, 9]
        assert find_adjacent_increase(lambda n: values[n], 0, 3) == 2

    def test_no_witness_when_precondition_violated(self):
        with pytest.raises(NoWitness):
            find_adjacent_increase(lambda n: 7, 0, 3)

    def test_postcondition_on_random_instances(self):
        import random

        rng = random.Random(17)
        for _ in range(200):
            values = [rng.randint(0, 9) for _ in range(10)]
            m = rng.randint(0, 8)
            n = rng.randint(m + 1, 9)
            if values[m] < values[n]:
                p = find_adjacent_increase(lambda i: values[i], m, n)
                assert m <= p < n and values[p] < values[p + 1]


class TestBoundG:
    def test_one_component_constant(self):
        sigma = SequenceFn.constant((7,))
        assert bound_g(sigma, 0) == 8

    def test_one_component_descending(self):
        sigma = SequenceFn(lambda n: (max(0, 5 - n),), 1, eventually_constant_from=5)
        assert bound_g(sigma, 0) == 6

    def test_two_components_unfolds_twice(self):
        sigma = SequenceFn.constant((0, 0))
        # H(2, 0) with the tail bound g1(x) = x + 1.
        assert bound_g(sigma, 0) == 4

    def test_value_ceiling(self):
        sigma = SequenceFn.constant((10**6, 10**6, 10**6))
        with pytest.raises(BudgetExceeded):
            bound_g(sigma, 0, max_value=10**9)

    def test_closed_form_matches_iteration(self):
        # Same sequence with and without the eventual-constancy promise.
        rows = [(3, 1), (2, 4), (2, 2), (1, 1)]
        hinted = SequenceFn.from_rows(rows)
        plain = SequenceFn(hinted.fn, 2)
        for n in range(6):
            assert bound_g(hinted, n) == bound_g(plain, n)

    def test_k_one_sharpness(self):
        # A strict descent from a constant c lasts at most c steps.
        for c in range(6):
            sigma = SequenceFn.constant((c,))
            assert bound_g(sigma, 0) == c + 1


class TestFindNondescent:
    def test_constant(self):
        assert find_nondescent(SequenceFn.constant((3, 3)), 0) == 0

    def test_scalar_descent(self):
        sigma = SequenceFn.from_rows([(5,), (4,), (3,), (3,)])
        assert find_nondescent(sigma, 0) == 2

    def test_lexicographic_scan(self):
        sigma = SequenceFn.from_rows([(1, 1), (1, 0), (0, 5), (0, 4), (0, 4)])
        assert find_nondescent(sigma, 0) == 3

    def test_within_bound_on_corpus(self):
        corpus = [
            SequenceFn.constant((2,)),
            SequenceFn.constant((0, 0)),
            SequenceFn.constant((3, 1, 4)),
            SequenceFn.from_rows([(3,), (2,), (1,), (0,), (0,)]),
            SequenceFn.from_rows([(2, 2), (2, 1), (2, 0), (1, 5), (1, 4), (0, 0), (0, 0)]),
            SequenceFn.from_rows(
                [(1, 1, 1), (1, 1, 0), (1, 0, 3), (0, 2, 2), (0, 2, 2)]
            ),
        ]
        for sigma in corpus:
            for n in range(6):
                m = find_nondescent(sigma, n)
                assert n <= m <= bound_g(sigma, n)
                assert lex_le(sigma(m), sigma(m + 1))
