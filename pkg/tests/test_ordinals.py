import random

import pytest
from hypothesis import given, strategies as st

from termbound.errors import DomainTooLarge, ParseError
from termbound.ordinals import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    add,
    cmp,
    exp_base_k,
    nat_prod_nat,
    nat_sum,
    parse_ordinal,
    to_vector,
)

w = OMEGA
o = parse_ordinal


def small_ordinals(max_exp=3, max_coeff=9, max_terms=4):
    """Strategy for ordinals below w^(max_exp+1) with finite exponents."""

    def build(draw_exps, draw_coeffs):
        exps = sorted(set(draw_exps), reverse=True)
        terms = tuple(
            (Ordinal.from_int(e), c) for e, c in zip(exps, draw_coeffs)
        )
        return Ordinal(terms)

    return st.builds(
        build,
        st.lists(st.integers(0, max_exp), max_size=max_terms),
        st.lists(st.integers(1, max_coeff), min_size=max_terms, max_size=max_terms),
    )


class TestConstruction:
    def test_zero_is_empty(self):
        assert ZERO.is_zero
        assert ZERO.terms == ()

    def test_canonical_rejects_bad_coefficient(self):
        with pytest.raises(ValueError):
            Ordinal(((ZERO, 0),))

    def test_canonical_rejects_nondecreasing_exponents(self):
        with pytest.raises(ValueError):
            Ordinal(((ZERO, 1), (ONE, 1)))

    def test_equality_is_structural(self):
        assert nat_sum(w, 1) == add(w, 1)
        assert hash(nat_sum(w, 1)) == hash(add(w, 1))

    def test_int_equality(self):
        assert Ordinal.from_int(7) == 7
        assert w != 7


class TestCmp:
    def test_zero_zero(self):
        assert cmp(0, 0) == 0

    def test_omega_above_finite(self):
        assert cmp(w, 5) > 0

    def test_same_exponent_coefficient_decides(self):
        assert cmp(o("w*2+1"), o("w*2+3")) < 0

    def test_prefix_is_smaller(self):
        assert cmp(o("w*2"), o("w*2+3")) < 0


class TestAdd:
    def test_absorption(self):
        assert add(1, w) == w

    def test_successor(self):
        assert add(w, 1) == o("w+1")

    def test_merge(self):
        assert add(o("w*2+3"), o("w+1")) == o("w*3+1")

    def test_not_commutative(self):
        assert add(1, w) != add(w, 1)


class TestNatSum:
    def test_identity(self):
        assert nat_sum(0, o("w^2+w")) == o("w^2+w")

    def test_one_plus_omega(self):
        assert nat_sum(1, w) == o("w+1")

    def test_coefficient_wise(self):
        assert nat_sum(o("w*2+1"), o("w+3")) == o("w*3+4")


class TestNatProd:
    def test_zero_factor(self):
        assert nat_prod_nat(o("w^2+5"), 0) == ZERO

    def test_omega_doubled(self):
        assert nat_prod_nat(w, 2) == o("w*2")

    def test_coefficients_scaled(self):
        assert nat_prod_nat(o("w+1"), 2) == o("w*2+2")


class TestExpBaseK:
    def test_power_zero(self):
        assert exp_base_k(2, 0) == ONE

    def test_power_omega(self):
        assert exp_base_k(2, w) == w

    def test_power_omega_times_two(self):
        assert exp_base_k(2, o("w*2")) == o("w^2")

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_omega_times_k_gives_omega_power_k(self, k):
        assert exp_base_k(2, nat_prod_nat(w, k)) == Ordinal.omega_pow(k)

    def test_successor_exponent(self):
        # k^(l+n) = k^l * k^n
        assert exp_base_k(2, o("w+1")) == o("w*2")
        assert exp_base_k(3, o("w*2+2")) == o("w^2*9")

    def test_infinite_exponent_unchanged_by_shift(self):
        assert exp_base_k(2, o("w^(w)")) == o("w^(w^(w))")

    def test_base_below_two_rejected(self):
        with pytest.raises(ValueError):
            exp_base_k(1, w)


class TestToVector:
    def test_zero(self):
        assert to_vector(0, 3) == (0, 0, 0)

    def test_reads_off_coefficients(self):
        assert to_vector(o("w^2*2+3"), 3) == (2, 0, 3)

    def test_boundary_rejected(self):
        with pytest.raises(DomainTooLarge):
            to_vector(o("w^2"), 2)


class TestGrammar:
    @pytest.mark.parametrize(
        "text", ["0", "7", "w", "w*2+1", "w^2*3+w+4", "w^(w)", "w^(w+1)*2+w^3+5"]
    )
    def test_round_trip(self, text):
        assert str(parse_ordinal(text)) == text

    @pytest.mark.parametrize("text", ["w^1", "w^(2)", "w*1", "w^0"])
    def test_redundant_spellings_accepted(self, text):
        parse_ordinal(text)

    @pytest.mark.parametrize("text", ["w+w", "1+w", "3+5", "w*0", "w+0", "", "w^", "x"])
    def test_non_canonical_rejected(self, text):
        with pytest.raises(ParseError):
            parse_ordinal(text)


class TestAlgebraicLaws:
    @given(small_ordinals(), small_ordinals())
    def test_nat_sum_commutative(self, a, b):
        assert nat_sum(a, b) == nat_sum(b, a)

    @given(small_ordinals(), small_ordinals(), small_ordinals())
    def test_nat_sum_associative(self, a, b, c):
        assert nat_sum(nat_sum(a, b), c) == nat_sum(a, nat_sum(b, c))

    @given(small_ordinals(), small_ordinals(), small_ordinals())
    def test_nat_sum_strictly_increasing(self, a, b, b2):
        if cmp(b, b2) < 0:
            assert cmp(nat_sum(a, b), nat_sum(a, b2)) < 0

    @given(small_ordinals(), small_ordinals())
    def test_trichotomy(self, a, b):
        assert [cmp(a, b) < 0, cmp(a, b) == 0, cmp(a, b) > 0].count(True) == 1

    @given(small_ordinals(), small_ordinals(), small_ordinals())
    def test_transitivity(self, a, b, c):
        if cmp(a, b) <= 0 and cmp(b, c) <= 0:
            assert cmp(a, c) <= 0

    @given(st.integers(0, 50), st.integers(0, 50))
    def test_finite_agreement(self, m, n):
        assert add(m, n) == m + n
        assert nat_sum(m, n) == m + n
        assert nat_prod_nat(Ordinal.from_int(m), n) == m * n

    @given(st.integers(2, 4), st.integers(0, 10))
    def test_finite_exponentiation_agreement(self, k, n):
        assert exp_base_k(k, n) == k**n


def test_to_vector_is_an_order_isomorphism():
    rng = random.Random(7)
    for _ in range(300):
        k = rng.randint(1, 4)
        pairs = []
        for _ in range(2):
            vec = tuple(rng.randint(0, 6) for _ in range(k))
            terms = tuple(
                (Ordinal.from_int(k - 1 - i), c)
                for i, c in enumerate(vec)
                if c > 0
            )
            pairs.append((Ordinal(terms), vec))
        (a, va), (b, vb) = pairs
        assert to_vector(a, k) == va
        assert cmp(a, b) == (va > vb) - (va < vb)
