from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopcurrents.intervals import (
    Interval,
    RoundedInterval,
    certify_decreasing_pair,
    sqrt_interval,
)

frac = st.fractions(min_value=-3, max_value=3, max_denominator=16)


class TestInterval:
    def test_point_and_contains(self):
        iv = Interval.point(Fraction(1, 3))
        assert Fraction(1, 3) in iv
        assert iv.width == 0

    def test_inverted_rejected(self):
        with pytest.raises(ValueError):
            Interval(Fraction(1), Fraction(0))

    def test_sub_uses_opposite_endpoints(self):
        a = Interval(Fraction(1), Fraction(2))
        b = Interval(Fraction(0), Fraction(1))
        assert a - b == Interval(Fraction(0), Fraction(2))

    def test_mul_with_negatives(self):
        a = Interval(Fraction(-2), Fraction(1))
        b = Interval(Fraction(-1), Fraction(3))
        assert a * b == Interval(Fraction(-6), Fraction(3))

    def test_even_power_through_zero(self):
        iv = Interval(Fraction(-2), Fraction(1))
        assert iv**2 == Interval(Fraction(0), Fraction(4))
        assert iv**3 == Interval(Fraction(-8), Fraction(1))

    def test_division(self):
        a = Interval(Fraction(1), Fraction(2))
        b = Interval(Fraction(2), Fraction(4))
        assert a / b == Interval(Fraction(1, 4), Fraction(1))
        with pytest.raises(ZeroDivisionError):
            a / Interval(Fraction(-1), Fraction(1))

    def test_strictly_above(self):
        assert Interval(Fraction(2), Fraction(3)).strictly_above(
            Interval(Fraction(0), Fraction(1))
        )
        assert not Interval(Fraction(1), Fraction(3)).strictly_above(
            Interval(Fraction(0), Fraction(2))
        )

    @settings(max_examples=80, deadline=None)
    @given(frac, frac)
    def test_arithmetic_encloses_exact_values(self, a, b):
        ia, ib = Interval.point(a), Interval.point(b)
        assert a + b in ia + ib
        assert a - b in ia - ib
        assert a * b in ia * ib
        assert a**3 in ia**3


class TestSqrt:
    def test_perfect_square_is_exact(self):
        iv = sqrt_interval(Fraction(9, 25), 64)
        assert iv.lo == iv.hi == Fraction(3, 5)

    def test_sqrt_two_enclosure(self):
        iv = sqrt_interval(Fraction(2), 128)
        assert iv.lo**2 <= 2 <= iv.hi**2
        assert iv.width <= Fraction(1, 2**126)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            sqrt_interval(Fraction(-1), 16)

    def test_zero(self):
        iv = sqrt_interval(Fraction(0), 16)
        assert iv.lo == iv.hi == 0


class TestRoundedInterval:
    def test_point_arithmetic_encloses_exact(self):
        a = Fraction(3, 7)
        b = Fraction(5, 11)
        ia = RoundedInterval.point(a, 64)
        ib = RoundedInterval.point(b, 64)
        exact = a * b + a - b / (a + 2)
        got = ia * ib + ia - ib / (ia + 2)
        assert got.lo <= exact <= got.hi
        assert got.width <= Fraction(1, 2**50)

    def test_large_power_stays_small_and_correct(self):
        p = RoundedInterval.point(Fraction(99, 100), 128)
        big = p**4000
        exact = Fraction(99, 100) ** 4000
        assert big.lo <= exact <= big.hi
        # endpoints stay near the working precision, far from 4000*7 bits
        assert big.lo.denominator.bit_length() < 200

    def test_rounding_is_outward(self):
        v = Fraction(1, 3)
        iv = RoundedInterval.point(v, 16) * RoundedInterval.point(v, 16)
        assert iv.lo <= Fraction(1, 9) <= iv.hi
        assert iv.lo != iv.hi  # 1/9 is not dyadic, so rounding must widen

    def test_division(self):
        a = RoundedInterval.point(Fraction(1, 3), 64)
        out = 1 / a
        assert out.lo <= 3 <= out.hi


class TestCertifiedPairs:
    def test_finds_and_certifies_dip(self):
        def f(x, bits):
            v = (x - Fraction(1, 2)) ** 2
            return Interval.point(v)

        grid = [Fraction(k, 8) for k in range(1, 8)]
        found = certify_decreasing_pair(f, grid)
        assert found is not None
        x1, x2, iv1, iv2 = found
        assert x1 < x2
        assert iv1.strictly_above(iv2)

    def test_monotone_yields_none(self):
        def f(x, bits):
            return Interval.point(x)

        assert certify_decreasing_pair(f, [Fraction(1, 4), Fraction(1, 2)]) is None

    def test_refinement_loop_is_used(self):
        calls = []

        def f(x, bits):
            calls.append(bits)
            # width shrinks with bits; values separate only once refined
            pad = Fraction(1, 2**bits)
            center = Fraction(1, 4) if x < Fraction(1, 2) else Fraction(1, 4) - Fraction(1, 2**40)
            return Interval(center - pad, center + pad)

        grid = [Fraction(1, 4), Fraction(3, 4)]
        found = certify_decreasing_pair(f, grid, start_bits=8, max_bits=128)
        assert found is not None
        assert max(calls) > 8
