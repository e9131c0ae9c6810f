import os
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multitile.errors import FieldClosureViolation, PrecisionUnreachable, SignIndeterminate
from multitile.scalar import (
    QuadraticSurd,
    Scalar,
    SymbolicGenerator,
    floor,
    scalar_sqrt,
    sign,
    to_interval,
    to_scalar,
)

R2 = scalar_sqrt(2)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=64)


def surd_scalars(radicand=2):
    return st.builds(lambda p, q: to_scalar(p) + scalar_sqrt(radicand, q),
                     fractions, fractions)


class TestSign:
    def test_sqrt2_minus_one_positive(self):
        assert sign(R2 - 1) == 1

    def test_coefficientwise_cancellation(self):
        assert sign(R2 / 2 + R2 / 2 - R2) == 0

    def test_17_sqrt2_over_2_minus_12(self):
        # interval oracle: (17/2)^2 * 2 = 144.5 > 144
        assert sign(R2 * Fraction(17, 2) - 12) == 1

    def test_mixed_sign_branches(self):
        assert sign(to_scalar(2) - R2) == 1
        assert sign(R2 - 2) == -1
        assert sign(-R2 - 1) == -1
        assert sign(scalar_sqrt(5) - scalar_sqrt(5)) == 0

    @given(surd_scalars(), surd_scalars())
    def test_antisymmetry(self, x, y):
        assert sign(x - y) == -sign(y - x)

    @given(surd_scalars())
    def test_sign_matches_interval(self, x):
        s = x.sign()
        lo, hi = x.interval(Fraction(1, 10**9))
        if s > 0:
            assert hi > 0
        elif s < 0:
            assert lo < 0
        else:
            assert lo <= 0 <= hi


class TestFloor:
    def test_rational(self):
        assert floor(to_scalar(Fraction(7, 2))) == 3

    def test_negative_sqrt2(self):
        assert floor(-R2) == -2

    def test_17_sqrt2_over_2(self):
        # brute interval oracle: 17*1.41421/2 = 12.02...
        assert floor(R2 * Fraction(17, 2)) == 12

    @given(surd_scalars())
    def test_floor_bounds(self, x):
        n = x.floor()
        assert to_scalar(n) <= x < to_scalar(n + 1)


class TestInterval:
    def test_containing_third(self):
        lo, hi = to_interval(to_scalar(Fraction(1, 3)), 1)
        assert lo <= Fraction(1, 3) <= hi and hi - lo <= 1

    def test_sqrt2_width(self):
        lo, hi = to_interval(R2, Fraction(1, 100))
        assert hi - lo <= Fraction(1, 100)
        assert lo * lo <= 2 <= hi * hi  # bisection-style containment oracle

    def test_zero_tight(self):
        lo, hi = to_interval(to_scalar(0), Fraction(1, 10**9))
        assert lo == hi == 0


class TestArithmetic:
    @given(surd_scalars(), surd_scalars())
    def test_add_sub_roundtrip(self, x, y):
        assert (x + y) - y == x

    @given(surd_scalars(), surd_scalars())
    def test_field_mul_div_roundtrip(self, x, y):
        if y.sign() == 0:
            return
        assert (x * y) / y == x

    @given(surd_scalars(), fractions)
    def test_rational_scaling_exact(self, x, c):
        assert x * c - x * c == to_scalar(0)

    def test_mul_outside_field_rejected(self):
        r3 = scalar_sqrt(3)
        with pytest.raises(FieldClosureViolation):
            (R2 + 1) * (r3 + 1)
        with pytest.raises(FieldClosureViolation):
            (R2 + r3) * (R2 + r3)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            R2 / to_scalar(0)

    def test_conjugate_division(self):
        assert to_scalar(1) / (1 + R2) == R2 - 1


class TestCanonicalization:
    def test_sqrt8_folds_to_2_sqrt2(self):
        assert scalar_sqrt(8) == 2 * R2

    def test_sqrt_half(self):
        assert scalar_sqrt(Fraction(1, 2)) == R2 / 2

    def test_square_radicand_is_rational(self):
        assert scalar_sqrt(9) == to_scalar(3)

    def test_perfect_square_generator_rejected(self):
        with pytest.raises(ValueError):
            QuadraticSurd(9)

    def test_equality_is_coefficientwise(self):
        assert R2 + 1 == R2 + 1
        assert R2 != scalar_sqrt(3)
        assert hash(R2 + 1) == hash(R2 + 1)


class TestSymbolic:
    def test_sign_from_interval(self):
        alpha = SymbolicGenerator("alpha", Fraction(1, 10), Fraction(2, 10))
        x = Scalar(0, {alpha: Fraction(1)})
        assert x.sign() == 1
        assert (x - 1).sign() == -1

    def test_sign_indeterminate_without_refiner(self):
        alpha = SymbolicGenerator("alpha", Fraction(-1, 10), Fraction(1, 10))
        x = Scalar(0, {alpha: Fraction(1)})
        with pytest.raises(SignIndeterminate):
            x.sign()

    def test_precision_unreachable(self):
        alpha = SymbolicGenerator("alpha", Fraction(0), Fraction(1))
        x = Scalar(0, {alpha: Fraction(1)})
        with pytest.raises(PrecisionUnreachable):
            x.interval(Fraction(1, 100))

    def test_refiner_is_used(self):
        # alpha = sqrt(2) presented symbolically with a bisection refiner.
        def refine(width):
            lo, hi = Fraction(1), Fraction(2)
            while hi - lo > width:
                mid = (lo + hi) / 2
                if mid * mid <= 2:
                    lo = mid
                else:
                    hi = mid
            return lo, hi

        alpha = SymbolicGenerator("alpha", Fraction(1), Fraction(2), refiner=refine)
        x = Scalar(-1, {alpha: Fraction(1)})  # alpha - 1 > 0
        assert x.sign() == 1
        assert x.floor() == 0

    def test_precision_cap_env_override(self):
        alpha = SymbolicGenerator("tiny", Fraction(-1, 2**40), Fraction(1, 2**40))
        x = Scalar(0, {alpha: Fraction(1)})
        old = os.environ.get("MULTITILE_MAX_PRECISION_BITS")
        try:
            os.environ["MULTITILE_MAX_PRECISION_BITS"] = "64"
            with pytest.raises(SignIndeterminate):
                x.sign()
        finally:
            if old is None:
                os.environ.pop("MULTITILE_MAX_PRECISION_BITS", None)
            else:
                os.environ["MULTITILE_MAX_PRECISION_BITS"] = old

    def test_mul_with_symbolic_rejected(self):
        alpha = SymbolicGenerator("alpha", Fraction(1), Fraction(2))
        x = Scalar(0, {alpha: Fraction(1)})
        with pytest.raises(FieldClosureViolation):
            x * x
        # Q-linear operations stay available.
        assert (x + x) == Scalar(0, {alpha: Fraction(2)})


class TestCoercion:
    def test_floats_refused(self):
        with pytest.raises(TypeError):
            to_scalar(0.5)

    def test_comparison_operators(self):
        assert R2 > 1
        assert R2 < Fraction(3, 2)
        assert sorted([R2, to_scalar(1), R2 / 2]) == [R2 / 2, to_scalar(1), R2]
