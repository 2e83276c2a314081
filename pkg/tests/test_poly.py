from fractions import Fraction

import mpmath
from hypothesis import given, strategies as st

from parabola_surface.poly import Poly

coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), max_size=5)


def test_zero_and_trailing_zeros():
    assert Poly([0, 0]).coeffs == ()
    assert Poly([1, 2, 0]).degree == 1
    assert str(Poly()) == "0"


def test_str():
    assert str(Poly([4, 2])) == "2*c + 4"
    assert str(Poly([0, -1, 3])) == "3*c^2 - c"


def test_exact_and_mpf_evaluation():
    p = Poly([Fraction(1, 3), 2])
    assert p(Fraction(1, 2)) == Fraction(4, 3)
    with mpmath.workprec(100):
        assert abs(p(mpmath.mpf("0.5")) - mpmath.mpf(4) / 3) < mpmath.mpf(2) ** -95


def test_derivative():
    assert Poly([1, 2, 3]).derivative() == Poly([2, 6])


@given(coeffs, coeffs, st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_ring_operations_commute_with_evaluation(a, b, x):
    p, q = Poly(a), Poly(b)
    assert (p + q)(x) == p(x) + q(x)
    assert (p * q)(x) == p(x) * q(x)
    assert (p - q)(x) == p(x) - q(x)
