import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from parabola_surface.farey import (
    ExcludedParity,
    PrecisionExhausted,
    RationalInput,
    ReducedFraction,
    ThetaSyntaxError,
    boundary_holonomy,
    cf_convergents,
    cf_overlap,
    farey_adjacent,
    gsequence,
    parity_class,
    parse_theta,
    recurrence_witness,
    transverse_boundary_measure,
)

SQRT2 = ["1", "4/3", "7/5", "24/17", "41/29", "140/99", "239/169"]


def _random_surds(n, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        d = rng.randint(2, 200)
        if math.isqrt(d) ** 2 == d:
            continue
        a, b, e = rng.randint(-20, 20), rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 9)
        out.append(f"quad:{a},{b},{d},{e}")
    return out


def rewalk(seq, bits=600):
    """Independent check of a G-sequence at higher precision than it was built with."""
    fr = seq.fractions
    with mpmath.workprec(bits):
        theta = mpmath.mpf(seq.theta.value)
        n = fr[0]
        assert n.q == 1 and abs(theta - n.p) < 0.5
        for f, g in zip(fr, fr[1:]):
            assert farey_adjacent(f, g)
        for f in fr:
            assert parity_class(f) != "10"
        if len(fr) >= 2:
            b = abs(fr[1].as_fraction() - n.p) ** -1
            assert b.denominator == 1 and b % 2 == 1
            assert abs(1 / abs(theta - n.p) - int(b)) < 1
        for i in range(2, len(fr)):
            f0, f1, k = fr[i - 2], fr[i - 1], seq.ks[i]
            assert k != 0
            assert (fr[i].p, fr[i].q) in {(f0.p + 2 * k * f1.p, f0.q + 2 * k * f1.q),
                                          (-(f0.p + 2 * k * f1.p), -(f0.q + 2 * k * f1.q))}

            def y(j):
                return mpmath.mpf(f0.p + j * f1.p) / (f0.q + j * f1.q)

            lo, hi = sorted([y(2 * k - 1), y(2 * k + 1)])
            assert lo < theta < hi
            # each sibling's interval excludes θ
            for kk in (k - 1, k + 1):
                if kk == 0:
                    continue
                a, b_ = sorted([y(2 * kk - 1), y(2 * kk + 1)])
                assert not (a < theta < b_)


# --- fractions ----------------------------------------------------------------

def test_parity_classes():
    assert parity_class(ReducedFraction(4, 3)) == "01"
    assert parity_class(ReducedFraction(1, 0)) == "10"
    assert parity_class(ReducedFraction(7, 5)) == "11"
    assert parity_class(ReducedFraction(14, 10)) == "11"


def test_reduced_fraction_normalization():
    f = ReducedFraction(-6, -4)
    assert (f.p, f.q) == (3, 2)
    assert str(ReducedFraction.of("1/0")) == "1/0"
    assert str(ReducedFraction.of(Fraction(-4, 6))) == "-2/3"
    with pytest.raises(ValueError):
        ReducedFraction(0, 0)


# --- θ parsing ------------------------------------------------------------------

def test_theta_descriptors():
    assert abs(float(parse_theta("sqrt:2")) - math.sqrt(2)) < 1e-15
    assert abs(float(parse_theta("quad:1,1,5,2")) - (1 + math.sqrt(5)) / 2) < 1e-15
    th = parse_theta("dec:1.41421356237309504880168872420969807856967187537694@256")
    assert float(th.radius) >= 0.99e-50
    for bad in ["sqrt:x", "pi", "quad:1,1,5,0"]:
        with pytest.raises(ThetaSyntaxError):
            parse_theta(bad)


def test_rational_inputs_rejected():
    with pytest.raises(RationalInput):
        parse_theta("sqrt:9")
    # one decimal digit cannot even fix the first step
    with pytest.raises((RationalInput, PrecisionExhausted)):
        gsequence("dec:1.4@64", 3)
    with pytest.raises(RationalInput):
        gsequence("dec:-0.33333333333333333333333333333333333333@256", 3)
    with pytest.raises(RationalInput):
        gsequence("dec:0.33333333333333333333333333333333333333@256", 3)


# --- G-sequences -----------------------------------------------------------------

def test_sqrt2_sequence():
    seq = gsequence("sqrt:2", 7)
    assert [str(f) for f in seq.fractions] == SQRT2
    assert seq.ks[:2] == [None, None]
    assert seq.ks[2:] == [-1, -2, -1, -2, -1]
    rewalk(seq)


def test_sqrt2_depth_two():
    assert [str(f) for f in gsequence("sqrt:2", 2).fractions] == ["1", "4/3"]


def test_golden_ratio():
    seq = gsequence("quad:1,1,5,2", 14)
    assert str(seq.fractions[0]) == "2"
    rewalk(seq)
    phi = (1 + mpmath.sqrt(5)) / 2
    d = [abs(phi - mpmath.mpf(f.p) / f.q) for f in seq.fractions]
    assert all(b < a for a, b in zip(d, d[1:]))


@pytest.mark.parametrize("theta", _random_surds(20))
def test_random_quadratic_irrationals(theta):
    seq = gsequence(theta, 15)
    rewalk(seq)
    qs = [f.q for f in seq.fractions]
    assert all(b > a for a, b in zip(qs[1:], qs[2:]))
    assert all(c - b >= b - a for a, b, c in zip(qs[1:], qs[2:], qs[3:]))
    t = seq.theta.value
    d = [abs(t - mpmath.mpf(f.p) / f.q) for f in seq.fractions]
    assert all(b < a for a, b in zip(d, d[1:]))
    ov = cf_overlap(theta, 15)
    # the floor convergent is skipped when θ is nearer its ceiling; every later
    # admissible convergent appears, and so does one of each adjacent pair
    assert all(f for c, f in zip(ov.convergents[1:], ov.found[1:]) if parity_class(c) != "10")
    assert all(a or b for a, b in zip(ov.found, ov.found[1:]))
    assert seq.fractions[0] in ov.convergents[:2]
    assert sum(ov.found) >= len(ov.convergents) // 2


@pytest.mark.parametrize("theta", _random_surds(20))
def test_witness_running_minimum_falls_below_threshold(theta):
    w = recurrence_witness(theta, 40, precision=1024)
    assert w[-1][2] < 0.05


def test_depth_15_is_too_short_for_a_long_partial_quotient():
    # √84 − 11 = −[1; 1, 5, 18, ...]: the path walks the 18 intermediate
    # fractions one at a time, so the witness only dips below 0.05 at depth 19
    w = recurrence_witness("quad:-11,1,84,1", 20)
    assert 0.16 < w[14][2] < 0.17
    assert w[17][2] > 0.05 > w[18][2]


def test_depth_validation_and_precision():
    with pytest.raises(ValueError):
        gsequence("sqrt:2", 0)
    # a short decimal runs out of digits long before depth 40
    with pytest.raises((PrecisionExhausted, RationalInput)):
        gsequence("dec:1.41421356237@256", 40)


def test_precision_exhausted_at_low_bits():
    with pytest.raises(PrecisionExhausted):
        gsequence("sqrt:2", 60, precision=64)


# --- witnesses -------------------------------------------------------------------

def test_witness_values():
    w = recurrence_witness("sqrt:2", 12)
    assert abs(w[5][1] - 6 * 99 * abs(math.sqrt(2) - 140 / 99)) < 1e-12
    assert abs(w[5][1] - 0.04286) < 1e-5
    assert w[-1][2] < 0.01
    (one,) = recurrence_witness("sqrt:2", 1)
    assert one[1] <= 0.5


# --- boundary data ------------------------------------------------------------------

def test_boundary_holonomy():
    assert boundary_holonomy(ReducedFraction(0, 1), 2) == (4, 0)
    assert boundary_holonomy(ReducedFraction(1, 1), 1) == (3, 3)
    with pytest.raises(ExcludedParity):
        boundary_holonomy(ReducedFraction(1, 0), 1)


def test_transverse_measure():
    f = ReducedFraction(7, 5)
    assert transverse_boundary_measure(Fraction(7, 5), f, 3) == 0
    v = float(transverse_boundary_measure("sqrt:2", f, 3))
    assert abs(v - 7 * abs(5 * math.sqrt(2) - 7) / math.sqrt(3)) < 1e-12
    assert abs(v - 0.2873) < 1e-3


@given(st.integers(-30, 30), st.integers(1, 30), st.integers(1, 10), st.integers(1, 10))
def test_measure_scales_with_n(p, q, n, n2):
    f = ReducedFraction(p, q)
    if parity_class(f) == "10":
        with pytest.raises(ExcludedParity):
            boundary_holonomy(f, n)
        return
    m1 = transverse_boundary_measure(math.sqrt(3), f, n)
    m2 = transverse_boundary_measure(math.sqrt(3), f, n2)
    odd = parity_class(f) == "11"
    ratio = Fraction(2 * n2 + odd, 2 * n + odd)
    assert abs(m2 - m1 * ratio.numerator / ratio.denominator) <= 1e-12 * max(1, abs(m2))


@given(st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50))
def test_adjacent_admissible_pairs_contain_one_of_each_other_class(p, q, r, s):
    # two Farey neighbours have different parity classes
    f, g = ReducedFraction(p, q), ReducedFraction(r, s)
    if farey_adjacent(f, g):
        assert parity_class(f) != parity_class(g)


# --- continued fractions ---------------------------------------------------------

def test_cf_overlap_sqrt2():
    ov = cf_overlap("sqrt:2", 7)
    assert [str(c) for c in ov.convergents] == ["1", "3/2", "7/5", "17/12", "41/29", "99/70", "239/169"]
    assert ov.found == (True, False, True, False, True, False, True)
    assert ov.admissible_all_found
    assert cf_overlap("sqrt:2", 2).found[0]


def test_cf_convergents_golden_ratio_are_fibonacci_ratios():
    conv = cf_convergents("quad:1,1,5,2", 100)
    assert [str(c) for c in conv] == ["1", "2", "3/2", "5/3", "8/5", "13/8", "21/13", "34/21", "55/34", "89/55", "144/89"]
