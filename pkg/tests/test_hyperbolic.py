import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parabola_surface.hyperbolic import (
    ImageOutsideDisk,
    KleinPoint,
    PointOnBoundary,
    TriangleDelta,
    contraction_derivative_check,
    contraction_derivatives,
    eigenvalue_bound_scan,
    klein_distance_cr,
    klein_distance_integral,
    map_Mc,
    translation_length,
)


@st.composite
def disk_points(draw, r_max=0.95):
    r = draw(st.floats(0, r_max))
    a = draw(st.floats(0, 2 * math.pi))
    return KleinPoint(r * math.cos(a), r * math.sin(a))


def _random_points(rng, n, r_max=0.95):
    out = []
    for _ in range(n):
        r, a = r_max * math.sqrt(rng.random()), rng.uniform(0, 2 * math.pi)
        out.append(KleinPoint(r * math.cos(a), r * math.sin(a)))
    return out


def test_points_must_be_interior():
    with pytest.raises(PointOnBoundary):
        KleinPoint(1.0, 0.0)
    with pytest.raises(PointOnBoundary):
        KleinPoint(0.8, 0.7)


def test_distance_to_self():
    p = KleinPoint(0.2, -0.3)
    assert klein_distance_cr(p, p) == 0
    assert klein_distance_integral(p, p) == 0


def test_diameter_distance_is_artanh():
    for t in (0.1, 0.5, 0.9, 0.99):
        d = klein_distance_cr((0, 0), (t, 0))
        assert abs(d - math.atanh(t)) < 1e-12
        assert abs(klein_distance_integral((0, 0), (t, 0)) - math.atanh(t)) < 1e-9
    assert abs(klein_distance_cr((0, 0), (0.5, 0)) - 0.5 * math.log(3)) < 1e-12


def test_two_distances_agree_on_random_pairs():
    rng = random.Random(3)
    pts = _random_points(rng, 200)
    for X, Y in zip(pts[::2], pts[1::2]):
        assert abs(klein_distance_cr(X, Y) - klein_distance_integral(X, Y)) < 1e-8


@given(disk_points(), disk_points())
def test_symmetry(X, Y):
    assert abs(klein_distance_cr(X, Y) - klein_distance_cr(Y, X)) <= 1e-9 * (1 + klein_distance_cr(X, Y))


@given(disk_points(0.9), disk_points(0.9), disk_points(0.9))
def test_triangle_inequality(X, Y, Z):
    d = klein_distance_cr
    assert d(X, Z) <= d(X, Y) + d(Y, Z) + 1e-9


def test_distance_from_origin_increases_along_a_ray():
    ts = np.linspace(0.01, 0.98, 40)
    d = [klein_distance_integral((0, 0), (t * 0.6, t * 0.8)) for t in ts]
    assert all(b > a for a, b in zip(d, d[1:]))


# --- M_c ----------------------------------------------------------------------

def test_Mc_examples():
    p = KleinPoint(0.3, 0.4)
    assert map_Mc(1, p) == p
    q = map_Mc(0, p)
    assert q.x == 0.3 and abs(q.y - 0.4 / math.sqrt(2)) < 1e-15
    with pytest.raises(ImageOutsideDisk):
        map_Mc(3, (0.0, 0.9))
    with pytest.raises(ValueError):
        map_Mc(-2, p)


def test_M0_contracts_off_axis_segments():
    rng = random.Random(11)
    done = 0
    while done < 100:
        X, Y = _random_points(rng, 2, 0.9)
        if abs(X.y) < 1e-3 and abs(Y.y) < 1e-3:
            continue
        assert klein_distance_cr(map_Mc(0, X), map_Mc(0, Y)) < klein_distance_cr(X, Y)
        done += 1


def test_triangle_delta():
    t = TriangleDelta(0.0)
    assert t.vertices[1] == (1.0, 0.0)
    assert abs(t.vertices[2][1] - math.sqrt(0.5)) < 1e-15
    assert t.contains((0, 0.1)) and not t.contains((0.9, 0.5))
    assert TriangleDelta(1.0).vertices[2] == (0.0, 1.0)


# --- translation lengths and eigenvalue lemmas ------------------------------------

def test_translation_lengths():
    v = translation_length("DE'", 1)
    assert abs(v - 2 * math.log(3 + 2 * math.sqrt(2))) < 1e-12
    assert abs(v - 3.52549) < 1e-5
    assert translation_length("D", 1) == 0
    assert abs(translation_length("DE'DE'", 1) - 2 * v) < 1e-12


def test_contraction_derivative_examples():
    assert contraction_derivatives(0.4, 0.0)[0] == 0
    assert contraction_derivatives(0.0, 0.0)[1] == 0.25
    chk = contraction_derivative_check(0.3, 0.4)
    assert chk.agrees(rtol=1e-5)


def test_contraction_derivatives_nonnegative_on_grid():
    xs = np.linspace(-0.98, 0.98, 50)
    for x in xs:
        for y in xs:
            if x * x + y * y >= 0.999:
                continue
            h, v = contraction_derivatives(x, y)
            assert v > 0
            assert h >= 0
            assert (h == 0) == (y == 0)


@pytest.mark.parametrize("p", [(0.1, 0.2), (-0.5, 0.3), (0.0, 0.7), (0.6, -0.6)])
def test_closed_forms_match_finite_differences(p):
    assert contraction_derivative_check(*p).agrees(rtol=1e-5)


def test_eigenvalue_bound_scan():
    scans = eigenvalue_bound_scan(["DE'", "DE'DE'", "DE'D"], points=200)
    for s in scans:
        assert s.holds
        assert -1 <= s.argmax_c < 1
    assert abs(scans[0].lambda_1 - (3 + 2 * math.sqrt(2))) < 1e-12
