import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from parabola_surface.homology import (
    HomologyClass,
    L,
    TruncatedExtendedClass,
    TruncationTooShort,
    UnsupportedGenerator,
    act,
    act_word,
    cheb_divide_one_plus_t1,
    cheb_eval,
    chebyshev_poly,
    hol,
    intersect,
    kernel_z,
    psi,
    reconstruct,
    WordEvolver,
)
from parabola_surface.surface import Family, cylinder
from parabola_surface.veech import det_sign, eval_word, word

from strategies import HOMOLOGY_LETTERS, LETTERS, integral_classes, rational_classes, rationals, words

H, S = HomologyClass.horizontal, HomologyClass.slope_one
CS = [Fraction(1), Fraction(5, 4), Fraction(2)]


def matvec(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


# --- classes ----------------------------------------------------------------

def test_class_basics():
    x = HomologyClass({1: 2, 3: 0}, {2: Fraction(-1, 2)})
    assert dict(x.alpha) == {1: 2}
    assert x.a(3) == 0 and x.b(0) == 0 and x.a(-4) == 0
    assert x.max_index == 2 and x.min_index == 1
    assert x + (-x) == HomologyClass()
    assert 2 * x == x + x
    with pytest.raises(ValueError):
        HomologyClass({0: 1})


def test_dense_round_trip():
    x = HomologyClass({1: 1, 4: -3}, {2: 5})
    assert HomologyClass.from_dense(*x.dense(6)) == x


@given(rational_classes())
def test_json_round_trip(x):
    text = x.to_json()
    assert HomologyClass.from_json(text) == x
    assert HomologyClass.from_json(json.loads(text)) == x


def test_json_format():
    obj = HomologyClass({2: Fraction(3, 4)}, {1: -1}).to_json_obj()
    assert obj == {"alpha": {"2": "3/4"}, "beta": {"1": "-1"}}


# --- intersection form ------------------------------------------------------------

def test_first_horizontal_meets_first_slope_one_once():
    assert intersect(H(1), S(1)) == 1
    assert intersect(S(1), H(1)) == -1
    # matches the geometric count: area ratio against the area formula
    A, B = cylinder(1, Family.HORIZONTAL, 1), cylinder(1, Family.SLOPE_ONE, 1)
    assert A.area * B.area / abs(A.core_holonomy[0] * B.core_holonomy[1]) == A.area


@settings(max_examples=20)
@given(integral_classes())
def test_form_is_alternating(x):
    assert intersect(x, x) == 0


@given(integral_classes(), integral_classes())
def test_form_is_antisymmetric_and_integral(x, y):
    v = intersect(x, y)
    assert v == -intersect(y, x)
    assert Fraction(v).denominator == 1


@given(integral_classes())
def test_kernel_element_is_in_the_radical(y):
    z = kernel_z(y.max_index + 2)
    assert intersect(z, y) == 0
    assert intersect(y, z) == 0


def test_truncation_guard():
    with pytest.raises(TruncationTooShort):
        intersect(kernel_z(3), H(3))
    with pytest.raises(TypeError):
        intersect(kernel_z(3), kernel_z(3))


@given(words(max_len=8), integral_classes(), integral_classes())
def test_form_invariance_up_to_orientation(w, x, y):
    # orientation-reversing automorphisms negate every intersection number
    assert intersect(act_word(w, x), act_word(w, y)) == det_sign(w) * intersect(x, y)


@given(words(max_len=8, letters=["D", "D'", "E", "E'", "J"]), integral_classes(), integral_classes())
def test_form_invariance_orientation_preserving(w, x, y):
    assert intersect(act_word(w, x), act_word(w, y)) == intersect(x, y)


# --- generator actions --------------------------------------------------------

def test_D_on_first_slope_one():
    r = act("D", 1, S(1))
    assert r == HomologyClass({1: 1, 2: 1}, {1: 1})


def test_E_on_first_horizontal():
    assert act("E", 1, H(1)) == HomologyClass({1: 1}, {1: -1})


def test_inverse_formulas():
    x = HomologyClass({1: 2, 2: -1}, {1: 3, 3: 1})
    assert act("D", -1, x) == HomologyClass(
        {n: x.a(n) - x.b(n - 1) - x.b(n) for n in range(1, 6)}, x.beta)
    assert act("E", -1, x) == HomologyClass(
        x.alpha, {n: x.b(n) + x.a(n) + x.a(n + 1) for n in range(1, 6)})


def test_minus_identity_negates():
    x = HomologyClass({1: 2}, {4: -1})
    assert act("J", 1, x) == -x


def test_unrewritten_generator_rejected():
    with pytest.raises(UnsupportedGenerator):
        act("B", 1, H(1))


@given(integral_classes())
def test_A_is_an_involution(x):
    assert act("A", 1, act("A", 1, x)) == x


@given(integral_classes(), words())
def test_word_times_inverse_is_identity(x, w):
    assert act_word(w * w.inverse(), x) == x
    assert act_word(w.inverse(), act_word(w, x)) == x
    assert act_word("", x) == x
    assert act_word("DD'", x) == x


@given(integral_classes(), words(4), words(4))
def test_action_is_a_homomorphism(x, u, v):
    assert act_word(u * v, x) == act_word(u, act_word(v, x))


@given(integral_classes(), st.sampled_from(["A", "D", "E", "J"]), st.sampled_from([1, -1]))
def test_sparsity(x, g, e):
    if x.is_zero:
        return
    y = act(g, e, x)
    if y.is_zero:
        return
    assert y.min_index >= x.min_index - 1
    assert y.max_index <= x.max_index + 1


@given(words(max_len=10), integral_classes())
def test_support_grows_by_at_most_word_length(w, x):
    y = act_word(w, x)
    if not y.is_zero:
        assert y.max_index <= max(x.max_index, 1) + len(w.rewritten())


def test_evolver_matches_repeated_action():
    ev = WordEvolver("DE'", H(1))
    x = H(1)
    for _ in range(6):
        ev.step()
        x = act_word("DE'", x)
        assert ev.current() == x


# --- holonomy -----------------------------------------------------------------

def test_holonomy_examples():
    assert hol(1, H(3)) == (10, 0)
    assert hol(1, act("D", 1, S(1))) == (12, 4)
    assert hol(1, HomologyClass()) == (0, 0)
    with pytest.raises(TypeError):
        hol(1, kernel_z(4))


@given(words(max_len=8), integral_classes(), st.sampled_from(CS))
def test_holonomy_equivariance(w, x, c):
    assert hol(c, act_word(w, x)) == matvec(eval_word(w, c), hol(c, x))


def test_DE_inverse_on_first_horizontal():
    y = act_word("DE'", H(1))
    assert hol(1, y) == matvec(eval_word(word("DE'"), 1), (2, 0)) == (14, 4)


# --- L_c ----------------------------------------------------------------------

def test_L_at_one():
    a, b = Fraction(3), Fraction(-2, 5)
    x = L(1, a, b, 10)
    for n in range(1, 11):
        assert x.a(n) == (a - b) * (2 * n - 1)
        assert x.b(n) == 2 * b * n


def test_L_zero_and_kernel_sample():
    x = L(Fraction(1, 3), 0, 0, 6)
    assert all(v == 0 for v in x.alpha + x.beta)
    assert intersect(L(1, 1, 0, 4), H(2)) == 0
    assert intersect(L(1, 0, 1, 4), H(2)) == -6


def test_L_defined_at_minus_one():
    x = L(-1, 1, 2, 5)
    assert len(x.alpha) == 5
    # βₙ polynomial at c=−1 equals the limit of the quotient
    eps = Fraction(1, 10 ** 12)
    y = L(-1 + eps, 1, 2, 5)
    assert all(abs(u - v) < 1e-6 for u, v in zip(x.beta, y.beta))


def test_chebyshev_division_is_exact():
    q = [Fraction(v) for v in (1, 0, -1)]
    # (1 − T₂)/(1 + T₁) = 2(1 − T₁) · (1+T₁)/(1+T₁): check by evaluation
    d = cheb_divide_one_plus_t1(q)
    for c in (Fraction(1, 3), Fraction(-2, 7), Fraction(5)):
        assert cheb_eval(d, c) * (1 + c) == cheb_eval(q, c)
    assert chebyshev_poly(3)(Fraction(1, 2)) == -1


@given(st.sampled_from(CS + [Fraction(-1, 2), Fraction(1, 3)]), rationals, rationals, integral_classes(max_index=6))
def test_L_intersection_is_wedge_with_holonomy(c, a, b, y):
    hx, hy = hol(c, y)
    assert intersect(L(c, a, b, 8), y) == a * hy - b * hx


@settings(max_examples=40, deadline=None)
@given(words(max_len=8), rationals, rationals, st.sampled_from(CS + [Fraction(1, 3), Fraction(-1)]))
def test_commutative_diagram(w, a, b, c):
    N = 40
    pad = len(w.rewritten())
    lhs = act_word(w, L(c, a, b, N + pad)).head(N)
    a2, b2 = matvec(eval_word(w, c), (a, b))
    rhs = L(c, a2, b2, N)
    assert lhs.alpha == rhs.alpha and lhs.beta == rhs.beta


def test_truncated_action_consumes_top_coordinates():
    x = L(1, 1, 1, 3)
    y = act("E", 1, x)
    assert y.N == 2
    with pytest.raises(TruncationTooShort):
        act("E", 1, act("E", 1, act("E", 1, x)))
    with pytest.raises(TruncationTooShort):
        x.a(4)


# --- ψ ------------------------------------------------------------------------

def test_psi_examples():
    p1, p2 = psi(H(1)).as_polys()
    assert str(p1) == "-2*c + 2" and str(p2) == "0"
    z1, z2 = psi(HomologyClass()).as_polys()
    assert str(z1) == str(z2) == "0"
    assert psi(S(2)).second_derivative_at_zero() == (8, 8)


@given(integral_classes())
def test_psi_vanishes_to_second_order_at_zero(x):
    p = psi(x)
    assert p.at(Fraction(1)) == (0, 0)
    assert p.first_derivative_at_zero() == (0, 0)


@given(integral_classes())
def test_psi_second_derivative_recovers_holonomy_at_one(x):
    d2 = psi(x).second_derivative_at_zero()
    assert d2 == hol(1, x)


def test_psi_second_derivative_sign():
    assert psi(H(3)).second_derivative_at_zero() == (10, 0)


def _rank(rows):
    rows = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = max(len(r) for r in rows)
    for r in rows:
        r.extend([Fraction(0)] * (ncols - len(r)))
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [u - f * v for u, v in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_psi_is_injective_on_basis_span():
    n_max = 12
    width = n_max + 2
    vecs = []
    for n in range(1, n_max + 1):
        for x in (H(n), S(n)):
            p = psi(x)
            f = list(p.first) + [0] * (width - len(p.first))
            g = list(p.second) + [0] * (width - len(p.second))
            vecs.append([Fraction(v) for v in f + g])
    gram = [[sum(u * v for u, v in zip(r, s)) for s in vecs] for r in vecs]
    assert _rank(gram) == 2 * n_max


# --- reconstruction ------------------------------------------------------------------

def test_reconstruction_examples():
    assert reconstruct(H(1), 8) < 1e-8
    assert reconstruct(HomologyClass(), 8) == 0
    assert reconstruct(3 * H(2) - 2 * S(1), 8) < 1e-8


@settings(max_examples=10, deadline=None)
@given(integral_classes(max_index=5))
def test_reconstruction_random(x):
    assert reconstruct(x, 8) < 1e-8
