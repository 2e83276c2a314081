"""Asymptotic growth of homology and of cylinder intersections under a hyperbolic
affine automorphism, plus the Catalan / growth-lemma oracles for the m^{-3/2} law.

All homology and area data are computed exactly; powers of λ and m^{3/2}
scalings are applied at report time in mpmath at the configured precision.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from .errors import ToolkitError
from .exact import frac_str as _frac_str, to_mpf
from .homology import L, HomologyClass, WordEvolver, hol, intersect
from .quadrature import QuadConfig, integrate
from .surface import Cylinder, Family, cylinder, intersection_area, wedge
from .veech import Classification, GroupWord, NotHyperbolic, eigen, eval_word, kappa, word

# upper bound for ζ(3/2) ≈ 2.61238 used in the non-recurrence comparison
ZETA_3_2_BOUND = 2.62


class DegenerateWedge(ToolkitError):
    code = "asymptotics.DegenerateWedge"


class HypothesisViolation(ToolkitError):
    code = "asymptotics.HypothesisViolation"


@dataclass
class AsymptoticRun:
    """Exact values along ``m_list`` with their scaled versions and the predicted limit.

    ``labels`` names the tracked quantities (``["area"]`` for intersection runs,
    coordinate names such as ``"alpha1"`` for homology runs). ``exact_values``
    and ``scaled_values`` are indexed ``[m position][label position]``.
    """

    word: str
    subject: str
    labels: List[str]
    m_list: List[int]
    exact_values: List[Tuple[Fraction, ...]]
    scaled_values: List[Tuple[float, ...]]
    target: Tuple[float, ...]
    extrapolated_limit: Optional[Tuple[float, ...]] = None
    extras: dict = field(default_factory=dict)

    def relative_errors(self) -> List[Tuple[float, ...]]:
        return [tuple(abs(s / t - 1) if t else abs(s) for s, t in zip(row, self.target))
                for row in self.scaled_values]

    def approaches_target(self, label: int = 0) -> bool:
        """Distance to the target strictly decreases along ``m_list``."""
        d = [abs(row[label] - self.target[label]) for row in self.scaled_values]
        return all(b < a for a, b in zip(d, d[1:]))

    def to_json_obj(self) -> dict:
        return {
            "word": self.word,
            "subject": self.subject,
            "labels": self.labels,
            "m": self.m_list,
            "exact": [[_frac_str(v) for v in row] for row in self.exact_values],
            "scaled": [[float(v) for v in row] for row in self.scaled_values],
            "target": [float(v) for v in self.target],
            "extrapolated_limit": None if self.extrapolated_limit is None else [float(v) for v in self.extrapolated_limit],
            **({"extras": self.extras} if self.extras else {}),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.labels == ["area"]:
            w.writerow(["m", "area", "scaled", "target"])
            for m, ex, sc in zip(self.m_list, self.exact_values, self.scaled_values):
                w.writerow([m, _frac_str(ex[0]), repr(float(sc[0])), repr(float(self.target[0]))])
        else:
            w.writerow(["m", "coordinate", "value", "scaled", "target"])
            for m, ex, sc in zip(self.m_list, self.exact_values, self.scaled_values):
                for i, lab in enumerate(self.labels):
                    w.writerow([m, lab, _frac_str(ex[i]), repr(float(sc[i])), repr(float(self.target[i]))])
        return buf.getvalue()


def richardson(m1: int, s1: float, m2: int, s2: float) -> float:
    """Limit of the model a₀ + a₁/m through two points."""
    return (m2 * s2 - m1 * s1) / (m2 - m1)


def _check_m_list(m_list: Sequence[int]) -> List[int]:
    m_list = [int(m) for m in m_list]
    if not m_list or any(m < 1 for m in m_list) or any(b <= a for a, b in zip(m_list, m_list[1:])):
        raise ValueError(f"m_list must be strictly increasing positive integers, got {m_list}")
    return m_list


def _hyperbolic(w: GroupWord, precision: int):
    ed = eigen(w, 1, precision)
    if ed.classification is not Classification.HYPERBOLIC or ed.det != 1:
        raise NotHyperbolic(f"{w} is {ed.classification.value} (det {ed.det}) at c=1")
    return ed


def _as_word(w) -> GroupWord:
    return word(w) if isinstance(w, str) else w


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------

def oblique_projection(h, v_plus, v_minus):
    """Component ``p·v⁺`` of ``h = p·v⁺ + q·v⁻``."""
    det = v_plus[0] * v_minus[1] - v_plus[1] * v_minus[0]
    p = (h[0] * v_minus[1] - h[1] * v_minus[0]) / det
    return (p * v_plus[0], p * v_plus[1])


def _parse_label(label: str) -> Tuple[str, int]:
    for head in ("alpha", "beta"):
        if label.startswith(head):
            return head, int(label[len(head):])
    raise ValueError(f"bad coordinate label {label!r}; use alphaN or betaN")


def homology_asymptotics(w, x: HomologyClass, m_list: Sequence[int], N: int,
                         coords: Sequence[str] = ("alpha1", "beta1"),
                         precision: int = 256) -> AsymptoticRun:
    """Track m^{3/2}(±λ)^{−m}·Ĝ*^m(x) on chosen coordinates against κ·L₁(proj hol₁(x))."""
    w = _as_word(w)
    m_list = _check_m_list(m_list)
    parsed = [_parse_label(c) for c in coords]
    if any(n > N for _, n in parsed):
        raise ValueError(f"coordinates beyond N={N} requested")
    ed = _hyperbolic(w, precision)
    with mpmath.workprec(precision):
        k = kappa(w, precision)
        h = tuple(to_mpf(v) for v in hol(1, x))
        proj = oblique_projection(h, ed.v_plus, ed.v_minus)
        lt = L(1, proj[0], proj[1], N)
        target = tuple(float(k * (lt.a(n) if kind == "alpha" else lt.b(n))) for kind, n in parsed)
        evo = WordEvolver(w, x)
        exact, scaled = [], []
        mu = ed.sign * ed.lam  # dominant eigenvalue with its sign
        for m in m_list:
            while evo.m < m:
                evo.step()
            vals = tuple(Fraction(_dense_get(evo.alpha if kind == "alpha" else evo.beta, n)) for kind, n in parsed)
            factor = mpmath.mpf(m) ** mpmath.mpf(1.5) / mu ** m
            exact.append(vals)
            scaled.append(tuple(float(factor * to_mpf(v)) for v in vals))
    extrap = None
    if len(m_list) >= 2:
        extrap = tuple(richardson(m_list[-2], scaled[-2][i], m_list[-1], scaled[-1][i]) for i in range(len(parsed)))
    return AsymptoticRun(str(w), repr(x), list(coords), m_list, exact, scaled, target, extrap,
                         {"kappa": float(k), "lambda": float(ed.lam), "sign": ed.sign})


def _dense_get(seq, n: int):
    return seq[n - 1] if 1 <= n <= len(seq) else 0


# ---------------------------------------------------------------------------
# Cylinder intersections
# ---------------------------------------------------------------------------

def core_class(cyl: Cylinder) -> HomologyClass:
    if cyl.family is Family.HORIZONTAL:
        return HomologyClass.horizontal(cyl.n)
    return HomologyClass.slope_one(cyl.n)


def parse_cylinder(spec: Union[str, Cylinder]) -> Cylinder:
    """``"horiz:n"`` or ``"slope:n"`` at c = 1."""
    if isinstance(spec, Cylinder):
        return spec
    try:
        fam, n = spec.split(":")
        fam = {"horiz": Family.HORIZONTAL, "horizontal": Family.HORIZONTAL,
               "slope": Family.SLOPE_ONE, "slopeone": Family.SLOPE_ONE}[fam.strip().lower()]
        return cylinder(1, fam, int(n))
    except (ValueError, KeyError) as exc:
        raise ValueError(f"bad cylinder descriptor {spec!r}; use horiz:N or slope:N") from exc


def _matvec(M, v):
    return (M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1])


def intersection_areas(w, A: Cylinder, B: Cylinder, m_max: int) -> List[Fraction]:
    """Exact Area(Ĝ^m A ∩ B) for m = 1..m_max."""
    w = _as_word(w)
    G = eval_word(w, 1)
    evo = WordEvolver(w, core_class(A))
    cb = core_class(B)
    h = A.core_holonomy
    out = []
    for m in range(1, m_max + 1):
        evo.step()
        h = _matvec(G, h)
        if wedge(h, B.core_holonomy) == 0:
            raise DegenerateWedge(f"G^{m} hol(A) is parallel to hol(B)")
        out.append(intersection_area(A.area, h, B.area, B.core_holonomy, intersect(evo.current(), cb)))
    return out


def intersection_asymptotics(w, A, B, m_list: Sequence[int], precision: int = 256) -> AsymptoticRun:
    w = _as_word(w)
    A, B = parse_cylinder(A), parse_cylinder(B)
    m_list = _check_m_list(m_list)
    _hyperbolic(w, precision)
    areas = intersection_areas(w, A, B, m_list[-1])
    with mpmath.workprec(precision):
        k = kappa(w, precision)
        target = float(k * to_mpf(A.area) * to_mpf(B.area))
        exact = [(areas[m - 1],) for m in m_list]
        scaled = [(float(mpmath.mpf(m) ** mpmath.mpf(1.5) * to_mpf(a)),)
                  for m, (a,) in zip(m_list, exact)]
    extrap = None
    if len(m_list) >= 2:
        extrap = (richardson(m_list[-2], scaled[-2][0], m_list[-1], scaled[-1][0]),)
    subject = f"{A.family.value}{A.n} x {B.family.value}{B.n}"
    return AsymptoticRun(str(w), subject, ["area"], m_list, exact, scaled, (target,), extrap,
                         {"kappa": float(k), "area_A": _frac_str(A.area), "area_B": _frac_str(B.area)})


@dataclass(frozen=True)
class NonRecurrenceReport:
    M: int
    partial_sum: Fraction
    bound: float
    monotone: bool
    increments_within_from: Optional[int]  # first m after which every increment ≤ 1.1·κ·Area²·m^{−3/2}

    @property
    def bounded(self) -> bool:
        return float(self.partial_sum) <= self.bound


def nonrecurrence_sum(w, A, M: int, precision: int = 256) -> NonRecurrenceReport:
    """Σ_{m≤M} Area(Ĝ^m A ∩ A) against κ·Area(A)²·ζ(3/2)·1.1."""
    w = _as_word(w)
    A = parse_cylinder(A)
    if M < 0:
        raise ValueError("M must be >= 0")
    with mpmath.workprec(precision):
        k = float(kappa(w, precision))
    scale = k * float(A.area) ** 2
    bound = scale * ZETA_3_2_BOUND * 1.1
    if M == 0:
        return NonRecurrenceReport(0, Fraction(0), bound, True, None)
    areas = intersection_areas(w, A, A, M)
    within_from = None
    for m in range(M, 0, -1):
        if float(areas[m - 1]) > 1.1 * scale * m ** -1.5:
            break
        within_from = m
    return NonRecurrenceReport(M, sum(areas, Fraction(0)), bound, all(a >= 0 for a in areas), within_from)


def zeta_partial(M: int, s: float = 1.5) -> float:
    if M <= 0:
        return 0.0
    return math.fsum(np.arange(1, M + 1, dtype=float) ** -s)


# ---------------------------------------------------------------------------
# Catalan numbers
# ---------------------------------------------------------------------------

def catalan(n: int) -> int:
    """c₀ = 1, c_{k+1} = (4 − 6/(k+2))·c_k, carried out exactly."""
    if n < 0:
        raise ValueError("n must be >= 0")
    c = Fraction(1)
    for k in range(n):
        c *= 4 - Fraction(6, k + 2)
    assert c.denominator == 1
    return int(c)


def catalan_closed(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def catalan_integral(n: int, cfg: QuadConfig = QuadConfig(tol=0.0, rtol=1e-13)) -> float:
    """(4^{n−1}/π)∫_{−π}^{π}(2 − 2cos θ)((1 + cos θ)/2)ⁿ dθ."""
    val = integrate(lambda t: (2 - 2 * np.cos(t)) * ((1 + np.cos(t)) / 2) ** n, -math.pi, math.pi, cfg)
    return float(val) * 4.0 ** (n - 1) / math.pi


def catalan_ratio(n: int) -> float:
    """cₙ·√π·n^{3/2}/4ⁿ via log-gamma; tends to 1."""
    log_c = math.lgamma(2 * n + 1) - 2 * math.lgamma(n + 1) - math.log(n + 1)
    return math.exp(log_c + 0.5 * math.log(math.pi) + 1.5 * math.log(n) - n * math.log(4))


# ---------------------------------------------------------------------------
# Growth lemma
# ---------------------------------------------------------------------------

Func = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GrowthLemmaInstance:
    a: float
    eps: float
    f: Func
    g: Func
    n_list: Tuple[int, ...]
    r: Tuple[float, ...]
    s: Tuple[float, ...]

    @property
    def ratios(self) -> Tuple[float, ...]:
        return tuple(r / s for r, s in zip(self.r, self.s))


def s_n(a: float, n: int) -> float:
    return math.sqrt(math.pi) / (2 * a ** 1.5 * n ** 1.5)


def example_pair(a: float) -> Tuple[Func, Func]:
    """f = (2 − 2cos(2√a θ))/(4a), g = (1 + cos(2√a θ))/2."""
    r = 2 * math.sqrt(a)
    return (lambda t: (2 - 2 * np.cos(r * np.asarray(t))) / (4 * a),
            lambda t: (1 + np.cos(r * np.asarray(t))) / 2)


def _second_difference(fn: Func, h: float) -> float:
    v = np.asarray(fn(np.array([-h, 0.0, h])), dtype=float)
    return float((v[0] - 2 * v[1] + v[2]) / h ** 2)


def check_growth_hypotheses(a: float, eps: float, f: Func, g: Func, h: float = 1e-4, tol: float = 1e-4,
                            grid: int = 400) -> None:
    f0 = float(np.asarray(f(np.array([0.0])))[0])
    g0 = float(np.asarray(g(np.array([0.0])))[0])
    f2 = _second_difference(f, h)
    g2 = _second_difference(g, h)
    problems = []
    if abs(f0) > tol:
        problems.append(f"f(0) = {f0:g}, expected 0")
    if abs(f2 - 2) > tol * 2:
        problems.append(f"f''(0) = {f2:g}, expected 2")
    if abs(g0 - 1) > tol:
        problems.append(f"g(0) = {g0:g}, expected 1")
    if abs(g2 + 2 * a) > tol * 2 * a:
        problems.append(f"g''(0) = {g2:g}, expected {-2 * a:g}")
    t = np.linspace(-eps, eps, 2 * grid + 1)
    t = t[t != 0]
    if np.any(np.abs(np.asarray(g(t))) >= 1):
        problems.append("|g| >= 1 somewhere away from 0")
    if problems:
        raise HypothesisViolation("; ".join(problems))


def growth_lemma_check(a: float, eps: float, f: Func, g: Func, n_list: Sequence[int],
                       cfg: QuadConfig = QuadConfig(tol=0.0, rtol=1e-10)) -> GrowthLemmaInstance:
    """r_n = ∫_{−ε}^{ε} f·gⁿ compared with s_n = √π/(2a^{3/2}n^{3/2})."""
    if a <= 0 or eps <= 0:
        raise HypothesisViolation("a and eps must be positive")
    check_growth_hypotheses(a, eps, f, g)
    rs, ss = [], []
    for n in n_list:
        # the mass sits within a few multiples of 1/√(an) of 0; start with panels that resolve it
        panels = max(1, int(2 ** math.ceil(math.log2(max(1.0, eps * math.sqrt(a * n) / 4)))))
        c = QuadConfig(cfg.nodes, cfg.tol, cfg.rtol, panels, max(cfg.max_panels, 4 * panels))
        rs.append(float(integrate(lambda t: np.asarray(f(t)) * np.asarray(g(t)) ** n, -eps, eps, c)))
        ss.append(s_n(a, n))
    return GrowthLemmaInstance(a, eps, f, g, tuple(n_list), tuple(rs), tuple(ss))
