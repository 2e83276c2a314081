"""Klein-disk geometry used to bound eigenvalues of the matrices G_c for c < 1.

Distances are computed both from the chord cross-ratio and by integrating
the Klein metric tensor along the segment; the two must agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import mpmath
import numpy as np

from .errors import ToolkitError
from .exact import to_mpf
from .quadrature import QuadConfig, integrate
from .veech import Classification, GroupWord, dominant_modulus, eigen, det_sign, trace_poly, word


class PointOnBoundary(ToolkitError):
    code = "hyperbolic.PointOnBoundary"


class ImageOutsideDisk(ToolkitError):
    code = "hyperbolic.ImageOutsideDisk"


@dataclass(frozen=True)
class KleinPoint:
    x: float
    y: float

    def __post_init__(self):
        if self.x * self.x + self.y * self.y >= 1:
            raise PointOnBoundary(f"({self.x}, {self.y}) is not inside the open unit disk")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


def _pt(p) -> KleinPoint:
    return p if isinstance(p, KleinPoint) else KleinPoint(*p)


@dataclass(frozen=True)
class TriangleDelta:
    """Triangle with vertices (−1, 0), (1, 0) and (0, √((1+c)/2))."""

    c: float

    @property
    def vertices(self) -> Tuple[Tuple[float, float], ...]:
        return ((-1.0, 0.0), (1.0, 0.0), (0.0, math.sqrt((1 + self.c) / 2)))

    def contains(self, p) -> bool:
        x, y = (p.x, p.y) if isinstance(p, KleinPoint) else p
        h = self.vertices[2][1]
        return y >= 0 and abs(x) * h + y <= h


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------

def _chord(X: KleinPoint, Y: KleinPoint) -> Tuple[np.ndarray, np.ndarray, float, float, float]:
    """X, unit direction u towards Y, |XY|, and parameters t₁ < 0 < t₂ of the boundary hits."""
    p, q = X.as_array(), Y.as_array()
    length = math.hypot(*(q - p))
    u = (q - p) / length
    # |p + t u|² = 1
    b, c = p @ u, p @ p - 1
    disc = math.sqrt(b * b - c)
    return p, u, length, -b - disc, -b + disc


def chord_endpoints(X: KleinPoint, Y: KleinPoint) -> Tuple[np.ndarray, np.ndarray]:
    """Boundary points Q₁, Q₂ of the chord through X and Y, with Q₁ on X's side."""
    p, u, _, t1, t2 = _chord(_pt(X), _pt(Y))
    return p + t1 * u, p + t2 * u


def klein_distance_cr(X, Y) -> float:
    """½·log(|Q₁Y|·|XQ₂| / (|Q₁X|·|YQ₂|)) along the chord Q₁XYQ₂."""
    X, Y = _pt(X), _pt(Y)
    if X == Y or math.hypot(X.x - Y.x, X.y - Y.y) == 0:
        return 0.0
    _, _, length, t1, t2 = _chord(X, Y)
    # the ratio is (1 + L/|t₁|)/(1 − L/t₂); log1p keeps short distances accurate
    return 0.5 * (math.log1p(length / -t1) - math.log1p(-length / t2))


def klein_norm(p: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Length of tangent vector(s) ``v`` at ``p`` in the Klein metric.

    ds² = |dv|²/(1 − r²) + (p·dv)²/(1 − r²)². Arrays broadcast over the last axis.
    """
    r2 = p[0] ** 2 + p[1] ** 2
    s = 1 - r2
    vv = v[0] ** 2 + v[1] ** 2
    pv = p[0] * v[0] + p[1] * v[1]
    return np.sqrt(vv / s + pv ** 2 / s ** 2)


def klein_distance_integral(X, Y, cfg: QuadConfig = QuadConfig(tol=1e-12)) -> float:
    X, Y = _pt(X), _pt(Y)
    if X == Y:
        return 0.0
    p, q = X.as_array(), Y.as_array()
    v = q - p

    def speed(t):
        pts = p[:, None] + v[:, None] * t[None, :]
        return klein_norm(pts, v[:, None] * np.ones_like(t)[None, :])

    return float(integrate(speed, 0.0, 1.0, cfg))


def map_Mc(c: float, X) -> KleinPoint:
    """(x, y) ↦ (x, y·√((1+c)/2))."""
    X = _pt(X)
    if c < -1:
        raise ValueError("M_c needs c >= -1")
    m = math.sqrt((1 + c) / 2)
    x, y = X.x, X.y * m
    if x * x + y * y >= 1:
        raise ImageOutsideDisk(f"M_{c}({X.x}, {X.y}) = ({x}, {y}) leaves the disk")
    return KleinPoint(x, y)


def translation_length(w, c, precision: int = 256) -> float:
    """inf_x dist(x, G_c x) = 2 log λ_c for hyperbolic G_c, else 0."""
    w = word(w) if isinstance(w, str) else w
    ed = eigen(w, c, precision)
    if ed.classification is not Classification.HYPERBOLIC:
        return 0.0
    with mpmath.workprec(precision):
        return float(2 * mpmath.log(ed.lam))


# ---------------------------------------------------------------------------
# Eigenvalue lemmas
# ---------------------------------------------------------------------------

def contraction_derivatives(x: float, y: float) -> Tuple[float, float]:
    """Closed forms of d/dc[I₂/I₁] and d/dc[J₂/J₁] at c = 1.

    I and J are Klein lengths of the unit horizontal and vertical vectors at
    (x, y) before (index 1) and after (index 2) applying M_c.
    """
    _pt((x, y))
    s = 1 - x * x - y * y
    h = y * y * (1 + x * x - y * y) / (4 * (1 - y * y) * s)
    v = (1 - x * x + y * y) / (4 * s)
    return h, v


def _length_ratios(x: float, y: float, c: float) -> Tuple[float, float]:
    m = math.sqrt((1 + c) / 2)
    p = np.array([x, y])
    pc = np.array([x, m * y])
    i1 = klein_norm(p, np.array([1.0, 0.0]))
    i2 = klein_norm(pc, np.array([1.0, 0.0]))
    j1 = klein_norm(p, np.array([0.0, 1.0]))
    j2 = klein_norm(pc, np.array([0.0, m]))
    return float(i2 / i1), float(j2 / j1)


def contraction_derivatives_fd(x: float, y: float, h: float = 1e-5) -> Tuple[float, float]:
    """Central differences in c of the length ratios, straight from the metric tensor."""
    hp, vp = _length_ratios(x, y, 1 + h)
    hm, vm = _length_ratios(x, y, 1 - h)
    return (hp - hm) / (2 * h), (vp - vm) / (2 * h)


@dataclass(frozen=True)
class ContractionCheck:
    point: Tuple[float, float]
    closed_form: Tuple[float, float]
    finite_difference: Tuple[float, float]

    def agrees(self, rtol: float = 1e-5, atol: float = 1e-9) -> bool:
        return all(abs(a - b) <= atol + rtol * abs(a) for a, b in zip(self.closed_form, self.finite_difference))


def contraction_derivative_check(x: float, y: float, h: float = 1e-5) -> ContractionCheck:
    return ContractionCheck((x, y), contraction_derivatives(x, y), contraction_derivatives_fd(x, y, h))


@dataclass(frozen=True)
class BoundScan:
    word: str
    lambda_1: float
    max_modulus: float
    argmax_c: Fraction

    @property
    def holds(self) -> bool:
        return self.max_modulus < self.lambda_1


def eigenvalue_grid(points: int = 200) -> List[Fraction]:
    """``points`` equally spaced rationals in [−1, 1)."""
    return [Fraction(-1) + Fraction(2 * i, points) for i in range(points)]


def eigenvalue_bound_scan(words: Iterable, points: int = 200, precision: int = 128) -> List[BoundScan]:
    """Largest eigenvalue modulus of G_c on a grid in [−1, 1) against λ₁."""
    out = []
    grid = eigenvalue_grid(points)
    for w in words:
        w = word(w) if isinstance(w, str) else w
        tp, det = trace_poly(w), det_sign(w)
        with mpmath.workprec(precision):
            lam1 = dominant_modulus(to_mpf(tp(Fraction(1))), det)
            mods = [dominant_modulus(to_mpf(tp(c)), det) for c in grid]
        i = max(range(len(grid)), key=lambda k: mods[k])
        out.append(BoundScan(str(w), float(lam1), float(mods[i]), grid[i]))
    return out
