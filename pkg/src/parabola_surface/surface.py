"""Exact geometry of the surfaces S_c.

The top piece of S_c is the convex hull of the orbit P_k = T_c^k(0, 0) of the
affine map T_c(x, y) = (cx + (c-1)y + 1, (c+1)x + cy + 1); the bottom piece is
its rotation by π. For c ≥ 1 the surface decomposes into horizontal cylinders
and into slope-one cylinders, indexed by n ≥ 1 in order of increasing area.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Tuple

from .errors import ToolkitError

Vec = Tuple[Fraction, Fraction]


class ParallelCylinders(ToolkitError):
    code = "surface.ParallelCylinders"


class ZeroVector(ToolkitError):
    code = "surface.ZeroVector"


class InvalidParameter(ToolkitError):
    code = "surface.InvalidParameter"


def wedge(u, v):
    return u[0] * v[1] - u[1] * v[0]


# ---------------------------------------------------------------------------
# Vertices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Vertex:
    k: int
    point: Vec


def _T(c: Fraction, p: Vec) -> Vec:
    x, y = p
    return (c * x + (c - 1) * y + 1, (c + 1) * x + c * y + 1)


def _T_inv(c: Fraction, p: Vec) -> Vec:
    # the linear part of T_c has determinant 1
    x, y = p[0] - 1, p[1] - 1
    return (c * x + (1 - c) * y, -(c + 1) * x + c * y)


@lru_cache(maxsize=4096)
def _vertex(c: Fraction, k: int) -> Vec:
    if k == 0:
        return (Fraction(0), Fraction(0))
    if k > 0:
        return _T(c, _vertex(c, k - 1))
    return _T_inv(c, _vertex(c, k + 1))


def vertex(c, k: int) -> Vertex:
    return Vertex(k, _vertex(Fraction(c), k))


# ---------------------------------------------------------------------------
# Cylinders
# ---------------------------------------------------------------------------

class Family(str, Enum):
    HORIZONTAL = "Horizontal"
    SLOPE_ONE = "SlopeOne"


@dataclass(frozen=True)
class RootLength:
    """A length ``rational · √radicand`` with radicand 1 or 2."""

    rational: Fraction
    radicand: int = 1

    def __mul__(self, other: "RootLength") -> "RootLength":
        if self.radicand == other.radicand:
            return RootLength(self.rational * other.rational * self.radicand, 1)
        return RootLength(self.rational * other.rational, self.radicand * other.radicand)

    def __truediv__(self, other: "RootLength") -> "RootLength":
        if self.radicand == other.radicand:
            return RootLength(self.rational / other.rational, 1)
        raise ValueError("mixed radicands do not occur in cylinder data")

    def __float__(self) -> float:
        return float(self.rational) * math.sqrt(self.radicand)

    def __str__(self) -> str:
        if self.radicand == 1:
            return str(self.rational)
        return f"{self.rational}*sqrt({self.radicand})"


@dataclass(frozen=True)
class Cylinder:
    family: Family
    n: int
    c: Fraction
    circumference: RootLength
    height: RootLength
    core_holonomy: Vec

    @property
    def area(self) -> Fraction:
        a = self.circumference * self.height
        assert a.radicand == 1
        return a.rational

    @property
    def modulus(self) -> Fraction:
        m = self.height / self.circumference
        return m.rational


def _x(c: Fraction, k: int) -> Fraction:
    return _vertex(c, k)[0]


def _y(c: Fraction, k: int) -> Fraction:
    return _vertex(c, k)[1]


def horizontal_circumference(c: Fraction, n: int) -> Fraction:
    return 2 * _x(c, n - 1) + 2 * _x(c, n)


def slope_one_span(c: Fraction, n: int) -> Fraction:
    """Common coordinate ``s`` of the slope-one core holonomy ``(s, s)``."""
    return _x(c, n) - _x(c, 1 - n) + _x(c, n + 1) - _x(c, -n)


def cylinder(c, family, n: int) -> Cylinder:
    c = Fraction(c)
    family = Family(family)
    if c < 1:
        raise InvalidParameter(f"cylinder decompositions require c >= 1, got {c}")
    if n < 1:
        raise InvalidParameter(f"cylinder index must be >= 1, got {n}")
    if family is Family.HORIZONTAL:
        circ = horizontal_circumference(c, n)
        height = _y(c, n) - _y(c, n - 1)
        cyl = Cylinder(family, n, c, RootLength(circ), RootLength(height), (circ, Fraction(0)))
        expected = Fraction(1, 2)
    else:
        s = slope_one_span(c, n)
        # transverse height: (P_{n+1} - P_n)·(-1, 1)/√2
        dx = _x(c, n + 1) - _x(c, n)
        dy = _y(c, n + 1) - _y(c, n)
        cyl = Cylinder(family, n, c, RootLength(s, 2), RootLength((dy - dx) / 2, 2), (s, s))
        expected = 1 / (2 * c + 2)
    if cyl.modulus != expected:
        raise AssertionError(f"modulus {cyl.modulus} != {expected} for {family.value} n={n}, c={c}")
    return cyl


def cylinder_table(c, n_max: int) -> list:
    return [cylinder(c, fam, n) for fam in Family for n in range(1, n_max + 1)]


CSV_COLUMNS = ["family", "n", "c", "circumference", "height", "modulus", "area", "holx", "holy"]


def cylinders_to_csv(cylinders: Iterable[Cylinder]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for cy in cylinders:
        w.writerow([cy.family.value, cy.n, cy.c, cy.circumference, cy.height, cy.modulus,
                    cy.area, cy.core_holonomy[0], cy.core_holonomy[1]])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Intersections
# ---------------------------------------------------------------------------

def intersection_area(area_a, hol_a, area_b, hol_b, intersection_number: int):
    """Area(A ∩ B) = |A∩B|·Area(A)·Area(B) / |hol(A) ∧ hol(B)|.

    Inputs are plain areas and core holonomies so that images of cylinders
    under affine automorphisms can be passed without constructing them.
    """
    w = wedge(hol_a, hol_b)
    if w == 0:
        raise ParallelCylinders(f"holonomies {hol_a} and {hol_b} are parallel")
    return abs(intersection_number) * Fraction(area_a) * Fraction(area_b) / abs(w)


def cylinder_intersection_area(a: Cylinder, b: Cylinder, intersection_number: int) -> Fraction:
    return intersection_area(a.area, a.core_holonomy, b.area, b.core_holonomy, intersection_number)


# ---------------------------------------------------------------------------
# Directions at c = 1
# ---------------------------------------------------------------------------

class Verdict(str, Enum):
    PERIODIC = "Periodic"
    STRIP = "Strip"
    RECURRENT = "Recurrent"


@dataclass(frozen=True)
class DirectionClass:
    """Slope ``p/q`` (direction of the vector ``(q, p)``); ``p`` is None if irrational."""

    p: Optional[int]
    q: Optional[int]
    verdict: Verdict

    @classmethod
    def irrational(cls) -> "DirectionClass":
        return cls(None, None, Verdict.RECURRENT)


def reduce_fraction(p: int, q: int) -> Tuple[int, int]:
    if p == 0 and q == 0:
        raise ZeroVector("direction (0, 0) is undefined")
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


def classify_direction(p: int, q: int) -> DirectionClass:
    p, q = reduce_fraction(p, q)
    if (p % 2, q % 2) == (1, 0):
        return DirectionClass(p, q, Verdict.STRIP)
    return DirectionClass(p, q, Verdict.PERIODIC)
