"""Paths in the tree G obtained from the Farey graph by deleting every vertex
congruent to 1/0 mod 2, and the recurrence data they carry.

θ is approximated at a stated precision together with an error radius, and
each bracketing decision checks that the radius cannot flip the outcome; if
it can, :class:`PrecisionExhausted` is raised instead of guessing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import mpmath

from .errors import ToolkitError


class ExcludedParity(ToolkitError):
    code = "farey.ExcludedParity"


class PrecisionExhausted(ToolkitError):
    code = "farey.PrecisionExhausted"


class RationalInput(ToolkitError):
    code = "farey.RationalInput"


class ThetaSyntaxError(ToolkitError):
    code = "farey.ThetaSyntaxError"


# ---------------------------------------------------------------------------
# Fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedFraction:
    """p/q in lowest terms with q ≥ 0; 1/0 stands for ∞."""

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a fraction")
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def of(cls, x: Union[int, Fraction, str]) -> "ReducedFraction":
        if isinstance(x, str) and x.strip() == "1/0":
            return cls(1, 0)
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"


def parity_class(f: ReducedFraction) -> str:
    """``"01"``, ``"11"`` or ``"10"``: the residues of (p, q) mod 2."""
    return f"{f.p % 2}{f.q % 2}"


def farey_adjacent(f: ReducedFraction, g: ReducedFraction) -> bool:
    return abs(f.p * g.q - g.p * f.q) == 1


# ---------------------------------------------------------------------------
# θ descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Theta:
    """A real number known to within ``radius`` at ``bits`` of working precision."""

    descriptor: str
    value: mpmath.mpf
    radius: mpmath.mpf
    bits: int

    def __float__(self) -> float:
        return float(self.value)


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def parse_theta(text: str, bits: int = 256) -> Theta:
    """Parse ``sqrt:d``, ``quad:a,b,d,e`` for (a + b√d)/e, or ``dec:<digits>@<bits>``."""
    text = text.strip()
    m = re.fullmatch(r"sqrt:(\d+)", text)
    q = re.fullmatch(r"quad:(-?\d+),(-?\d+),(\d+),(-?\d+)", text)
    if m or q:
        a, b, d, e = (0, 1, int(m.group(1)), 1) if m else (int(g) for g in q.groups())
        if e == 0:
            raise ThetaSyntaxError("denominator e must be nonzero")
        if b == 0 or _is_square(d):
            raise RationalInput(f"{text} is rational")
        with mpmath.workprec(bits):
            v = (a + b * mpmath.sqrt(d)) / e
            rad = mpmath.ldexp(max(1, abs(v)), 4 - bits)
        return Theta(text, v, rad, bits)
    m = re.fullmatch(r"dec:(-?\d+(?:\.(\d*))?)@(\d+)", text)
    if m:
        digits, frac, b = m.group(1), m.group(2) or "", int(m.group(3))
        with mpmath.workprec(b):
            v = mpmath.mpf(digits)
            # the decimal is only a truncation of θ: trust it to its last digit
            rad = max(mpmath.mpf(10) ** -len(frac), mpmath.ldexp(max(1, abs(v)), 4 - b))
        return Theta(text, v, rad, b)
    raise ThetaSyntaxError(f"cannot parse theta {text!r}; use sqrt:d, quad:a,b,d,e or dec:<digits>@<bits>")


def as_theta(theta: Union[Theta, str], bits: int = 256) -> Theta:
    return theta if isinstance(theta, Theta) else parse_theta(theta, bits)


def _guard_rational(th: Theta) -> None:
    """Reject θ that sits within its own error radius of a fraction with small denominator.

    Every real is within 1/q² of some p/q, so only denominators well below
    radius^{-1/2} are evidence of a rational input.
    """
    with mpmath.workprec(th.bits):
        guard_q = min(10 ** 6, max(2, int(mpmath.sqrt(1 / th.radius)) // 10))
        for f in _cf_convergents(th.value, guard_q):
            if abs(th.value - mpmath.mpf(f.p) / f.q) <= th.radius:
                raise RationalInput(f"{th.descriptor} is indistinguishable from {f} at this precision")


# ---------------------------------------------------------------------------
# G-sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GEntry:
    fraction: ReducedFraction
    k: Optional[int]
    witness: float


@dataclass(frozen=True)
class GSequence:
    theta: Theta
    entries: Tuple[GEntry, ...]

    @property
    def fractions(self) -> List[ReducedFraction]:
        return [e.fraction for e in self.entries]

    @property
    def ks(self) -> List[Optional[int]]:
        return [e.k for e in self.entries]

    def to_json_obj(self) -> dict:
        return {
            "theta": self.theta.descriptor,
            "theta_value": mpmath.nstr(self.theta.value, 30),
            "bits": self.theta.bits,
            "entries": [{"i": i, "fraction": str(e.fraction), "k": e.k, "witness": e.witness}
                        for i, e in enumerate(self.entries, 1)],
        }


def _witness(i: int, f: ReducedFraction, th: Theta) -> float:
    return float(i * f.q * abs(th.value - mpmath.mpf(f.p) / f.q))


def gsequence(theta: Union[Theta, str], depth: int, precision: int = 256) -> GSequence:
    th = as_theta(theta, precision)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    _guard_rational(th)
    with mpmath.workprec(th.bits):
        t = th.value
        frac_part = t - mpmath.floor(t)
        if abs(frac_part - mpmath.mpf(0.5)) <= th.radius:
            raise PrecisionExhausted("theta is too close to a half-integer to pick the nearest integer")
        n = int(mpmath.nint(t))
        fr = [ReducedFraction(n, 1)]
        ks: List[Optional[int]] = [None]
        if depth >= 2:
            d = t - n
            x = 1 / abs(d)
            # b is odd with |x − b| < 1, i.e. x lies strictly between the even neighbours b ± 1
            fl = int(mpmath.floor(x))
            b = fl if fl % 2 else fl + 1
            even_gap = min(abs(x - (b - 1)), abs(x - (b + 1)))
            if even_gap <= th.radius / (d * d) * 4:
                raise PrecisionExhausted("cannot separate 1/|theta - n| from an even integer")
            s = 1 if d > 0 else -1
            fr.append(ReducedFraction.of(Fraction(n) + Fraction(s, b)))
            ks.append(None)
        while len(fr) < depth:
            f0, f1 = fr[-2], fr[-1]
            den = t * f1.q - f1.p
            j = (f0.p - t * f0.q) / den
            # θ lies between y_{2k−1} and y_{2k+1}; y_j is monotone in j on that range
            err = th.radius / (den * den) * 4
            lower_odd = 2 * int(mpmath.floor((j - 1) / 2)) + 1
            gap = min(j - lower_odd, lower_odd + 2 - j)
            if gap <= err:
                raise PrecisionExhausted(f"theta too close to a subtree boundary after {f1} at {th.bits} bits")
            k = (lower_odd + 1) // 2
            if k == 0:
                raise PrecisionExhausted(f"bracketing after {f1} points back to the parent")
            P, Q = f0.p + 2 * k * f1.p, f0.q + 2 * k * f1.q
            fr.append(ReducedFraction(P, Q))
            ks.append(k)
        entries = tuple(GEntry(f, k, _witness(i, f, th)) for i, (f, k) in enumerate(zip(fr, ks), 1))
    return GSequence(th, entries)


def recurrence_witness(theta: Union[Theta, str], depth: int, precision: int = 256) -> List[Tuple[int, float, float]]:
    """(i, i·q_i·|θ − p_i/q_i|, running minimum) along the G-sequence."""
    seq = gsequence(theta, depth, precision)
    out, best = [], math.inf
    for i, e in enumerate(seq.entries, 1):
        best = min(best, e.witness)
        out.append((i, e.witness, best))
    return out


# ---------------------------------------------------------------------------
# Boundary data
# ---------------------------------------------------------------------------

def boundary_holonomy(f: ReducedFraction, n: int) -> Tuple[int, int]:
    if n < 1:
        raise ValueError("n must be >= 1")
    cls = parity_class(f)
    if cls == "10":
        raise ExcludedParity(f"{f} has parity class 10")
    m = 2 * n if cls == "01" else 2 * n + 1
    return (m * f.q, m * f.p)


def transverse_boundary_measure(theta: Union[Theta, str, float, Fraction], f: ReducedFraction, n: int,
                                precision: int = 256):
    """Measure transverse to direction (1, θ) of the boundary of the n-th subsurface for f."""
    hx, hy = boundary_holonomy(f, n)
    with mpmath.workprec(precision):
        if isinstance(theta, (Theta, str)):
            t = as_theta(theta, precision).value
        elif isinstance(theta, Fraction):
            t = mpmath.mpf(theta.numerator) / theta.denominator
        else:
            t = mpmath.mpf(theta)
        return abs(hy - t * hx) / mpmath.sqrt(1 + t * t)


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

def _cf_convergents(x, q_max: int) -> List[ReducedFraction]:
    """Convergents of the (dyadic, hence exact) number ``x`` with denominator ≤ q_max."""
    out = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    r = _mpf_to_fraction(x)
    while True:
        a = math.floor(r)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > q_max:
            break
        out.append(ReducedFraction(p1, q1))
        if r == a:
            break
        r = 1 / (r - a)
    return out


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    return (-1) ** sign * Fraction(int(man)) * Fraction(2) ** int(exp)


def cf_convergents(theta: Union[Theta, str], q_max: int, precision: int = 256) -> List[ReducedFraction]:
    th = as_theta(theta, precision)
    return _cf_convergents(th.value, q_max)


@dataclass(frozen=True)
class CFOverlap:
    convergents: Tuple[ReducedFraction, ...]
    found: Tuple[bool, ...]

    @property
    def admissible_all_found(self) -> bool:
        return all(ok for f, ok in zip(self.convergents, self.found) if parity_class(f) != "10")

    @property
    def fraction_found(self) -> float:
        return sum(self.found) / len(self.found) if self.found else 0.0


def cf_overlap(theta: Union[Theta, str], depth: int, precision: int = 256) -> CFOverlap:
    """Which CF convergents with denominator up to the last G-sequence entry appear in it."""
    seq = gsequence(theta, depth, precision)
    q_max = seq.entries[-1].fraction.q
    conv = _cf_convergents(seq.theta.value, q_max)
    entries = set(seq.fractions)
    return CFOverlap(tuple(conv), tuple(c in entries for c in conv))
