"""First homology of S_{≥1} minus the singular set, in cylinder-core coordinates.

A finite class is written ⟨α|β⟩ = Σ αₙ[Cⁿ_{1,0}] + Σ βₙ[Cⁿ_{1,1}] where Cⁿ_{1,0}
and Cⁿ_{1,1} are the horizontal and slope-one cylinders. Sequences are 1-based
and any index outside the stored range reads as 0 for finite classes.

Infinite classes (images of ``L_c``, the kernel element ``z``) are handled as
truncations that know how many leading coordinates are trustworthy. Actions
with a stencil that looks one index upward shrink that count by one.

Polynomials in ``c = cos θ`` are kept as Chebyshev coefficient tuples, lowest
degree first, so ``(q₀, q₁, …)`` means ``Σ q_j cos(jθ)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np

from .errors import ToolkitError
from .exact import frac_str as _frac_str
from .poly import Poly
from .quadrature import QuadConfig, integrate
from .surface import horizontal_circumference, slope_one_span
from .veech import GroupWord, word

Cheb = Tuple[Fraction, ...]


class TruncationTooShort(ToolkitError):
    code = "homology.TruncationTooShort"


class UnsupportedGenerator(ToolkitError):
    code = "homology.UnsupportedGenerator"


# ---------------------------------------------------------------------------
# Chebyshev series
# ---------------------------------------------------------------------------

def cheb_trim(q: Sequence) -> Cheb:
    q = [Fraction(x) for x in q]
    while q and q[-1] == 0:
        q.pop()
    return tuple(q)


def cheb_eval(q: Sequence, c):
    """Evaluate ``Σ q_j T_j(c)``; exact for rational ``c``."""
    if not q:
        return Fraction(0) if isinstance(c, (int, Fraction)) else 0.0 * c
    t_prev, t = 1, c
    acc = q[0] * t_prev
    for j in range(1, len(q)):
        acc = acc + q[j] * t
        t_prev, t = t, 2 * c * t - t_prev
    return acc


def cheb_eval_theta(q: Sequence, theta: np.ndarray) -> np.ndarray:
    j = np.arange(len(q))
    return np.asarray([float(x) for x in q]) @ np.cos(np.outer(j, theta)) if len(q) else 0.0 * theta


def cheb_divide_one_plus_t1(q: Sequence) -> Cheb:
    """Exact quotient of a Chebyshev series by ``1 + T₁``.

    Uses T₁·T_m = (T_{m+1} + T_{|m−1|})/2 and solves for the quotient from the
    top coefficient down; raises if the division leaves a remainder.
    """
    q = list(cheb_trim(q))
    if not q:
        return ()
    d = len(q) - 2  # quotient degree
    if d < 0:
        raise ValueError("constant series is not divisible by 1 + T1")
    r = [Fraction(0)] * (d + 3)
    for k in range(d + 1, 0, -1):
        if k >= 2:
            r[k - 1] = 2 * (q[k] - r[k] - r[k + 1] / 2)
        else:
            r[0] = q[1] - r[1] - r[2] / 2
    if q[0] != r[0] + r[1] / 2:
        raise ValueError("series is not divisible by 1 + T1")
    return cheb_trim(r[: d + 1])


@lru_cache(maxsize=None)
def chebyshev_poly(j: int) -> Poly:
    """T_j as a power-basis polynomial in ``c``."""
    if j == 0:
        return Poly.const(1)
    if j == 1:
        return Poly.c()
    return 2 * Poly.c() * chebyshev_poly(j - 1) - chebyshev_poly(j - 2)


def cheb_to_poly(q: Sequence) -> Poly:
    out = Poly()
    for j, x in enumerate(q):
        if x:
            out = out + chebyshev_poly(j) * Fraction(x)
    return out


@lru_cache(maxsize=None)
def l_alpha_series(n: int) -> Cheb:
    """Σ_{j=−(n−1)}^{n−1} T_j as a Chebyshev series (T_{−j} = T_j)."""
    return cheb_trim([1] + [2] * (n - 1))


@lru_cache(maxsize=None)
def l_beta_series(n: int) -> Cheb:
    """(Σ_{j=−(n−1)}^{n} T_j) / (1 + T₁), divided exactly."""
    return cheb_divide_one_plus_t1([1] + [2] * (n - 1) + [1])


# ---------------------------------------------------------------------------
# Classes
# ---------------------------------------------------------------------------

def _sparse(m: Mapping) -> Dict[int, Fraction]:
    out = {}
    for n, v in m.items():
        n = int(n)
        if n < 1:
            raise ValueError(f"homology indices start at 1, got {n}")
        v = Fraction(v)
        if v != 0:
            out[n] = v
    return out


class HomologyClass:
    """Finitely supported class ⟨α|β⟩ with exact rational coordinates."""

    __slots__ = ("_alpha", "_beta")

    def __init__(self, alpha: Mapping = (), beta: Mapping = ()):
        object.__setattr__(self, "_alpha", _sparse(dict(alpha)))
        object.__setattr__(self, "_beta", _sparse(dict(beta)))

    def __setattr__(self, name, value):
        raise AttributeError("HomologyClass is immutable")

    @classmethod
    def horizontal(cls, n: int) -> "HomologyClass":
        return cls({n: 1}, {})

    @classmethod
    def slope_one(cls, n: int) -> "HomologyClass":
        return cls({}, {n: 1})

    @classmethod
    def from_dense(cls, alpha: Sequence, beta: Sequence) -> "HomologyClass":
        return cls({i + 1: v for i, v in enumerate(alpha)}, {i + 1: v for i, v in enumerate(beta)})

    @property
    def alpha(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._alpha)

    @property
    def beta(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._beta)

    def a(self, n: int) -> Fraction:
        return self._alpha.get(n, Fraction(0))

    def b(self, n: int) -> Fraction:
        return self._beta.get(n, Fraction(0))

    @property
    def max_index(self) -> int:
        return max(list(self._alpha) + list(self._beta), default=0)

    @property
    def min_index(self) -> int:
        return min(list(self._alpha) + list(self._beta), default=0)

    def is_zero(self) -> bool:
        return not self._alpha and not self._beta

    def dense(self, length: int) -> Tuple[List[Fraction], List[Fraction]]:
        return ([self.a(n) for n in range(1, length + 1)], [self.b(n) for n in range(1, length + 1)])

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        al = dict(self._alpha)
        be = dict(self._beta)
        for n, v in other._alpha.items():
            al[n] = al.get(n, 0) + v
        for n, v in other._beta.items():
            be[n] = be.get(n, 0) + v
        return HomologyClass(al, be)

    def __neg__(self) -> "HomologyClass":
        return HomologyClass({n: -v for n, v in self._alpha.items()}, {n: -v for n, v in self._beta.items()})

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return self + (-other)

    def __mul__(self, k) -> "HomologyClass":
        k = Fraction(k)
        return HomologyClass({n: k * v for n, v in self._alpha.items()}, {n: k * v for n, v in self._beta.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, HomologyClass) and self._alpha == other._alpha and self._beta == other._beta

    def __hash__(self):
        return hash((frozenset(self._alpha.items()), frozenset(self._beta.items())))

    def __repr__(self) -> str:
        return f"HomologyClass(alpha={dict(sorted(self._alpha.items()))}, beta={dict(sorted(self._beta.items()))})"

    def to_json_obj(self) -> dict:
        return {
            "alpha": {str(n): _frac_str(v) for n, v in sorted(self._alpha.items())},
            "beta": {str(n): _frac_str(v) for n, v in sorted(self._beta.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Union[str, dict]) -> "HomologyClass":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({int(n): Fraction(v) for n, v in data.get("alpha", {}).items()},
                   {int(n): Fraction(v) for n, v in data.get("beta", {}).items()})


@dataclass(frozen=True)
class TruncatedExtendedClass:
    """First ``N`` coordinates of a class with possibly infinite support."""

    alpha: Tuple
    beta: Tuple
    tag: str = ""
    N: int = field(init=False)

    def __post_init__(self):
        if len(self.alpha) != len(self.beta):
            raise ValueError("alpha and beta must have the same length")
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "beta", tuple(self.beta))
        object.__setattr__(self, "N", len(self.alpha))

    def a(self, n: int):
        if n < 1:
            return 0
        if n > self.N:
            raise TruncationTooShort(f"coordinate alpha_{n} is beyond truncation N={self.N}")
        return self.alpha[n - 1]

    def b(self, n: int):
        if n < 1:
            return 0
        if n > self.N:
            raise TruncationTooShort(f"coordinate beta_{n} is beyond truncation N={self.N}")
        return self.beta[n - 1]

    def head(self, n: int) -> "TruncatedExtendedClass":
        if n > self.N:
            raise TruncationTooShort(f"requested {n} coordinates from a truncation of length {self.N}")
        return TruncatedExtendedClass(self.alpha[:n], self.beta[:n], self.tag)


Class = Union[HomologyClass, TruncatedExtendedClass]


# ---------------------------------------------------------------------------
# Intersection form
# ---------------------------------------------------------------------------

def intersect(x: Class, y: Class):
    """x ∩ y = Σₙ (αˣₙβʸₙ + αˣ_{n+1}βʸₙ − βˣₙαʸₙ − βˣₙαʸ_{n+1}).

    At most one argument may be truncated; its length must exceed the other's
    support by one.
    """
    if isinstance(y, TruncatedExtendedClass):
        if isinstance(x, TruncatedExtendedClass):
            raise TypeError("cannot intersect two truncated classes")
        return -intersect(y, x)
    if isinstance(x, TruncatedExtendedClass) and y.max_index > x.N - 1:
        raise TruncationTooShort(f"support of y reaches {y.max_index}; truncation N={x.N} needs N >= {y.max_index + 1}")
    total = 0
    for n, bn in y.beta.items():
        total += (x.a(n) + x.a(n + 1)) * bn
    for n, an in y.alpha.items():
        total -= x.b(n) * an
        if n > 1:
            total -= x.b(n - 1) * an
    return total


# ---------------------------------------------------------------------------
# Generator actions
# ---------------------------------------------------------------------------

# how many top coordinates each generator consumes on a truncated class
REACH = {"A": 0, "D": 0, "E": 1, "J": 0}


def _step(gen: str, e: int, al: List, be: List) -> Tuple[List, List]:
    L = len(al)

    def bget(n):
        return be[n - 1] if n >= 1 else 0

    if gen == "D":
        return [al[n - 1] + e * (bget(n - 1) + be[n - 1]) for n in range(1, L + 1)], list(be)
    if gen == "A":
        return [-al[n - 1] - bget(n - 1) - be[n - 1] for n in range(1, L + 1)], list(be)
    if gen == "E":
        return list(al[: L - 1]), [be[n - 1] - e * (al[n - 1] + al[n]) for n in range(1, L)]
    if gen == "J":
        return [-v for v in al], [-v for v in be]
    raise UnsupportedGenerator(f"no homology action for {gen}; rewrite B and C first")


def act(gen: str, exponent: int, x: Class) -> Class:
    """Apply Ĝ* for a single generator ``gen`` in {A, D, E, J}."""
    if isinstance(x, HomologyClass):
        L = x.max_index + 2
        al, be = _step(gen, exponent, *x.dense(L))
        return HomologyClass.from_dense(al, be)
    if x.N - REACH[gen] < 1:
        raise TruncationTooShort(f"{gen} needs {REACH[gen]} spare coordinate(s); truncation N={x.N}")
    al, be = _step(gen, exponent, list(x.alpha), list(x.beta))
    return TruncatedExtendedClass(al, be, x.tag)


def act_word(w: Union[GroupWord, str], x: Class) -> Class:
    """Apply the automorphism of ``w``; the rightmost letter acts first.

    With this order hol(act_word(w, x)) = eval_word(w, c)·hol(x).
    """
    if isinstance(w, str):
        w = word(w)
    if isinstance(x, HomologyClass):
        # one dense pass with enough padding for the whole word
        letters = w.rewritten().letters
        L = x.max_index + len(letters) + 1
        al, be = x.dense(L)
        for g, e in reversed(letters):
            al, be = _step(g, e, al, be)
            if len(al) < L:
                al, be = al + [Fraction(0)], be + [Fraction(0)]
        return HomologyClass.from_dense(al, be)
    for g, e in reversed(w.rewritten().letters):
        x = act(g, e, x)
    return x


class WordEvolver:
    """Incremental Ĝ*^m on a finite class, kept as dense integer/rational lists."""

    def __init__(self, w: Union[GroupWord, str], x: HomologyClass):
        self.word = word(w) if isinstance(w, str) else w
        self.letters = self.word.rewritten().letters
        self.m = 0
        self.length = x.max_index + 1
        self.alpha, self.beta = x.dense(self.length)

    def step(self) -> None:
        L = self.length + len(self.letters)
        al = self.alpha + [0] * (L - self.length)
        be = self.beta + [0] * (L - self.length)
        for g, e in reversed(self.letters):
            al, be = _step(g, e, al, be)
            if len(al) < L:
                al, be = al + [0], be + [0]
        # drop trailing zeros but keep one spare slot
        while L > 1 and al[-1] == 0 and be[-1] == 0 and al[-2] == 0 and be[-2] == 0:
            al.pop()
            be.pop()
            L -= 1
        self.alpha, self.beta, self.length = al, be, L
        self.m += 1

    def current(self) -> HomologyClass:
        return HomologyClass.from_dense(self.alpha, self.beta)


# ---------------------------------------------------------------------------
# Holonomy
# ---------------------------------------------------------------------------

def basis_holonomy(c, family: str, n: int) -> Tuple[Fraction, Fraction]:
    c = Fraction(c)
    if family == "horizontal":
        return (horizontal_circumference(c, n), Fraction(0))
    s = slope_one_span(c, n)
    return (s, s)


def hol(c, x: HomologyClass) -> Tuple[Fraction, Fraction]:
    if not isinstance(x, HomologyClass):
        raise TypeError("holonomy is only defined for finitely supported classes")
    c = Fraction(c)
    hx = hy = Fraction(0)
    for n, v in x.alpha.items():
        hx += v * horizontal_circumference(c, n)
    for n, v in x.beta.items():
        s = slope_one_span(c, n)
        hx += v * s
        hy += v * s
    return (hx, hy)


# ---------------------------------------------------------------------------
# L_c and the kernel element
# ---------------------------------------------------------------------------

def L(c, a, b, N: int) -> TruncatedExtendedClass:
    """First ``N`` coordinates of L_c(a, b), exact for rational c, a, b.

    αₙ = (a−b)·Σ_{j=−(n−1)}^{n−1} T_j(c) and βₙ = 2b·(Σ_{j=−(n−1)}^{n} T_j(c))/(1+c),
    with the division carried out in the Chebyshev basis so c = −1 is fine.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    exact = all(isinstance(v, (int, Fraction)) for v in (c, a, b))
    if exact:
        c, a, b = Fraction(c), Fraction(a), Fraction(b)
    al = [(a - b) * cheb_eval(l_alpha_series(n), c) for n in range(1, N + 1)]
    be = [2 * b * cheb_eval(l_beta_series(n), c) for n in range(1, N + 1)]
    return TruncatedExtendedClass(al, be, f"L_{c}({a},{b})")


def kernel_z(N: int) -> TruncatedExtendedClass:
    """First ``N`` coordinates of z = ⟨(1, −1, 1, …)|0⟩, the radical of ∩."""
    return TruncatedExtendedClass([Fraction((-1) ** n) for n in range(N)], [Fraction(0)] * N, "z")


# ---------------------------------------------------------------------------
# ψ and integral reconstruction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyPair:
    """Pair of Chebyshev series in ``c = cos θ``."""

    first: Cheb
    second: Cheb

    def at(self, c):
        return (cheb_eval(self.first, c), cheb_eval(self.second, c))

    def at_theta(self, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return cheb_eval_theta(self.first, theta), cheb_eval_theta(self.second, theta)

    def second_derivative_at_zero(self) -> Tuple[Fraction, Fraction]:
        """d²/dθ² at θ = 0, using d²/dθ² cos jθ |₀ = −j²."""
        return (-sum(j * j * v for j, v in enumerate(self.first)),
                -sum(j * j * v for j, v in enumerate(self.second)))

    def first_derivative_at_zero(self) -> Tuple[Fraction, Fraction]:
        # every cos jθ has zero slope at θ = 0
        return (Fraction(0), Fraction(0))

    def as_polys(self) -> Tuple[Poly, Poly]:
        return cheb_to_poly(self.first), cheb_to_poly(self.second)


def _cheb_add(acc: Dict[int, Fraction], j: int, v: Fraction) -> None:
    acc[j] = acc.get(j, Fraction(0)) + v


def psi(x: HomologyClass) -> PolyPair:
    """Linear map with ψ[Cⁿ_{1,0}] = (2T_{n−1} − 2T_n, 0), ψ[Cⁿ_{1,1}] = (T_{n−1} − T_{n+1})(1, 1)."""
    f: Dict[int, Fraction] = {}
    g: Dict[int, Fraction] = {}
    for n, v in x.alpha.items():
        _cheb_add(f, n - 1, 2 * v)
        _cheb_add(f, n, -2 * v)
    for n, v in x.beta.items():
        for acc in (f, g):
            _cheb_add(acc, n - 1, v)
            _cheb_add(acc, n + 1, -v)

    def dense(acc):
        top = max(acc, default=-1)
        return cheb_trim([acc.get(j, 0) for j in range(top + 1)])

    return PolyPair(dense(f), dense(g))


def reconstruct_coordinates(x: HomologyClass, N: int, cfg: QuadConfig = QuadConfig()) -> np.ndarray:
    """(1/4π)∫_{−π}^{π} L_{cos θ}(ψ(x)(cos θ)) dθ, coordinates 1..N as [α..., β...]."""
    p = psi(x)
    width = max(N, 1) + 1
    pa = np.zeros((N, width))
    pb = np.zeros((N, width))
    for n in range(1, N + 1):
        for j, v in enumerate(l_alpha_series(n)):
            pa[n - 1, j] = float(v)
        for j, v in enumerate(l_beta_series(n)):
            pb[n - 1, j] = float(v)

    def integrand(theta):
        a, b = p.at_theta(theta)
        cos = np.cos(np.outer(np.arange(width), theta))
        al = (a - b) * (pa @ cos)
        be = 2 * b * (pb @ cos)
        return np.vstack([al, be]) / (4 * math.pi)

    return integrate(integrand, -math.pi, math.pi, cfg)


def reconstruct(x: HomologyClass, N: int, cfg: QuadConfig = QuadConfig()) -> float:
    """Worst absolute coordinate error of the integral reconstruction over indices ≤ N."""
    vals = reconstruct_coordinates(x, N, cfg)
    al, be = x.dense(N)
    exact = np.array([float(v) for v in al + be])
    return float(np.max(np.abs(vals - exact))) if N else 0.0
