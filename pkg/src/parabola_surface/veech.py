"""Word algebra for the abstract group G± = <A, B, C, -I | A² = B² = C² = I>.

Words are written over the alphabet ``A B C D E J`` where ``J`` stands for
``-I`` and a trailing ``'`` marks an inverse, e.g. ``"DE'"``. The derived
generators are ``D = B·A`` and ``E = (-I)·C·B``.

Evaluating a word at a parameter ``c`` gives the matrix representation
G±_c; entries of every generator are polynomials of degree at most one in
``c``, so symbolic products are kept as 2×2 matrices of :class:`Poly`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import mpmath

from .errors import ToolkitError
from .exact import to_mpf as _mp
from .poly import Poly

LETTERS = "ABCDEJ"
INVOLUTIONS = frozenset("ABCJ")


class WordSyntaxError(ToolkitError):
    code = "veech.WordSyntaxError"


class NotHyperbolic(ToolkitError):
    code = "veech.NotHyperbolic"


class NonPositiveDerivative(ToolkitError):
    code = "veech.NonPositiveDerivative"


class OrientationReversing(ToolkitError):
    code = "veech.OrientationReversing"


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

Letter = Tuple[str, int]


@dataclass(frozen=True)
class GroupWord:
    """A normalized word; ``letters`` is a tuple of ``(generator, ±1)``."""

    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _normalize(self.letters))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        text = "".join(text.split())
        if text in ("", "1", "I"):
            return cls(())
        if not re.fullmatch(r"([ABCDEJ]'?)+", text):
            raise WordSyntaxError(f"cannot parse word {text!r}; use letters {LETTERS} with ' for inverse")
        letters = [(m.group(1), -1 if m.group(2) else 1) for m in re.finditer(r"([ABCDEJ])('?)", text)]
        return cls(tuple(letters))

    def __str__(self) -> str:
        return "".join(g + ("'" if e < 0 else "") for g, e in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def power(self, k: int) -> "GroupWord":
        if k < 0:
            return self.inverse().power(-k)
        return GroupWord(self.letters * k)

    def rewritten(self) -> "GroupWord":
        """Equivalent word over ``{A, D, E, J}`` only.

        Uses ``B = D·A`` and ``C = J·E·D·A``; both are involutions, so the
        same rewrite serves their inverses.
        """
        out = []
        for g, e in self.letters:
            if g == "B":
                out += [("D", 1), ("A", 1)]
            elif g == "C":
                out += [("J", 1), ("E", 1), ("D", 1), ("A", 1)]
            else:
                out.append((g, e))
        return GroupWord(tuple(out))


def _normalize(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    stack = []
    for g, e in letters:
        if g not in LETTERS or e not in (1, -1):
            raise WordSyntaxError(f"bad letter {(g, e)!r}")
        if g in INVOLUTIONS:
            e = 1
        if stack and stack[-1][0] == g and stack[-1][1] == -e:
            stack.pop()
        elif stack and g in INVOLUTIONS and stack[-1] == (g, 1):
            stack.pop()
        else:
            stack.append((g, e))
    return tuple(stack)


def word(text: str) -> GroupWord:
    return GroupWord.parse(text)


# ---------------------------------------------------------------------------
# Symbolic matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyMatrix:
    """2×2 matrix with :class:`Poly` entries, row major."""

    a: Poly
    b: Poly
    c: Poly
    d: Poly

    def __matmul__(self, o: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    @property
    def det_poly(self) -> Poly:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> Poly:
        return self.a + self.d

    def inverse(self) -> "PolyMatrix":
        det = self.det_poly
        if not det.is_constant() or det.constant_value() not in (1, -1):
            raise ValueError("only unimodular matrices are inverted")
        s = det.constant_value()
        return PolyMatrix(self.d * s, -self.b * s, -self.c * s, self.a * s)

    def __call__(self, c):
        return ((self.a(c), self.b(c)), (self.c(c), self.d(c)))


def _pm(entries) -> PolyMatrix:
    return PolyMatrix(*(Poly(e) for e in entries))


# entries as coefficient lists [const, coeff of c]
GENERATORS = {
    "A": _pm([[-1], [0], [0], [1]]),
    "B": _pm([[-1], [2], [0], [1]]),
    "C": _pm([[0, -1], [-1, 1], [-1, -1], [0, 1]]),
    "D": _pm([[1], [2], [0], [1]]),
    "E": _pm([[0, -1], [1, 1], [-1, -1], [2, 1]]),
    "J": _pm([[-1], [0], [0], [-1]]),
}

IDENTITY = _pm([[1], [0], [0], [1]])


@lru_cache(maxsize=None)
def word_matrix(w: GroupWord) -> PolyMatrix:
    """Symbolic product of the generator matrices along ``w``."""
    m = IDENTITY
    for g, e in w.letters:
        gm = GENERATORS[g]
        m = m @ (gm if e > 0 else gm.inverse())
    return m


def eval_word(w: GroupWord, c) -> Tuple[Tuple, Tuple]:
    """Exact matrix of ``w`` at rational ``c`` (any numeric ``c`` is accepted)."""
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
    return word_matrix(w)(c)


def trace_poly(w: GroupWord) -> Poly:
    return word_matrix(w).trace


def det_sign(w: GroupWord) -> int:
    return int(word_matrix(w).det_poly.constant_value())


# ---------------------------------------------------------------------------
# Eigen data
# ---------------------------------------------------------------------------

class Classification(str, Enum):
    HYPERBOLIC = "Hyperbolic"
    PARABOLIC = "Parabolic"
    ELLIPTIC = "Elliptic"
    IDENTITY = "Identity"
    REFLECTION = "Reflection"


@dataclass(frozen=True)
class EigenData:
    classification: Classification
    trace: object
    det: int
    lam: object  # modulus of the dominant eigenvalue (1 unless hyperbolic)
    sign: int  # the contracting eigenvalue is sign/lam
    v_plus: Optional[Tuple[object, object]] = None
    v_minus: Optional[Tuple[object, object]] = None

    @property
    def modulus(self):
        return self.lam


def _unit_eigvec(m, mu):
    (a, b), (c, d) = m
    # pick the better-conditioned row of (M - mu I) v = 0
    if abs(b) + abs(a - mu) >= abs(c) + abs(d - mu):
        v = (b, mu - a)
    else:
        v = (mu - d, c)
    n = mpmath.sqrt(v[0] ** 2 + v[1] ** 2)
    v = (v[0] / n, v[1] / n)
    # fixed orientation: first nonzero coordinate positive
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = (-v[0], -v[1])
    return v


def dominant_modulus(t, det: int):
    """Largest eigenvalue modulus of a unimodular 2×2 matrix with trace ``t``."""
    t = abs(t)
    if det == 1:
        return (t + mpmath.sqrt(t * t - 4)) / 2 if t > 2 else mpmath.mpf(1)
    return (t + mpmath.sqrt(t * t + 4)) / 2


def eigen(w: GroupWord, c, precision: int = 256) -> EigenData:
    with mpmath.workprec(precision):
        pm = word_matrix(w)
        det = int(pm.det_poly.constant_value())
        exact = pm(Fraction(c)) if isinstance(c, (int, Fraction)) else pm(mpmath.mpf(c))
        m = tuple(tuple(_mp(x) if isinstance(x, (int, Fraction)) else mpmath.mpf(x) for x in row) for row in exact)
        t = m[0][0] + m[1][1]
        (a, b), (cm, d) = m
        if b == 0 and cm == 0 and a == d and abs(a) == 1:
            return EigenData(Classification.IDENTITY, +t, det, mpmath.mpf(1), 1)
        if det == -1:
            if t == 0:
                return EigenData(Classification.REFLECTION, +t, det, mpmath.mpf(1), -1,
                                 _unit_eigvec(m, 1), _unit_eigvec(m, -1))
            lam = dominant_modulus(t, det)
            s = 1 if t > 0 else -1
            return EigenData(Classification.HYPERBOLIC, +t, det, +lam, -1,
                             _unit_eigvec(m, s * lam), _unit_eigvec(m, -s / lam))
        if abs(t) > 2:
            lam = dominant_modulus(t, det)
            s = 1 if t > 0 else -1
            return EigenData(Classification.HYPERBOLIC, +t, det, +lam, s,
                             _unit_eigvec(m, s * lam), _unit_eigvec(m, s / lam))
        if abs(t) == 2:
            s = 1 if t > 0 else -1
            return EigenData(Classification.PARABOLIC, +t, det, mpmath.mpf(1), s, _unit_eigvec(m, s))
        return EigenData(Classification.ELLIPTIC, +t, det, mpmath.mpf(1), 1)


def log_lambda_derivative(w: GroupWord, c=1, precision: int = 256):
    """d/dc log λ_c from the trace polynomial, for det +1 words hyperbolic at ``c``.

    With λ + 1/λ = |t| the chain rule gives sign(t)·t′(c)/√(t(c)² − 4).
    """
    tp = trace_poly(w)
    t, dt = tp(Fraction(c)), tp.derivative()(Fraction(c))
    if det_sign(w) != 1:
        raise OrientationReversing(f"{w} has determinant -1")
    if abs(t) <= 2:
        raise NotHyperbolic(f"{w} has trace {t} at c={c}")
    with mpmath.workprec(precision):
        s = 1 if t > 0 else -1
        return s * _mp(dt) / mpmath.sqrt(_mp(t * t - 4))


def lambda_derivative(w: GroupWord, c=1, precision: int = 256):
    """d/dc λ_c = λ_c · d/dc log λ_c."""
    with mpmath.workprec(precision):
        return eigen(w, c, precision).lam * log_lambda_derivative(w, c, precision)


def kappa(w: GroupWord, precision: int = 256):
    """κ_G = (1/(2√π)) · (d/dc [2 log λ_c] at c=1)^(-3/2)."""
    with mpmath.workprec(precision):
        deriv = 2 * log_lambda_derivative(w, 1, precision)
        if deriv <= 0:
            raise NonPositiveDerivative(f"d/dc 2 log λ_c = {deriv} at c=1 for {w}")
        return deriv ** mpmath.mpf(-1.5) / (2 * mpmath.sqrt(mpmath.pi))
