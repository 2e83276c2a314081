"""Helpers for exact rationals: "p/q" strings and mpmath conversion."""

from __future__ import annotations

import sys
from fractions import Fraction

import mpmath

# exact areas and partial sums routinely exceed the default 4300-digit guard
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


def frac_str(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def to_mpf(v):
    v = Fraction(v)
    return mpmath.mpf(v.numerator) / v.denominator
