"""Exact rational arithmetic backend.

All LP/MIP arithmetic in this package is exact. gmpy2's mpq is used when
available (it is much faster than fractions.Fraction); the stdlib Fraction
is a drop-in fallback. Both expose .numerator/.denominator with denominator
> 0 and the value stored in lowest terms, which is the contract the rest of
the code relies on.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

try:
    from gmpy2 import mpq as _mpq, mpz as _mpz

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpq = Fraction
    _mpz = int
    HAVE_GMPY2 = False

Rat = _mpq
Int = _mpz

RatLike = Union[int, Fraction, str, "Rat"]

ZERO = Rat(0)
ONE = Rat(1)


def rat(value: RatLike, den: int | None = None) -> "Rat":
    """Coerce to the exact rational type (exact even for float input)."""
    if den is not None:
        return Rat(value, den)
    if isinstance(value, float):
        # floats are binary rationals; Fraction(float) is exact
        f = Fraction(value)
        return Rat(f.numerator, f.denominator)
    if isinstance(value, Fraction):
        return Rat(value.numerator, value.denominator)
    return Rat(value)


def rat_from_str(text: str) -> "Rat":
    """Parse 'p' or 'p/q' into an exact rational."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Rat(int(num), int(den))
    return Rat(int(text))


def rat_str(value) -> str:
    """Serialize a rational as 'p' or 'p/q' (lossless)."""
    q = rat(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_fraction(value) -> Fraction:
    q = rat(value)
    return Fraction(int(q.numerator), int(q.denominator))


def is_integral(value) -> bool:
    return rat(value).denominator == 1
