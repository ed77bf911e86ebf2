"""Exact rational scalars and the two infinite endpoint values.

Scalar is fractions.Fraction: arbitrary-precision rationals stored in lowest
terms with a positive denominator, exact arithmetic throughout. This module
adds the text grammar (``p/q`` or integer, ``+inf``/``-inf`` for endpoint
values) and the signed infinities used by interval endpoints and hulls.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Fraction


class Infinity:
    """A signed infinite value, comparable against any Scalar."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        if sign not in (-1, 1):
            raise ValueError("sign must be -1 or +1")
        self.sign = sign

    def __neg__(self) -> "Infinity":
        return NEG_INF if self.sign > 0 else POS_INF

    def __lt__(self, other) -> bool:
        if isinstance(other, Infinity):
            return self.sign < other.sign
        return self.sign < 0

    def __le__(self, other) -> bool:
        return self < other or self == other

    def __gt__(self, other) -> bool:
        if isinstance(other, Infinity):
            return self.sign > other.sign
        return self.sign > 0

    def __ge__(self, other) -> bool:
        return self > other or self == other

    def __eq__(self, other) -> bool:
        return isinstance(other, Infinity) and other.sign == self.sign

    def __hash__(self) -> int:
        return hash(("Infinity", self.sign))

    def __repr__(self) -> str:
        return "+inf" if self.sign > 0 else "-inf"


NEG_INF = Infinity(-1)
POS_INF = Infinity(+1)

ExtendedScalar = Union[Scalar, Infinity]


def is_finite(value: ExtendedScalar) -> bool:
    return not isinstance(value, Infinity)


def parse_scalar(text: str) -> Scalar:
    """Parse ``p/q`` or integer text into an exact Scalar.

    Whitespace around the tokens is ignored; the denominator must be nonzero.
    Raises ValueError on anything else (decimals, letters, empty input).
    """
    body = text.strip()
    if not body:
        raise ValueError("empty scalar")
    if "." in body:
        raise ValueError(f"not an exact rational: {text!r} (decimals are rejected)")
    try:
        if "/" in body:
            num, den = body.split("/", 1)
            return Fraction(int(num.strip()), int(den.strip()))
        return Fraction(int(body))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def parse_extended(text: str) -> ExtendedScalar:
    """Like parse_scalar but also accepts ``+inf``/``-inf`` (and ``inf``)."""
    body = text.strip().lower()
    if body in ("+inf", "inf"):
        return POS_INF
    if body == "-inf":
        return NEG_INF
    return parse_scalar(text)


def format_scalar(value: ExtendedScalar) -> str:
    """Print a Scalar as ``p/q`` or integer; infinities as ``+inf``/``-inf``."""
    if isinstance(value, Infinity):
        return repr(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
