"""Utility helper functions"""
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from ..core.errors import InputError

RationalLike = Union[int, str, Fraction]

_RATIONAL_PATTERN = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")

def parse_rational(value, path: str = "value") -> Fraction:
    """Parse a JSON integer or a "p/q" string into a Fraction"""
    if isinstance(value, bool):
        raise InputError(f"invalid rational at {path}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str) or not _RATIONAL_PATTERN.match(value):
        raise InputError(f"invalid rational at {path}")
    try:
        return Fraction(value.replace(" ", ""))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"invalid rational at {path}")

def parse_vector(values: Sequence, path: str) -> tuple[Fraction, ...]:
    """Parse a JSON array of rationals, reporting the failing index"""
    return tuple(parse_rational(v, f"{path}[{i}]") for i, v in enumerate(values))

def format_rational(q: Fraction) -> str:
    """Canonical string form: "p" for integers, "p/q" otherwise"""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"

def format_vector(values: Iterable[Fraction]) -> list[str]:
    return [format_rational(v) for v in values]

def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    """Exact inner product of two equal-length sequences"""
    if len(a) != len(b):
        raise InputError(f"length mismatch in inner product: {len(a)} vs {len(b)}")
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))

def to_fractions(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)

def format_location(loc: Iterable) -> str:
    """JSON path as in "claim[1]" or "functional.weights[0]" """
    path = ""
    for part in loc:
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path or "document"
