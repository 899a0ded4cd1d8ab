"""Eventually affine functions on the natural numbers

f(i) = prefix[i] for i < K and f(i) = slope * i + offset for i >= K, with
K = len(prefix) kept minimal. Every lattice operation works on a finite
horizon past which the order of the two tails no longer changes.
"""
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .errors import InputError

ZERO = Fraction(0)


@dataclass(frozen=True)
class EventuallyAffine:
    prefix: tuple[Fraction, ...] = ()
    slope: Fraction = ZERO
    offset: Fraction = ZERO

    def __post_init__(self):
        slope = Fraction(self.slope)
        offset = Fraction(self.offset)
        prefix = [Fraction(v) for v in self.prefix]
        while prefix and prefix[-1] == slope * (len(prefix) - 1) + offset:
            prefix.pop()
        object.__setattr__(self, "prefix", tuple(prefix))
        object.__setattr__(self, "slope", slope)
        object.__setattr__(self, "offset", offset)

    @property
    def tail_start(self) -> int:
        return len(self.prefix)

    def __call__(self, i: int) -> Fraction:
        if i < 0:
            raise InputError(f"negative index {i}")
        if i < len(self.prefix):
            return self.prefix[i]
        return self.slope * i + self.offset

    def values(self, count: int) -> tuple[Fraction, ...]:
        return tuple(self(i) for i in range(count))

    def __add__(self, other: "EventuallyAffine") -> "EventuallyAffine":
        horizon = max(self.tail_start, other.tail_start)
        return EventuallyAffine(
            tuple(self(i) + other(i) for i in range(horizon)),
            self.slope + other.slope,
            self.offset + other.offset,
        )

    def __neg__(self) -> "EventuallyAffine":
        return self.scale(-1)

    def __sub__(self, other: "EventuallyAffine") -> "EventuallyAffine":
        return self + (-other)

    def scale(self, t) -> "EventuallyAffine":
        t = Fraction(t)
        return EventuallyAffine(tuple(t * v for v in self.prefix), t * self.slope, t * self.offset)

    def is_bounded(self) -> bool:
        return self.slope == 0

    def supremum(self) -> Fraction:
        if not self.is_bounded():
            raise InputError("supremum of an unbounded function")
        return max(self.prefix + (self.offset,))


def constant(c) -> EventuallyAffine:
    return EventuallyAffine((), ZERO, Fraction(c))


def identity() -> EventuallyAffine:
    return EventuallyAffine((), Fraction(1), ZERO)


def indicator_from(n: int) -> EventuallyAffine:
    """1 on [n, inf)"""
    return EventuallyAffine((ZERO,) * n, ZERO, Fraction(1))


def ramp_from(n: int) -> EventuallyAffine:
    """(i - n)+"""
    return EventuallyAffine((ZERO,) * n, Fraction(1), Fraction(-n))


def point_indicator(n: int) -> EventuallyAffine:
    return EventuallyAffine((ZERO,) * n + (Fraction(1),), ZERO, ZERO)


def _horizon(f: EventuallyAffine, g: EventuallyAffine) -> int:
    """First index from which f - g keeps one sign"""
    horizon = max(f.tail_start, g.tail_start)
    if f.slope != g.slope:
        crossing = (g.offset - f.offset) / (f.slope - g.slope)
        horizon = max(horizon, math.floor(crossing) + 1)
    return horizon


def _tail_gap(f: EventuallyAffine, g: EventuallyAffine, i: int) -> Fraction:
    return (f.slope - g.slope) * i + (f.offset - g.offset)


def meet(f: EventuallyAffine, g: EventuallyAffine) -> EventuallyAffine:
    horizon = _horizon(f, g)
    lower = f if _tail_gap(f, g, horizon) <= 0 else g
    return EventuallyAffine(
        tuple(min(f(i), g(i)) for i in range(horizon)), lower.slope, lower.offset
    )


def join(f: EventuallyAffine, g: EventuallyAffine) -> EventuallyAffine:
    horizon = _horizon(f, g)
    upper = f if _tail_gap(f, g, horizon) >= 0 else g
    return EventuallyAffine(
        tuple(max(f(i), g(i)) for i in range(horizon)), upper.slope, upper.offset
    )


def truncate(f: EventuallyAffine, n) -> EventuallyAffine:
    """f ∧ n"""
    return meet(f, constant(n))


def positive_part(f: EventuallyAffine) -> EventuallyAffine:
    return join(f, constant(0))


def negative_part(f: EventuallyAffine) -> EventuallyAffine:
    return join(-f, constant(0))


def absolute(f: EventuallyAffine) -> EventuallyAffine:
    return join(f, -f)


def first_violation(f: EventuallyAffine, g: EventuallyAffine) -> Optional[int]:
    """Smallest i with f(i) > g(i), or None when f <= g everywhere"""
    horizon = _horizon(f, g)
    for i in range(horizon):
        if f(i) > g(i):
            return i
    if _tail_gap(f, g, horizon) > 0:
        return horizon
    return None


def less_equal(f: EventuallyAffine, g: EventuallyAffine) -> bool:
    return first_violation(f, g) is None


def is_nonnegative(f: EventuallyAffine) -> bool:
    return less_equal(constant(0), f)


class Operation(str, Enum):
    ADD = "add"
    SCALE = "scale"
    MEET = "meet"
    JOIN = "join"
    TRUNCATE = "truncate"
    COMPARE = "compare"


@dataclass(frozen=True)
class OrderVerdict:
    """Whether f <= g pointwise; witness is the first index where it fails"""
    holds: bool
    witness: Optional[int] = None


def ea_combine(
    op: Union[Operation, str], f: EventuallyAffine, g: Union[EventuallyAffine, Fraction, int, None] = None
) -> Union[EventuallyAffine, OrderVerdict]:
    op = Operation(op)
    if op in (Operation.SCALE, Operation.TRUNCATE):
        if g is None or isinstance(g, EventuallyAffine):
            raise InputError(f"{op.value} needs a scalar argument")
        return f.scale(g) if op is Operation.SCALE else truncate(f, g)
    if not isinstance(g, EventuallyAffine):
        raise InputError(f"{op.value} needs a second function")
    if op is Operation.ADD:
        return f + g
    if op is Operation.MEET:
        return meet(f, g)
    if op is Operation.JOIN:
        return join(f, g)
    witness = first_violation(f, g)
    return OrderVerdict(holds=witness is None, witness=witness)
