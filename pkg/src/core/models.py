"""Domain types for finite state spaces"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from ..utils.helpers import dot, to_fractions
from .errors import DimensionMismatchError, InputError, ScenarioMismatchError
from .linalg import rank


@dataclass(frozen=True)
class Scenario:
    """Ordered finite state space; the order fixes coordinate indices"""
    states: tuple[str, ...]

    def __post_init__(self):
        states = tuple(str(s) for s in self.states)
        if not states:
            raise InputError("a scenario needs at least one state")
        if len(set(states)) != len(states):
            raise InputError(f"state labels must be distinct: {list(states)}")
        object.__setattr__(self, "states", states)

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise InputError(f"unknown state {label!r}")

    def indicator(self, event: Iterable[str]) -> "PayoffFn":
        members = {self.index(label) for label in event}
        return PayoffFn(tuple(Fraction(int(i in members)) for i in range(self.n)))

    def constant(self, c) -> "PayoffFn":
        return PayoffFn((Fraction(c),) * self.n)


@dataclass(frozen=True)
class PayoffFn:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", to_fractions(self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __add__(self, other: "PayoffFn") -> "PayoffFn":
        _same_length(self, other)
        return PayoffFn(tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "PayoffFn") -> "PayoffFn":
        _same_length(self, other)
        return PayoffFn(tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "PayoffFn":
        return PayoffFn(tuple(-a for a in self.values))

    def scale(self, c) -> "PayoffFn":
        return PayoffFn(tuple(Fraction(c) * a for a in self.values))

    def shift(self, c) -> "PayoffFn":
        return PayoffFn(tuple(a + Fraction(c) for a in self.values))

    def dominated_by(self, other: "PayoffFn") -> bool:
        """Pointwise self <= other"""
        _same_length(self, other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for a in self.values)

    def is_constant(self, c) -> bool:
        return all(a == Fraction(c) for a in self.values)


def _same_length(f: PayoffFn, g: PayoffFn) -> None:
    if len(f) != len(g):
        raise DimensionMismatchError(f"payoffs of length {len(f)} and {len(g)}")


def combine(coefficients: Sequence[Fraction], functions: Sequence[PayoffFn], n: int) -> PayoffFn:
    """sum_i c_i f_i on an n-state scenario"""
    total = [Fraction(0)] * n
    for c, f in zip(coefficients, functions):
        for i, v in enumerate(f.values):
            total[i] += c * v
    return PayoffFn(tuple(total))


@dataclass(frozen=True)
class ConeSpec:
    """K = { sum_i lambda_i g_i : lambda >= 0 }; no generators means K = {0}"""
    scenario: Scenario
    generators: tuple[PayoffFn, ...] = ()

    def __post_init__(self):
        generators = tuple(g if isinstance(g, PayoffFn) else PayoffFn(g) for g in self.generators)
        for i, g in enumerate(generators):
            if len(g) != self.scenario.n:
                raise DimensionMismatchError(
                    f"generator {i} has {len(g)} values for {self.scenario.n} states"
                )
        object.__setattr__(self, "generators", generators)

    def element(self, coefficients: Sequence[Fraction]) -> PayoffFn:
        return combine(coefficients, self.generators, self.scenario.n)

    def check_payoff(self, f: PayoffFn, name: str = "claim") -> None:
        if len(f) != self.scenario.n:
            raise ScenarioMismatchError(
                f"{name} has {len(f)} values but the scenario has {self.scenario.n} states"
            )


@dataclass(frozen=True)
class Probability:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = to_fractions(self.weights)
        if not weights:
            raise InputError("a probability needs at least one weight")
        if any(w < 0 for w in weights):
            raise InputError(f"negative probability weight in {list(weights)}")
        if sum(weights) != 1:
            raise InputError(f"probability weights sum to {sum(weights)}, not 1")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def dirac(cls, n: int, index: int = 0) -> "Probability":
        return cls(tuple(Fraction(int(i == index)) for i in range(n)))

    def expectation(self, f: PayoffFn) -> Fraction:
        return dot(self.weights, f.values)


@dataclass(frozen=True)
class MinusInfinity:
    """Structural -infinity outcome, never a numeric sentinel"""

    def __str__(self) -> str:
        return "-inf"


@dataclass(frozen=True)
class PlusInfinity:

    def __str__(self) -> str:
        return "+inf"


MINUS_INFINITY = MinusInfinity()
PLUS_INFINITY = PlusInfinity()

ExtendedValue = Union[Fraction, MinusInfinity, PlusInfinity]


@dataclass(frozen=True)
class SureWin:
    """Nonnegative coefficients with sum_i lambda_i g_i >= 1 pointwise"""
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", to_fractions(self.coefficients))


@dataclass(frozen=True)
class Separating:
    """A probability m with m(g_i) <= 0 for every generator"""
    m: Probability


CoherenceVerdict = Union[SureWin, Separating]


@dataclass(frozen=True)
class PartialAssignment:
    scenario: Scenario
    entries: tuple[tuple[frozenset, Fraction], ...] = ()

    def __post_init__(self):
        entries = []
        for i, (event, value) in enumerate(self.entries):
            event = frozenset(str(s) for s in event)
            unknown = event - set(self.scenario.states)
            if unknown:
                raise InputError(f"entry {i} mentions unknown states {sorted(unknown)}")
            entries.append((event, Fraction(value)))
        object.__setattr__(self, "entries", tuple(entries))

    def payoff(self, index: int) -> PayoffFn:
        """1_F - lambda(F) for the entry at index"""
        event, value = self.entries[index]
        return self.scenario.indicator(event).shift(-value)


@dataclass(frozen=True)
class FunctionalSpec:
    """A linear functional given on a basis; well-definedness is checked at construction"""
    scenario: Scenario
    basis: tuple[PayoffFn, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        basis = tuple(h if isinstance(h, PayoffFn) else PayoffFn(h) for h in self.basis)
        values = to_fractions(self.values)
        if len(basis) != len(values):
            raise DimensionMismatchError(f"{len(basis)} basis elements but {len(values)} values")
        for i, h in enumerate(basis):
            if len(h) != self.scenario.n:
                raise DimensionMismatchError(
                    f"basis element {i} has {len(h)} values for {self.scenario.n} states"
                )
        plain = [list(h.values) for h in basis]
        augmented = [list(h.values) + [v] for h, v in zip(basis, values)]
        if basis and rank(plain) != rank(augmented):
            raise InputError("functional is not well defined: a linear dependency among basis elements is violated")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "values", values)
