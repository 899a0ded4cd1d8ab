"""Charges and positive functionals on eventually affine functions over the natural numbers

A TailFunctional acts as

    phi(f) = sum_i w_i f(i) + alpha * c(f) + beta * s(f)

where c(f) is the limit of a bounded f and s(f) its eventual slope. The
weights are the countably additive part; alpha (mass at infinity) and beta
(slope charge) are the parts that no sequence decreasing to 0 can see.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from ..config.settings import settings
from .errors import DimensionMismatchError, InputError, NotIntegrableError, OutsideDomainError
from .eventually_affine import (
    EventuallyAffine, absolute, constant, first_violation, identity, indicator_from, less_equal,
    negative_part, point_indicator, positive_part, ramp_from, truncate,
)

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


def _weight_map(weights) -> tuple[tuple[int, Fraction], ...]:
    items = weights.items() if isinstance(weights, dict) else weights
    merged: dict[int, Fraction] = {}
    for index, w in items:
        index = int(index)
        w = Fraction(w)
        if index < 0:
            raise InputError(f"negative support index {index}")
        if w < 0:
            raise InputError(f"negative weight {w} at index {index}")
        merged[index] = merged.get(index, ZERO) + w
    return tuple(sorted((i, w) for i, w in merged.items() if w != 0))


def _weighted_sum(weights: tuple[tuple[int, Fraction], ...], f: EventuallyAffine) -> Fraction:
    return sum((w * f(i) for i, w in weights), ZERO)


def _support_end(weights: tuple[tuple[int, Fraction], ...]) -> int:
    """One past the largest support index"""
    return weights[-1][0] + 1 if weights else 0


@dataclass(frozen=True)
class NotIntegrable:
    reason: str


@dataclass(frozen=True)
class TailMeasure:
    weights: tuple[tuple[int, Fraction], ...] = ()
    limit_charge: Fraction = ZERO

    def __post_init__(self):
        object.__setattr__(self, "weights", _weight_map(self.weights))
        alpha = Fraction(self.limit_charge)
        if alpha < 0:
            raise InputError(f"negative mass at infinity {alpha}")
        object.__setattr__(self, "limit_charge", alpha)

    @classmethod
    def dirac(cls, index: int = 0) -> "TailMeasure":
        return cls(((index, ONE),))

    @property
    def total_mass(self) -> Fraction:
        return sum((w for _, w in self.weights), ZERO) + self.limit_charge

    def is_probability(self) -> bool:
        return self.total_mass == 1

    def is_countably_additive(self) -> bool:
        return self.limit_charge == 0


def integrate(m: TailMeasure, f: EventuallyAffine) -> Union[Fraction, NotIntegrable]:
    if f.slope != 0 and m.limit_charge > 0:
        return NotIntegrable(f"slope {f.slope} against mass {m.limit_charge} at infinity")
    value = _weighted_sum(m.weights, f)
    if f.slope == 0:
        value += m.limit_charge * f.offset
    return value


def integrate_strict(m: TailMeasure, f: EventuallyAffine) -> Fraction:
    value = integrate(m, f)
    if isinstance(value, NotIntegrable):
        raise NotIntegrableError(value.reason)
    return value


class Domain(str, Enum):
    EC = "EC"
    EA = "EA"


@dataclass(frozen=True)
class TailFunctional:
    domain: Domain
    weights: tuple[tuple[int, Fraction], ...] = ()
    limit_charge: Fraction = ZERO
    slope_charge: Fraction = ZERO

    def __post_init__(self):
        domain = Domain(self.domain)
        alpha = Fraction(self.limit_charge)
        beta = Fraction(self.slope_charge)
        if alpha < 0 or beta < 0:
            raise InputError("limit and slope charges must be nonnegative")
        if domain is Domain.EA and alpha != 0:
            raise InputError("a positive functional on EA functions has no mass at infinity")
        if domain is Domain.EC:
            beta = ZERO
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "weights", _weight_map(self.weights))
        object.__setattr__(self, "limit_charge", alpha)
        object.__setattr__(self, "slope_charge", beta)

    def check_domain(self, f: EventuallyAffine) -> None:
        if self.domain is Domain.EC and not f.is_bounded():
            raise OutsideDomainError(f"slope {f.slope} function outside the eventually constant lattice")

    def __call__(self, f: EventuallyAffine) -> Fraction:
        self.check_domain(f)
        value = _weighted_sum(self.weights, f) + self.slope_charge * f.slope
        if f.slope == 0:
            value += self.limit_charge * f.offset
        return value

    @property
    def support_end(self) -> int:
        return _support_end(self.weights)


# === Riesz decomposition ===

@dataclass(frozen=True)
class RieszDecomposition:
    m: TailMeasure
    perp: TailFunctional
    phi1: Fraction


def riesz_decompose(phi: TailFunctional) -> RieszDecomposition:
    """phi = phi(1) m + perp with m a probability and perp vanishing on constants"""
    phi1 = phi(constant(1))
    if phi1 == 0:
        return RieszDecomposition(m=TailMeasure.dirac(0), perp=phi, phi1=ZERO)
    m = TailMeasure(tuple((i, w / phi1) for i, w in phi.weights), phi.limit_charge / phi1)
    perp = TailFunctional(phi.domain, (), ZERO, phi.slope_charge)
    return RieszDecomposition(m=m, perp=perp, phi1=phi1)


def spanning_family(domain: Domain, end: int) -> list[EventuallyAffine]:
    """Point masses below end, the tail indicator from end, 1, and the identity on EA"""
    family = [point_indicator(i) for i in range(end)]
    family += [indicator_from(end), constant(1)]
    if domain is Domain.EA:
        family.append(identity())
    return family


def verify_decomposition(phi: TailFunctional, decomposition: RieszDecomposition) -> list[str]:
    """Identity, perp(1) = 0 and positivity of both parts on a family spanning the relevant functions"""
    m, perp, phi1 = decomposition.m, decomposition.perp, decomposition.phi1
    failures = []
    if not m.is_probability():
        failures.append("m is not a probability")
    if phi1 != phi(constant(1)):
        failures.append("phi1 differs from phi(1)")
    if perp.domain is not phi.domain:
        failures.append("perp lives on a different lattice")
        return failures
    if perp(constant(1)) != 0:
        failures.append("perp does not vanish on constants")
    end = max(phi.support_end, _support_end(m.weights), perp.support_end) + 1
    for k, f in enumerate(spanning_family(phi.domain, end)):
        value = integrate(m, f)
        if isinstance(value, NotIntegrable):
            failures.append(f"family member {k} is not integrable")
            continue
        if phi(f) != phi1 * value + perp(f):
            failures.append(f"identity fails on family member {k}")
        if perp(f) < 0:
            failures.append(f"perp is negative on family member {k}")
    return failures


# === Truncations ===

@dataclass(frozen=True)
class TruncationLimits:
    bounded_part: Fraction
    residual: Fraction
    stabilization_index: int


def _truncation_limit(phi: TailFunctional, g: EventuallyAffine) -> tuple[Fraction, int]:
    """lim phi(g ∧ n) for g >= 0 and the first n from which the sequence is constant"""
    if g.is_bounded():
        ceiling = max(0, math.ceil(g.supremum()))
    else:
        # beyond the values of g on the support only the slope charge moves, and g ∧ n has slope 0
        ceiling = max([0] + [math.ceil(g(i)) for i, _ in phi.weights])
    limit = phi(truncate(g, ceiling))
    # phi(g ∧ n) is nondecreasing in n
    low, high = 0, ceiling
    while low < high:
        middle = (low + high) // 2
        if phi(truncate(g, middle)) == limit:
            high = middle
        else:
            low = middle + 1
    return limit, low


def truncation_limits(phi: TailFunctional, f: EventuallyAffine) -> TruncationLimits:
    """lim phi(f ∧ n), taken on f+ and f- separately, and what the truncations miss"""
    phi.check_domain(f)
    # bounded_part is lim phi(f+ ∧ n) - lim phi(f- ∧ n); for f with a negative
    # tail this differs from the literal lim phi(f ∧ n), which truncates only from above
    upper, upper_index = _truncation_limit(phi, positive_part(f))
    lower, lower_index = _truncation_limit(phi, negative_part(f))
    bounded_part = upper - lower
    return TruncationLimits(
        bounded_part=bounded_part,
        residual=phi(f) - bounded_part,
        stabilization_index=max(upper_index, lower_index),
    )


# === Daniell continuity ===

class CounterexampleKind(str, Enum):
    LIMIT_CHARGE = "limit_charge"
    SLOPE_CHARGE = "slope_charge"


@dataclass(frozen=True)
class Daniell:
    """The weight measure represents phi on its whole domain"""
    measure: TailMeasure


@dataclass(frozen=True)
class Counterexample:
    kind: CounterexampleKind
    limit: Fraction
    from_index: int

    @property
    def description(self) -> str:
        if self.kind is CounterexampleKind.LIMIT_CHARGE:
            return "f_n = 1_[n,inf)"
        return "f_n = (i - n)+"

    def member(self, n: int) -> EventuallyAffine:
        if self.kind is CounterexampleKind.LIMIT_CHARGE:
            return indicator_from(n)
        return ramp_from(n)


def daniell_check(phi: TailFunctional) -> Union[Daniell, Counterexample]:
    if phi.limit_charge > 0:
        return Counterexample(CounterexampleKind.LIMIT_CHARGE, phi.limit_charge, phi.support_end)
    if phi.slope_charge > 0:
        return Counterexample(CounterexampleKind.SLOPE_CHARGE, phi.slope_charge, phi.support_end)
    return Daniell(measure=riesz_decompose(phi).m)


def check_window(window: Optional[int]) -> int:
    """Members checked by the verifiers; the configured default when None"""
    if window is None:
        return settings.DANIELL_WINDOW
    if not 3 <= window <= settings.MAX_WINDOW:
        raise InputError(f"window must lie in [3, {settings.MAX_WINDOW}], got {window}")
    return window


def verify_daniell(
    phi: TailFunctional, result: Union[Daniell, Counterexample], window: Optional[int] = None
) -> list[str]:
    window = check_window(window)
    failures = []
    if isinstance(result, Daniell):
        if phi.limit_charge != 0 or phi.slope_charge != 0:
            failures.append("phi charges infinity but was reported continuous")
        decomposition = RieszDecomposition(result.measure, TailFunctional(phi.domain), phi(constant(1)))
        failures += verify_decomposition(phi, decomposition)
        return failures

    members = [result.member(result.from_index + k) for k in range(window)]
    for k, (current, following) in enumerate(zip(members, members[1:])):
        if not less_equal(following, current):
            failures.append(f"family does not decrease at step {k}")
    for k, f in enumerate(members):
        n = result.from_index + k
        if any(f(i) != 0 for i in range(n)):
            failures.append(f"member {n} does not vanish below {n}")
        if phi(f) != result.limit:
            failures.append(f"phi(f_{n}) = {phi(f)} differs from the limit {result.limit}")
    if result.limit <= 0:
        failures.append("counterexample limit is not positive")
    return failures


# === Orderly convergence ===

@dataclass(frozen=True)
class StepVerdict:
    index: int
    holds: bool
    witness: Optional[int] = None


@dataclass(frozen=True)
class OrderlyReport:
    pointwise_domination: tuple[StepVerdict, ...]
    monotone: tuple[StepVerdict, ...]
    nonnegative: tuple[StepVerdict, ...]
    dominator_integrals: tuple[Fraction, ...]
    note: str = "convergence of the dominator integrals to 0 is the caller's assertion; only a finite prefix is checked"


def orderly_diagnostic(
    h: Sequence[EventuallyAffine],
    target: EventuallyAffine,
    dominators: Sequence[EventuallyAffine],
    m: TailMeasure,
) -> OrderlyReport:
    if len(h) != len(dominators):
        raise DimensionMismatchError(f"{len(h)} functions but {len(dominators)} dominators")

    domination = []
    for n, (f, d) in enumerate(zip(h, dominators)):
        witness = first_violation(absolute(f - target), d)
        domination.append(StepVerdict(n, witness is None, witness))

    monotone = []
    for n, (current, following) in enumerate(zip(dominators, dominators[1:])):
        witness = first_violation(following, current)
        monotone.append(StepVerdict(n, witness is None, witness))

    nonnegative = []
    for n, d in enumerate(dominators):
        witness = first_violation(constant(0), d)
        nonnegative.append(StepVerdict(n, witness is None, witness))

    integrals = tuple(integrate_strict(m, d) for d in dominators)
    logger.debug(f"orderly diagnostic over {len(h)} terms")
    return OrderlyReport(
        pointwise_domination=tuple(domination),
        monotone=tuple(monotone),
        nonnegative=tuple(nonnegative),
        dominator_integrals=integrals,
    )


def _violates(f: EventuallyAffine, g: EventuallyAffine, i: int) -> bool:
    return f(i) > g(i)


def _checked_le(f: EventuallyAffine, g: EventuallyAffine, window: int) -> bool:
    """f <= g by evaluation on the prefixes plus a window, and the tail slopes"""
    end = max(f.tail_start, g.tail_start) + window
    if any(_violates(f, g, i) for i in range(end)):
        return False
    return f.slope <= g.slope


def verify_orderly(
    h: Sequence[EventuallyAffine],
    target: EventuallyAffine,
    dominators: Sequence[EventuallyAffine],
    m: TailMeasure,
    report: OrderlyReport,
    window: Optional[int] = None,
) -> list[str]:
    window = check_window(window)
    checks = {
        "domination": [(absolute(f - target), d) for f, d in zip(h, dominators)],
        "monotone": list(zip(dominators[1:], dominators)),
        "nonnegative": [(constant(0), d) for d in dominators],
    }
    verdicts = {
        "domination": report.pointwise_domination,
        "monotone": report.monotone,
        "nonnegative": report.nonnegative,
    }
    failures = []
    for name, pairs in checks.items():
        if len(pairs) != len(verdicts[name]):
            failures.append(f"{name} verdict count differs from the input")
            continue
        for (f, g), verdict in zip(pairs, verdicts[name]):
            if verdict.holds and not _checked_le(f, g, window):
                failures.append(f"{name} step {verdict.index} reported but fails")
            if not verdict.holds and (verdict.witness is None or not _violates(f, g, verdict.witness)):
                failures.append(f"{name} step {verdict.index} has no valid witness")
    for n, (d, value) in enumerate(zip(dominators, report.dominator_integrals)):
        direct = sum((w * d(i) for i, w in m.weights), ZERO)
        if d.slope == 0:
            direct += m.limit_charge * d.offset
        if direct != value:
            failures.append(f"dominator integral {n} does not match")
    return failures
