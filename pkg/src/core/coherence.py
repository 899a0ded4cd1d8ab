"""Sure wins, separating probabilities, superhedging prices and representations on a finite state space

Every operation is an exact linear program over the cone generators;
the returned certificates can be re-checked with the ``verify_*`` functions.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ..config.settings import settings
from ..utils.helpers import dot
from . import lp
from .errors import EnumerationLimitError, InputError, InvariantError, NoRepresentationError
from .linalg import solve as solve_linear, span_coefficients
from .models import (
    MINUS_INFINITY, PLUS_INFINITY, ConeSpec, CoherenceVerdict, ExtendedValue, FunctionalSpec,
    MinusInfinity, PartialAssignment, PayoffFn, Probability, Separating, SureWin, combine,
)
from .vertices import enumerate_vertices

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


# === Sure wins and separating probabilities ===

def _separating_program(cone: ConeSpec) -> lp.LinearProgram:
    n = cone.scenario.n
    rows = [lp.Row((ONE,) * n, lp.Relation.EQ, ONE)]
    rows += [lp.Row(g.values, lp.Relation.LE, ZERO) for g in cone.generators]
    return lp.LinearProgram(lp.Sense.MAXIMIZE, (ZERO,) * n, tuple(rows))


def _sure_win_program(cone: ConeSpec) -> lp.LinearProgram:
    """Smallest total weight sum_i lambda_i with sum_i lambda_i g_i >= 1"""
    count = len(cone.generators)
    rows = tuple(
        lp.Row(tuple(g.values[w] for g in cone.generators), lp.Relation.GE, ONE)
        for w in range(cone.scenario.n)
    )
    return lp.LinearProgram(lp.Sense.MINIMIZE, (ONE,) * count, rows)


def detect_sure_win(cone: ConeSpec) -> CoherenceVerdict:
    """Either a separating probability (a vertex of M(K)) or a minimal sure-win combination"""
    result = lp.solve(_separating_program(cone))
    if isinstance(result, lp.Optimal):
        verdict = Separating(Probability(result.primal))
    elif isinstance(result, lp.Infeasible) and cone.generators:
        certificate = lp.solve(_sure_win_program(cone))
        if not isinstance(certificate, lp.Optimal):
            raise InvariantError("no separating probability exists but no sure win was found")
        verdict = SureWin(certificate.primal)
    else:
        raise InvariantError(f"unexpected separating program outcome {type(result).__name__}")
    logger.debug(f"cone with {len(cone.generators)} generators → {type(verdict).__name__}")
    return verdict


def verify_verdict(cone: ConeSpec, verdict: CoherenceVerdict) -> list[str]:
    failures = []
    if isinstance(verdict, SureWin):
        if len(verdict.coefficients) != len(cone.generators):
            return [f"sure win has {len(verdict.coefficients)} coefficients for {len(cone.generators)} generators"]
        if any(c < 0 for c in verdict.coefficients):
            failures.append("sure win has a negative coefficient")
        k = cone.element(verdict.coefficients)
        if not cone.scenario.constant(1).dominated_by(k):
            failures.append("sure win combination does not exceed 1 everywhere")
    elif isinstance(verdict, Separating):
        failures += _probability_failures(verdict.m, cone.scenario.n)
        for i, g in enumerate(cone.generators):
            if verdict.m.expectation(g) > 0:
                failures.append(f"separating probability gives generator {i} a positive value")
    else:
        failures.append(f"unknown verdict {type(verdict).__name__}")
    return failures


def _probability_failures(m: Probability, n: int) -> list[str]:
    if len(m.weights) != n:
        return [f"probability has {len(m.weights)} weights for {n} states"]
    failures = []
    if any(w < 0 for w in m.weights):
        failures.append("probability has a negative weight")
    if sum(m.weights) != 1:
        failures.append("probability weights do not sum to 1")
    return failures


# === Superhedging ===

@dataclass(frozen=True)
class SuperhedgePrice:
    value: Union[Fraction, MinusInfinity]
    alpha: Optional[Fraction] = None
    coefficients: Optional[tuple[Fraction, ...]] = None
    dual: Optional[Probability] = None
    sure_win: Optional[SureWin] = None

    @property
    def is_finite(self) -> bool:
        return isinstance(self.value, Fraction)


def _hedge_program(cone: ConeSpec, f: PayoffFn) -> lp.LinearProgram:
    """minimize alpha subject to alpha + sum_i lambda_i g_i >= f"""
    count = len(cone.generators)
    rows = tuple(
        lp.Row((ONE,) + tuple(g.values[w] for g in cone.generators), lp.Relation.GE, f.values[w])
        for w in range(cone.scenario.n)
    )
    bounds = (lp.Bound.FREE,) + (lp.Bound.NONNEGATIVE,) * count
    return lp.LinearProgram(lp.Sense.MINIMIZE, (ONE,) + (ZERO,) * count, rows, bounds)


def superhedge_price(cone: ConeSpec, f: PayoffFn) -> SuperhedgePrice:
    cone.check_payoff(f)
    result = lp.solve(_hedge_program(cone, f))
    if isinstance(result, lp.Optimal):
        return SuperhedgePrice(
            value=result.value,
            alpha=result.primal[0],
            coefficients=tuple(result.primal[1:]),
            dual=Probability(result.dual),
        )
    if isinstance(result, lp.Unbounded):
        verdict = detect_sure_win(cone)
        if not isinstance(verdict, SureWin):
            raise InvariantError("superhedging price is -inf but the cone has no sure win")
        return SuperhedgePrice(value=MINUS_INFINITY, sure_win=verdict)
    raise InvariantError("superhedging program is always feasible")


def verify_price(cone: ConeSpec, f: PayoffFn, price: SuperhedgePrice) -> list[str]:
    if isinstance(price.value, MinusInfinity):
        if price.sure_win is None:
            return ["-inf price without a sure-win certificate"]
        return verify_verdict(cone, price.sure_win)
    failures = []
    if price.alpha != price.value:
        failures.append("primal alpha differs from the reported value")
    if price.coefficients is None or len(price.coefficients) != len(cone.generators):
        return failures + ["primal coefficients missing or of the wrong length"]
    if any(c < 0 for c in price.coefficients):
        failures.append("primal coefficient is negative")
    hedge = cone.element(price.coefficients).shift(price.alpha)
    if not f.dominated_by(hedge):
        failures.append("alpha + k does not dominate the claim")
    if price.dual is not None:
        failures += verify_verdict(cone, Separating(price.dual))
        if price.dual.expectation(f) != price.value:
            failures.append("dual expectation differs from the price")
    return failures


def price_interval(
    cone: ConeSpec, f: PayoffFn, upper: Optional[SuperhedgePrice] = None
) -> tuple[ExtendedValue, ExtendedValue]:
    """(-pi(-f), pi(f)): the prices of f that admit no sure win"""
    upper = (upper or superhedge_price(cone, f)).value
    lower = superhedge_price(cone, -f).value
    lower = PLUS_INFINITY if isinstance(lower, MinusInfinity) else -lower
    return lower, upper


# === Separating measures ===

@dataclass(frozen=True)
class SeparatingMeasures:
    sample: Optional[Probability]
    sure_win: Optional[SureWin] = None
    vertices: Optional[tuple[Probability, ...]] = None

    @property
    def is_empty(self) -> bool:
        return self.sample is None


def separating_measures(cone: ConeSpec, enumerate: bool = False) -> SeparatingMeasures:
    n = cone.scenario.n
    count = len(cone.generators)
    if enumerate and (n > settings.MAX_ENUM_STATES or count > settings.MAX_ENUM_GENERATORS):
        raise EnumerationLimitError(
            f"vertex enumeration is limited to {settings.MAX_ENUM_STATES} states and "
            f"{settings.MAX_ENUM_GENERATORS} generators, got {n} and {count}"
        )
    verdict = detect_sure_win(cone)
    if isinstance(verdict, SureWin):
        return SeparatingMeasures(sample=None, sure_win=verdict, vertices=() if enumerate else None)
    vertices = None
    if enumerate:
        vertices = tuple(Probability(w) for w in separating_vertices(cone))
        logger.debug(f"M(K) has {len(vertices)} vertices")
    return SeparatingMeasures(sample=verdict.m, vertices=vertices)


def separating_vertices(cone: ConeSpec) -> list[tuple[Fraction, ...]]:
    """Vertices of M(K) = {m in simplex : m(g_i) <= 0}, ascending lexicographic"""
    n = cone.scenario.n
    count = len(cone.generators)
    a = [[ONE] * n + [ZERO] * count]
    for i, g in enumerate(cone.generators):
        a.append(list(g.values) + [Fraction(int(i == k)) for k in range(count)])
    b = [ONE] + [ZERO] * count
    projected = {tuple(v[:n]) for v in enumerate_vertices(a, b)}
    return sorted(projected)


def verify_separating(cone: ConeSpec, result: SeparatingMeasures) -> list[str]:
    if result.sample is None:
        if result.sure_win is None:
            return ["empty M(K) without a sure-win certificate"]
        return verify_verdict(cone, result.sure_win)
    failures = verify_verdict(cone, Separating(result.sample))
    for k, vertex in enumerate(result.vertices or ()):
        failures += [f"vertex {k}: {msg}" for msg in verify_verdict(cone, Separating(vertex))]
    if result.vertices is not None and len(set(result.vertices)) != len(result.vertices):
        failures.append("vertex list has duplicates")
    return failures


# === Extension of partial assessments ===

@dataclass(frozen=True)
class ExtensionResult:
    m: Optional[Probability] = None
    sure_win: Optional[tuple[Fraction, ...]] = None

    @property
    def extends(self) -> bool:
        return self.m is not None


def assessment_cone(assignment: PartialAssignment) -> ConeSpec:
    """Both signs of 1_F - lambda(F) for every entry, in entry order"""
    generators = []
    for i in range(len(assignment.entries)):
        payoff = assignment.payoff(i)
        generators += [payoff, -payoff]
    return ConeSpec(assignment.scenario, tuple(generators))


def extend_to_probability(assignment: PartialAssignment) -> ExtensionResult:
    verdict = detect_sure_win(assessment_cone(assignment))
    if isinstance(verdict, Separating):
        return ExtensionResult(m=verdict.m)
    lam = verdict.coefficients
    signed = tuple(lam[2 * i] - lam[2 * i + 1] for i in range(len(assignment.entries)))
    return ExtensionResult(sure_win=signed)


def verify_extension(assignment: PartialAssignment, result: ExtensionResult) -> list[str]:
    n = assignment.scenario.n
    if result.m is not None:
        failures = _probability_failures(result.m, n)
        for i, (event, value) in enumerate(assignment.entries):
            if result.m.expectation(assignment.scenario.indicator(event)) != value:
                failures.append(f"m does not reproduce entry {i}")
        return failures
    if result.sure_win is None or len(result.sure_win) != len(assignment.entries):
        return ["sure-win coefficients missing or of the wrong length"]
    payoffs = [assignment.payoff(i) for i in range(len(assignment.entries))]
    total = combine(result.sure_win, payoffs, n)
    if not assignment.scenario.constant(1).dominated_by(total):
        return ["assessment combination does not exceed 1 everywhere"]
    return []


# === Representation of linear functionals ===

@dataclass(frozen=True)
class Representation:
    """phi(f) = phi1 * m(f) on the span of the basis"""
    charge: tuple[Fraction, ...]
    phi1: Fraction
    positive: bool = False

    @property
    def positive_part(self) -> tuple[Fraction, ...]:
        return tuple(max(w, ZERO) for w in self.charge)

    @property
    def negative_part(self) -> tuple[Fraction, ...]:
        return tuple(max(-w, ZERO) for w in self.charge)


@dataclass(frozen=True)
class NotPositive:
    """A nonnegative f in the span with phi(f) < 0"""
    witness: PayoffFn
    coefficients: tuple[Fraction, ...]
    value: Fraction


def kernel_cone(spec: FunctionalSpec, phi1: Fraction) -> ConeSpec:
    """Both signs of h - phi(h)/phi(1); its separating probabilities represent phi"""
    generators = []
    for h, v in zip(spec.basis, spec.values):
        shifted = h.shift(-v / phi1)
        generators += [shifted, -shifted]
    return ConeSpec(spec.scenario, tuple(generators))


def represent_functional(
    spec: FunctionalSpec, require_positive: bool = False
) -> Union[Representation, NotPositive]:
    n = spec.scenario.n
    basis = [h.values for h in spec.basis]
    one = span_coefficients((ONE,) * n, basis)
    if one is None:
        raise InputError("the constant function 1 is not in the span of the basis")
    phi1 = dot(one, spec.values)

    if phi1 == 0:
        if any(v != 0 for v in spec.values):
            raise NoRepresentationError("phi(1) = 0 but phi does not vanish on its domain")
        return Representation(Probability.dirac(n).weights, phi1, positive=True)

    if not require_positive:
        rows = [list(h) for h in basis] + [[ONE] * n]
        rhs = [v / phi1 for v in spec.values] + [ONE]
        charge = solve_linear(rows, rhs)
        if charge is None:
            raise InvariantError("a well-defined functional failed to extend to all functions")
        return Representation(tuple(charge), phi1, positive=all(w >= 0 for w in charge))

    if phi1 < 0:
        return NotPositive(witness=spec.scenario.constant(1), coefficients=tuple(one), value=phi1)

    verdict = detect_sure_win(kernel_cone(spec, phi1))
    if isinstance(verdict, Separating):
        return Representation(verdict.m.weights, phi1, positive=True)

    # k = g - phi(g)/phi(1) >= 1 with g = sum_i a_i h_i; f = k - 1 has phi(f) = -phi(1)
    lam = verdict.coefficients
    a = [lam[2 * i] - lam[2 * i + 1] for i in range(len(spec.basis))]
    shift = dot(a, spec.values) / phi1 + 1
    coefficients = tuple(ai - shift * ci for ai, ci in zip(a, one))
    witness = combine(coefficients, spec.basis, n)
    return NotPositive(witness=witness, coefficients=coefficients, value=dot(coefficients, spec.values))


def verify_representation(spec: FunctionalSpec, result: Union[Representation, NotPositive]) -> list[str]:
    n = spec.scenario.n
    if isinstance(result, NotPositive):
        failures = []
        if combine(result.coefficients, spec.basis, n) != result.witness:
            failures.append("witness is not the stated combination of basis elements")
        if not result.witness.is_nonnegative():
            failures.append("witness is not nonnegative")
        if dot(result.coefficients, spec.values) != result.value or result.value >= 0:
            failures.append("witness value is not a negative phi(f)")
        return failures
    if len(result.charge) != n:
        return [f"charge has {len(result.charge)} weights for {n} states"]
    failures = []
    if result.positive and any(w < 0 for w in result.charge):
        failures.append("positive representation has a negative weight")
    if result.phi1 != 0 and sum(result.charge) != 1:
        failures.append("representing charge does not have total mass 1")
    for i, (h, v) in enumerate(zip(spec.basis, spec.values)):
        if result.phi1 * dot(result.charge, h.values) != v:
            failures.append(f"phi(1) m(h) differs from phi(h) on basis element {i}")
    return failures
