"""Generated concave integrals, their cores, and common extensions of functional families

The generated integral of an anchor set {(f_j, gamma_j)} is

    gamma(f) = sup { sum_j lambda_j gamma_j : sum_j lambda_j f_j <= f }

with lambda_j >= 0, except for the normalization anchor (constant 1,
value 1) whose coefficient is free: the constants form a linear space,
which makes gamma additive against every constant and turns the dual
solutions into probabilities of the core.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from ..utils.helpers import dot
from . import lp
from .coherence import detect_sure_win
from .errors import InputError, InvariantError
from .linalg import span_coefficients
from .models import (
    MINUS_INFINITY, PLUS_INFINITY, ConeSpec, ExtendedValue, FunctionalSpec, PayoffFn,
    Probability, Scenario, Separating, SureWin, combine,
)

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class AnchorSet:
    scenario: Scenario
    anchors: tuple[tuple[PayoffFn, Fraction], ...]
    membership_only: bool = False

    def __post_init__(self):
        anchors = []
        for j, (f, gamma) in enumerate(self.anchors):
            f = f if isinstance(f, PayoffFn) else PayoffFn(f)
            if len(f) != self.scenario.n:
                raise InputError(f"anchor {j} has {len(f)} values for {self.scenario.n} states")
            anchors.append((f, Fraction(gamma)))
        object.__setattr__(self, "anchors", tuple(anchors))
        if not self.membership_only and self.normalization_index is None:
            raise InputError("anchor set must contain the normalization anchor (constant 1, value 1)")

    @property
    def normalization_index(self) -> Optional[int]:
        return next(
            (j for j, (f, gamma) in enumerate(self.anchors) if f.is_constant(1) and gamma == 1),
            None,
        )

    @property
    def functions(self) -> tuple[PayoffFn, ...]:
        return tuple(f for f, _ in self.anchors)

    @property
    def gammas(self) -> tuple[Fraction, ...]:
        return tuple(gamma for _, gamma in self.anchors)

    def bounds(self) -> tuple[lp.Bound, ...]:
        free = self.normalization_index
        return tuple(
            lp.Bound.FREE if j == free else lp.Bound.NONNEGATIVE for j in range(len(self.anchors))
        )

    def anchor_cone(self) -> ConeSpec:
        """gamma_j - f_j for every anchor; a sure win here means no probability lies in the core"""
        return ConeSpec(self.scenario, tuple(f.scale(-1).shift(gamma) for f, gamma in self.anchors))


@dataclass(frozen=True)
class CoreElement:
    """A positive charge, not necessarily normalized"""
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        if any(w < 0 for w in weights):
            raise InputError("core elements are positive charges")
        object.__setattr__(self, "weights", weights)

    def integral(self, f: PayoffFn) -> Fraction:
        return dot(self.weights, f.values)


@dataclass(frozen=True)
class GeneratedValue:
    value: ExtendedValue
    weights: Optional[tuple[Fraction, ...]] = None
    core: Optional[CoreElement] = None


def _check_payoff(anchors: AnchorSet, f: PayoffFn) -> None:
    if len(f) != anchors.scenario.n:
        raise InputError(f"function has {len(f)} values for {anchors.scenario.n} states")


def eval_generated(anchors: AnchorSet, f: PayoffFn) -> GeneratedValue:
    _check_payoff(anchors, f)
    if not anchors.anchors:
        return GeneratedValue(value=ZERO if f.is_nonnegative() else MINUS_INFINITY, weights=())

    n = anchors.scenario.n
    rows = tuple(
        lp.Row(tuple(g.values[w] for g in anchors.functions), lp.Relation.LE, f.values[w])
        for w in range(n)
    )
    program = lp.LinearProgram(lp.Sense.MAXIMIZE, anchors.gammas, rows, anchors.bounds())
    result = lp.solve(program)
    if isinstance(result, lp.Optimal):
        return GeneratedValue(value=result.value, weights=result.primal, core=CoreElement(result.dual))
    if isinstance(result, lp.Infeasible):
        return GeneratedValue(value=MINUS_INFINITY)
    return GeneratedValue(value=PLUS_INFINITY)


def verify_generated(anchors: AnchorSet, f: PayoffFn, result: GeneratedValue) -> list[str]:
    """A finite value needs a feasible decomposition and a core element attaining it"""
    if not isinstance(result.value, Fraction):
        return []
    failures = []
    if result.weights is None or len(result.weights) != len(anchors.anchors):
        return ["decomposition weights missing"]
    free = anchors.normalization_index
    if any(w < 0 for j, w in enumerate(result.weights) if j != free):
        failures.append("negative decomposition weight")
    if not combine(result.weights, anchors.functions, anchors.scenario.n).dominated_by(f):
        failures.append("decomposition exceeds the function")
    if dot(result.weights, anchors.gammas) != result.value:
        failures.append("decomposition value differs from the reported value")
    if result.core is not None:
        membership = core_membership(anchors, result.core)
        if not membership.member:
            failures.append(f"dual charge violates anchor {membership.violated}")
        if result.core.integral(f) != result.value:
            failures.append("dual charge does not attain the value")
    return failures


@dataclass(frozen=True)
class CoreMembership:
    member: bool
    violated: Optional[int] = None


def core_membership(anchors: AnchorSet, candidate: CoreElement) -> CoreMembership:
    if len(candidate.weights) != anchors.scenario.n:
        raise InputError(f"charge has {len(candidate.weights)} weights for {anchors.scenario.n} states")
    free = anchors.normalization_index
    for j, (f, gamma) in enumerate(anchors.anchors):
        value = candidate.integral(f)
        # the normalization anchor carries a free coefficient, so it binds with equality
        if value < gamma or (j == free and value != gamma):
            return CoreMembership(member=False, violated=j)
    return CoreMembership(member=True)


# === Shapley witnesses ===

@dataclass(frozen=True)
class ShapleyWitness:
    gamma_c: Fraction
    witness: Probability
    theta: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]


@dataclass(frozen=True)
class Incoherent:
    cone: ConeSpec
    sure_win: SureWin


def shapley_cone(anchors: AnchorSet, subset: Sequence[int], gamma_c: Fraction) -> ConeSpec:
    """gamma_j - f_j for every anchor, then f_s - gamma(C) for every s in C"""
    extra = tuple(anchors.anchors[s][0].shift(-gamma_c) for s in subset)
    return ConeSpec(anchors.scenario, anchors.anchor_cone().generators + extra)


def _check_subset(anchors: AnchorSet, subset: Sequence[int]) -> tuple[int, ...]:
    subset = tuple(subset)
    if not subset:
        raise InputError("the convex set C needs at least one anchor index")
    for s in subset:
        if not 0 <= s < len(anchors.anchors):
            raise InputError(f"anchor index {s} out of range")
    return subset


def shapley_witness(anchors: AnchorSet, subset: Sequence[int]) -> Union[ShapleyWitness, Incoherent]:
    """gamma(C) over C = conv{f_s : s in subset} and a core probability attaining it"""
    if anchors.membership_only:
        raise InputError("shapley witnesses need the normalization anchor")
    subset = _check_subset(anchors, subset)

    verdict = detect_sure_win(anchors.anchor_cone())
    if isinstance(verdict, SureWin):
        logger.debug("anchor set is incoherent")
        return Incoherent(cone=anchors.anchor_cone(), sure_win=verdict)

    n = anchors.scenario.n
    count = len(anchors.anchors)
    rows = [
        lp.Row(
            tuple(f.values[w] for f in anchors.functions)
            + tuple(-anchors.anchors[s][0].values[w] for s in subset),
            lp.Relation.LE,
            ZERO,
        )
        for w in range(n)
    ]
    rows.append(lp.Row((ZERO,) * count + (ONE,) * len(subset), lp.Relation.EQ, ONE))
    program = lp.LinearProgram(
        lp.Sense.MAXIMIZE,
        anchors.gammas + (ZERO,) * len(subset),
        tuple(rows),
        anchors.bounds() + (lp.Bound.NONNEGATIVE,) * len(subset),
    )
    result = lp.solve(program)
    if not isinstance(result, lp.Optimal):
        raise InvariantError(f"coherent anchors gave a {type(result).__name__} gamma(C) program")

    gamma_c = result.value
    witness = Probability(result.dual[:n])
    if not isinstance(detect_sure_win(shapley_cone(anchors, subset, gamma_c)), Separating):
        raise InvariantError("the shapley cone admits a sure win for a coherent anchor set")
    return ShapleyWitness(
        gamma_c=gamma_c,
        witness=witness,
        theta=tuple(result.primal[count:]),
        weights=tuple(result.primal[:count]),
    )


def verify_shapley(
    anchors: AnchorSet, subset: Sequence[int], result: Union[ShapleyWitness, Incoherent]
) -> list[str]:
    n = anchors.scenario.n
    if isinstance(result, Incoherent):
        k = result.cone.element(result.sure_win.coefficients)
        failures = []
        if result.cone.generators != anchors.anchor_cone().generators:
            failures.append("incoherence certificate is not over the anchor cone")
        if any(c < 0 for c in result.sure_win.coefficients):
            failures.append("negative sure-win coefficient")
        if not anchors.scenario.constant(1).dominated_by(k):
            failures.append("sure win does not exceed 1 everywhere")
        return failures

    failures = []
    charge = CoreElement(result.witness.weights)
    membership = core_membership(anchors, charge)
    if not membership.member:
        failures.append(f"witness violates anchor {membership.violated}")
    if sum(result.witness.weights) != 1:
        failures.append("witness is not a probability")
    values = [charge.integral(anchors.anchors[s][0]) for s in subset]
    if max(values) != result.gamma_c:
        failures.append("max over C of the witness differs from gamma(C)")
    # the primal side: a point of conv C whose generated value reaches gamma(C)
    if sum(result.theta) != 1 or any(t < 0 for t in result.theta):
        failures.append("convex weights are not a probability vector")
    point = combine(result.theta, [anchors.anchors[s][0] for s in subset], n)
    decomposition = combine(result.weights, anchors.functions, n)
    if not decomposition.dominated_by(point):
        failures.append("decomposition exceeds the point of C")
    if dot(result.weights, anchors.gammas) != result.gamma_c:
        failures.append("decomposition value differs from gamma(C)")
    return failures


# === Common extensions of functional families ===

@dataclass(frozen=True)
class FamilyMember:
    tau: frozenset
    basis: tuple[PayoffFn, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "tau", frozenset(str(t) for t in self.tau))
        object.__setattr__(self, "basis", tuple(h if isinstance(h, PayoffFn) else PayoffFn(h) for h in self.basis))
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))


@dataclass(frozen=True)
class ExtensionProblem:
    omega: Scenario
    base: tuple[str, ...]
    family: tuple[FamilyMember, ...]

    def __post_init__(self):
        base = tuple(str(t) for t in self.base)
        if not base or len(set(base)) != len(base):
            raise InputError("the base set T needs distinct labels")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "family", tuple(self.family))
        for k, member in enumerate(self.family):
            unknown = member.tau - set(base)
            if unknown:
                raise InputError(f"member {k} mentions unknown labels {sorted(unknown)}")
            # raises when the basis/values pair is not a well-defined functional
            FunctionalSpec(self.omega, member.basis, member.values)
        if self.root_index is None:
            raise InputError("the family needs a member with tau = T whose span contains the constant 1")

    @property
    def root_index(self) -> Optional[int]:
        one = (ONE,) * self.omega.n
        for k, member in enumerate(self.family):
            if member.tau == frozenset(self.base) and member.basis:
                if span_coefficients(one, [h.values for h in member.basis]) is not None:
                    return k
        return None

    @property
    def cells(self) -> tuple[tuple[str, str], ...]:
        """(state, label) pairs of Omega x T, labels outermost"""
        return tuple((w, t) for t in self.base for w in self.omega.states)

    def variables(self) -> tuple[tuple[int, int], ...]:
        return tuple((k, i) for k, member in enumerate(self.family) for i in range(len(member.basis)))

    def column(self, cell: tuple[str, str]) -> tuple[Fraction, ...]:
        state, label = cell
        w = self.omega.index(state)
        return tuple(
            self.family[k].basis[i].values[w] if label in self.family[k].tau else ZERO
            for k, i in self.variables()
        )


@dataclass(frozen=True)
class CoherenceBound:
    bound: Fraction
    coefficients: tuple[Fraction, ...]
    mu: dict


@dataclass(frozen=True)
class UnboundedFamily:
    """Improving ray in basis-coefficient space: the family is incoherent"""
    ray: tuple[Fraction, ...]


def _bound_program(problem: ExtensionProblem) -> lp.LinearProgram:
    variables = problem.variables()
    objective = tuple(problem.family[k].values[i] for k, i in variables)
    rows = tuple(lp.Row(problem.column(cell), lp.Relation.LE, ONE) for cell in problem.cells)
    return lp.LinearProgram(lp.Sense.MAXIMIZE, objective, rows, (lp.Bound.FREE,) * len(variables))


def coherence_bound(problem: ExtensionProblem) -> Union[CoherenceBound, UnboundedFamily]:
    result = lp.solve(_bound_program(problem))
    if isinstance(result, lp.Optimal):
        mu = {cell: y for cell, y in zip(problem.cells, result.dual)}
        return CoherenceBound(bound=result.value, coefficients=result.primal, mu=mu)
    if isinstance(result, lp.Unbounded):
        return UnboundedFamily(ray=result.ray)
    raise InvariantError("the zero combination is always feasible")


def verify_bound(problem: ExtensionProblem, result: Union[CoherenceBound, UnboundedFamily]) -> list[str]:
    variables = problem.variables()
    objective = [problem.family[k].values[i] for k, i in variables]
    if isinstance(result, UnboundedFamily):
        failures = []
        if len(result.ray) != len(variables):
            return ["ray has the wrong length"]
        for cell in problem.cells:
            if dot(problem.column(cell), result.ray) > 0:
                failures.append(f"ray raises the combination at {cell}")
        if dot(objective, result.ray) <= 0:
            failures.append("ray does not increase the objective")
        return failures
    failures = []
    for cell in problem.cells:
        if dot(problem.column(cell), result.coefficients) > 1:
            failures.append(f"combination exceeds 1 at {cell}")
    if dot(objective, result.coefficients) != result.bound:
        failures.append("combination value differs from the bound")
    extension = verify_extension_charge(problem, result.mu)
    failures += extension
    if sum(result.mu.values(), ZERO) != result.bound:
        failures.append("dual mass differs from the bound")
    return failures


@dataclass(frozen=True)
class CommonExtension:
    mu: dict

    def mass(self) -> Fraction:
        return sum(self.mu.values(), ZERO)


@dataclass(frozen=True)
class IncoherentFamily:
    ray: tuple[Fraction, ...]


def common_extension(
    problem: ExtensionProblem, bound: Optional[Union[CoherenceBound, UnboundedFamily]] = None
) -> Union[CommonExtension, IncoherentFamily]:
    """A positive charge on Omega x T reproducing every phi_tau on its basis

    An already solved coherence_bound of the same problem may be passed in.
    """
    bound = bound or coherence_bound(problem)
    if isinstance(bound, UnboundedFamily):
        return IncoherentFamily(ray=bound.ray)
    return CommonExtension(mu=bound.mu)


def verify_extension_charge(problem: ExtensionProblem, mu: dict) -> list[str]:
    failures = []
    if set(mu) != set(problem.cells):
        return ["charge is not defined on every cell of Omega x T"]
    if any(v < 0 for v in mu.values()):
        failures.append("charge has a negative cell")
    for k, member in enumerate(problem.family):
        for i, (h, value) in enumerate(zip(member.basis, member.values)):
            total = sum(
                (mu[(w, t)] * h.values[problem.omega.index(w)] for w, t in problem.cells if t in member.tau),
                ZERO,
            )
            if total != value:
                failures.append(f"charge misses phi of member {k} on basis element {i}")
    return failures


def verify_common_extension(
    problem: ExtensionProblem, result: Union[CommonExtension, IncoherentFamily]
) -> list[str]:
    if isinstance(result, IncoherentFamily):
        return verify_bound(problem, UnboundedFamily(ray=result.ray))
    return verify_extension_charge(problem, result.mu)


# === Monotonicity along inclusions ===

@dataclass(frozen=True)
class Comparison:
    tau_index: int
    upsilon_index: int
    basis_index: int
    nonnegative: bool
    phi_tau: Fraction
    phi_upsilon: Fraction

    @property
    def holds(self) -> Optional[bool]:
        """phi_upsilon(b) >= phi_tau(b); only asserted for nonnegative b"""
        if not self.nonnegative:
            return None
        return self.phi_upsilon >= self.phi_tau


@dataclass(frozen=True)
class MonotonicityReport:
    coherent: bool
    comparisons: tuple[Comparison, ...]

    @property
    def violations(self) -> tuple[Comparison, ...]:
        return tuple(c for c in self.comparisons if c.holds is False)


def restriction_monotonicity(
    problem: ExtensionProblem,
    pairs: Sequence[tuple[int, int]],
    bound: Optional[Union[CoherenceBound, UnboundedFamily]] = None,
) -> MonotonicityReport:
    comparisons = []
    for tau_index, upsilon_index in pairs:
        for index in (tau_index, upsilon_index):
            if not 0 <= index < len(problem.family):
                raise InputError(f"family index {index} out of range")
        tau = problem.family[tau_index]
        upsilon = problem.family[upsilon_index]
        if not tau.tau <= upsilon.tau:
            raise InputError(f"member {tau_index} is not contained in member {upsilon_index}")
        for i, b in enumerate(tau.basis):
            match = next((j for j, h in enumerate(upsilon.basis) if h == b), None)
            if match is None:
                raise InputError(
                    f"basis element {i} of member {tau_index} is not shared by member {upsilon_index}"
                )
            comparisons.append(
                Comparison(
                    tau_index=tau_index,
                    upsilon_index=upsilon_index,
                    basis_index=i,
                    nonnegative=b.is_nonnegative(),
                    phi_tau=tau.values[i],
                    phi_upsilon=upsilon.values[match],
                )
            )
    coherent = isinstance(bound or coherence_bound(problem), CoherenceBound)
    report = MonotonicityReport(coherent=coherent, comparisons=tuple(comparisons))
    if coherent and report.violations:
        raise InvariantError("a coherent family violates monotonicity along an inclusion")
    return report
