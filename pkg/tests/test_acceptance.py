"""Seeded sweeps over random instances; every certificate is re-verified exactly"""
from fractions import Fraction
from itertools import combinations, permutations, product

import pytest

from builders import (
    random_anchor_set, random_cone, random_function, random_functional, random_payoff, random_probability,
    rational, states,
)
from oracles import extension_feasible
from src.core import coherence, concave, lp, tailmodel
from src.core.eventually_affine import absolute, constant, negative_part, positive_part, truncate
from src.core.models import MINUS_INFINITY, PartialAssignment, PayoffFn, Separating, SureWin
from src.core.tailmodel import Domain

F = Fraction


def separating_cones(rng, count, **kwargs):
    found = 0
    while found < count:
        cone = random_cone(rng, **kwargs)
        if isinstance(coherence.detect_sure_win(cone), Separating):
            found += 1
            yield cone


def test_sure_win_dichotomy(rng):
    for _ in range(1000):
        cone = random_cone(rng)
        verdict = coherence.detect_sure_win(cone)
        assert coherence.verify_verdict(cone, verdict) == []
        uniform = [F(1, cone.scenario.n)] * cone.scenario.n
        if isinstance(verdict, SureWin):
            # every probability prices the winning combination at >= 1, so none separates
            k = cone.element(verdict.coefficients)
            assert sum(w * v for w, v in zip(uniform, k.values)) >= 1
        else:
            assert all(verdict.m.expectation(g) <= 0 for g in cone.generators)


def test_price_equals_best_separating_vertex(rng):
    for cone in separating_cones(rng, 500, max_states=4, max_generators=5):
        vertices = coherence.separating_vertices(cone)
        for _ in range(3):
            f = random_payoff(rng, cone.scenario.n)
            price = coherence.superhedge_price(cone, f)
            best = max(sum(w * v for w, v in zip(vertex, f.values)) for vertex in vertices)
            assert price.value == best
            assert coherence.verify_price(cone, f, price) == []


def test_price_predicates_agree(rng):
    for _ in range(500):
        cone = random_cone(rng)
        zero = coherence.superhedge_price(cone, cone.scenario.constant(0)).value
        one = coherence.superhedge_price(cone, cone.scenario.constant(1)).value
        no_sure_win = isinstance(coherence.detect_sure_win(cone), Separating)
        assert zero in (F(0), MINUS_INFINITY)
        assert (zero == 0) == (one == 1) == no_sure_win


def test_price_functional_laws(rng):
    for cone in separating_cones(rng, 500, max_states=4, max_generators=5):
        n = cone.scenario.n
        f, g = random_payoff(rng, n), random_payoff(rng, n)
        c = rational(rng)
        t = abs(rational(rng))
        pi = lambda h: coherence.superhedge_price(cone, h).value
        assert pi(f + g) <= pi(f) + pi(g)
        assert pi(f.shift(c)) == pi(f) + c
        assert pi(f.scale(t)) == t * pi(f)
        bump = PayoffFn(tuple(abs(v) for v in g.values))
        assert pi(f) <= pi(f + bump)
        assert all(pi(generator) <= 0 for generator in cone.generators)


VALUES = (F(0), F(1, 4), F(1, 2), F(3, 4), F(1), F(6, 5))


def _assignments(n):
    """Every assignment of up to four events, one representative per relabeling of the states"""
    events = [frozenset(s) for k in range(1, n + 1) for s in combinations(range(n), k)]
    relabelings = list(permutations(range(n)))

    def key(chosen, values, relabel):
        return tuple(sorted((tuple(sorted(relabel[i] for i in e)), v) for e, v in zip(chosen, values)))

    for size in range(1, min(4, len(events)) + 1):
        for chosen in combinations(events, size):
            for values in product(VALUES, repeat=size):
                own = key(chosen, values, relabelings[0])
                if all(own <= key(chosen, values, p) for p in relabelings[1:]):
                    yield chosen, values


def _check_assignment(n, events, values):
    scenario = states(n)
    entries = tuple((frozenset(f"s{i}" for i in event), v) for event, v in zip(events, values))
    assignment = PartialAssignment(scenario, entries)
    result = coherence.extend_to_probability(assignment)
    assert coherence.verify_extension(assignment, result) == []
    assert result.extends == extension_feasible(n, [frozenset(e) for e in events], values)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_extension_matches_vertex_oracle_exhaustively(n, monkeypatch):
    # verify_extension re-checks every result
    monkeypatch.setattr(lp.settings, "VERIFY_SOLUTIONS", False)
    for chosen, values in _assignments(n):
        _check_assignment(n, chosen, values)


def constant_payoff(n):
    return PayoffFn((F(1),) * n)


def test_shapley_witness_attains_gamma(rng):
    for _ in range(200):
        n = int(rng.integers(1, 5))
        anchors = random_anchor_set(rng, n)[0]
        size = int(rng.integers(1, len(anchors.anchors) + 1))
        subset = tuple(sorted(int(i) for i in rng.choice(len(anchors.anchors), size=size, replace=False)))
        result = concave.shapley_witness(anchors, subset)
        assert isinstance(result, concave.ShapleyWitness)
        values = [result.witness.expectation(anchors.anchors[s][0]) for s in subset]
        assert max(values) == result.gamma_c
        assert concave.verify_shapley(anchors, subset, result) == []


def test_inconsistent_anchor_sets_are_incoherent(rng):
    for _ in range(50):
        n = int(rng.integers(1, 5))
        anchors = random_anchor_set(rng, n)[0]
        f = random_payoff(rng, n)
        raised = anchors.anchors + ((f, max(f.values) + F(int(rng.integers(1, 4)), 2)),)
        bad = concave.AnchorSet(anchors.scenario, raised)
        result = concave.shapley_witness(bad, (0,))
        assert isinstance(result, concave.Incoherent)
        assert concave.verify_shapley(bad, (0,), result) == []


def _random_problem(rng):
    n = int(rng.integers(1, 4))
    labels = [f"t{i}" for i in range(int(rng.integers(1, 4)))]
    p = random_probability(rng, n)
    b = PayoffFn(tuple(abs(rational(rng, -4, 4, 2)) + F(1, 2) for _ in range(n)))
    root = concave.FamilyMember(
        frozenset(labels), (constant_payoff(n), b), (F(1), sum(w * v for w, v in zip(p, b.values)))
    )
    members = [root]
    for _ in range(int(rng.integers(1, 3))):
        size = int(rng.integers(1, len(labels) + 1))
        tau = frozenset(labels[int(i)] for i in rng.choice(len(labels), size=size, replace=False))
        members.append(concave.FamilyMember(tau, (b,), (abs(rational(rng, -6, 6, 3)),)))
    return concave.ExtensionProblem(states(n), tuple(labels), tuple(members))


def test_bound_and_extension_agree(rng):
    for _ in range(200):
        problem = _random_problem(rng)
        bound = concave.coherence_bound(problem)
        extension = concave.common_extension(problem)
        assert isinstance(bound, concave.CoherenceBound) == isinstance(extension, concave.CommonExtension)
        assert concave.verify_bound(problem, bound) == []
        assert concave.verify_common_extension(problem, extension) == []
        pairs = [(k, 0) for k in range(1, len(problem.family))]
        report = concave.restriction_monotonicity(problem, pairs)
        if report.coherent:
            assert all(c.holds for c in report.comparisons)


def test_riesz_identity_and_truncations(rng):
    for _ in range(300):
        phi = random_functional(rng)
        f = random_function(rng, bounded=phi.domain is Domain.EC)
        d = tailmodel.riesz_decompose(phi)
        assert phi(f) == d.phi1 * tailmodel.integrate_strict(d.m, f) + d.perp(f)
        assert d.perp(constant(1)) == 0
        assert d.perp(absolute(f)) >= 0
        limits = tailmodel.truncation_limits(phi, f)
        assert limits.residual == d.perp(f)
        for n in (limits.stabilization_index, limits.stabilization_index + 5):
            truncated = phi(truncate(positive_part(f), n)) - phi(truncate(negative_part(f), n))
            assert truncated == limits.bounded_part


def test_daniell_dichotomy(rng):
    for _ in range(300):
        phi = random_functional(rng)
        result = tailmodel.daniell_check(phi)
        continuous = phi.limit_charge == 0 and phi.slope_charge == 0
        assert isinstance(result, tailmodel.Daniell) == continuous
        assert tailmodel.verify_daniell(phi, result, window=10) == []
