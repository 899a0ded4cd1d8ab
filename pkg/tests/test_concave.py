from fractions import Fraction

import pytest

from builders import random_anchor_set, random_payoff, rational, states
from src.core import concave
from src.core.errors import InputError
from src.core.models import MINUS_INFINITY, PLUS_INFINITY, PayoffFn

F = Fraction


def anchors(*pairs, n=2, membership_only=False):
    return concave.AnchorSet(states(n), tuple((PayoffFn(f), F(g)) for f, g in pairs), membership_only)


STANDARD = anchors(((1, 1), 1), ((1, 0), F(2, 5)), ((0, 1), F(2, 5)))


class TestEvalGenerated:

    def test_constant_anchor_only(self):
        result = concave.eval_generated(anchors(((1, 1), 1)), PayoffFn((2, 3)))
        assert result.value == 2

    def test_constant_cannot_help(self):
        result = concave.eval_generated(STANDARD, PayoffFn((1, 0)))
        assert result.value == F(2, 5)
        assert concave.verify_generated(STANDARD, PayoffFn((1, 0)), result) == []

    def test_constant_beats_mixing(self):
        result = concave.eval_generated(STANDARD, PayoffFn((F(1, 2), F(1, 2))))
        assert result.value == F(1, 2)
        assert concave.core_membership(STANDARD, result.core).member

    def test_additive_against_constants(self):
        f = PayoffFn((F(3, 4), F(-1, 3)))
        base = concave.eval_generated(STANDARD, f).value
        for t in (F(-2), F(1, 3), F(5)):
            assert concave.eval_generated(STANDARD, f.shift(t)).value == base + t

    def test_membership_only_can_be_minus_infinity(self):
        only = anchors(((1, 0), 1), membership_only=True)
        assert concave.eval_generated(only, PayoffFn((-1, 0))).value is MINUS_INFINITY

    def test_unbounded_anchor_set(self):
        greedy = anchors(((1, 1), 1), ((0, 0), 1))
        assert concave.eval_generated(greedy, PayoffFn((0, 0))).value is PLUS_INFINITY

    def test_missing_normalization(self):
        with pytest.raises(InputError):
            anchors(((1, 0), 1))


class TestCoreMembership:

    def test_uniform_is_in_the_core(self):
        assert concave.core_membership(STANDARD, concave.CoreElement((F(1, 2), F(1, 2)))).member

    def test_dirac_violates_second_atom(self):
        result = concave.core_membership(STANDARD, concave.CoreElement((1, 0)))
        assert not result.member
        assert result.violated == 2

    def test_unnormalized_charge_is_rejected(self):
        result = concave.core_membership(STANDARD, concave.CoreElement((2, 2)))
        assert not result.member
        assert result.violated == 0
        # a scaled-up charge would otherwise undercut the integral
        assert concave.eval_generated(STANDARD, PayoffFn((-1, -1))).value == -1

    def test_empty_membership_only_set(self):
        empty = concave.AnchorSet(states(2), (), membership_only=True)
        assert concave.core_membership(empty, concave.CoreElement((3, 0))).member


class TestShapleyWitness:

    def test_midpoint_through_constant(self):
        result = concave.shapley_witness(STANDARD, (1, 2))
        assert result.gamma_c == F(1, 2)
        assert result.witness.weights == (F(1, 2), F(1, 2))
        assert concave.verify_shapley(STANDARD, (1, 2), result) == []

    def test_constant_anchor_saturates(self):
        result = concave.shapley_witness(STANDARD, (0,))
        assert result.gamma_c == 1
        assert sum(result.witness.weights) == 1

    def test_inconsistent_value(self):
        bad = anchors(((1, 1), 1), ((1, 0), 2), ((0, 1), F(2, 5)))
        result = concave.shapley_witness(bad, (1, 2))
        assert isinstance(result, concave.Incoherent)
        assert result.sure_win.coefficients == (0, 1, 0)
        assert concave.verify_shapley(bad, (1, 2), result) == []

    def test_empty_subset(self):
        with pytest.raises(InputError):
            concave.shapley_witness(STANDARD, ())


def member(tau, basis, values):
    return concave.FamilyMember(frozenset(tau), tuple(PayoffFn(b) for b in basis), tuple(values))


def problem(n, base, *members):
    return concave.ExtensionProblem(states(n), tuple(base), tuple(members))


class TestCommonExtension:

    def test_single_member_bound(self):
        p = problem(2, ["t"], member(["t"], [(1, 1)], [1]))
        bound = concave.coherence_bound(p)
        assert bound.bound == 1
        extension = concave.common_extension(p)
        assert extension.mass() == 1
        assert concave.verify_common_extension(p, extension) == []

    def test_two_members(self):
        p = problem(2, ["t1", "t2"], member(["t1", "t2"], [(1, 1)], [1]), member(["t1"], [(1, -1)], [F(1, 2)]))
        bound = concave.coherence_bound(p)
        assert bound.bound == 1
        assert concave.verify_bound(p, bound) == []
        extension = concave.common_extension(p)
        assert extension.mu[("s0", "t1")] - extension.mu[("s1", "t1")] == F(1, 2)

    def test_unbounded_family(self):
        p = problem(2, ["t1", "t2"], member(["t1", "t2"], [(1, 1)], [1]), member(["t1"], [(0, -1)], [1]))
        bound = concave.coherence_bound(p)
        assert isinstance(bound, concave.UnboundedFamily)
        assert concave.verify_bound(p, bound) == []
        assert isinstance(concave.common_extension(p), concave.IncoherentFamily)

    def test_root_member_required(self):
        with pytest.raises(InputError):
            problem(2, ["t1", "t2"], member(["t1"], [(1, 1)], [1]))


class TestRestrictionMonotonicity:

    def test_sub_mass_below_total(self):
        p = problem(1, ["t1", "t2"], member(["t1"], [(1,)], [F(3, 10)]), member(["t1", "t2"], [(1,)], [1]))
        report = concave.restriction_monotonicity(p, [(0, 1)])
        assert report.coherent
        assert report.comparisons[0].holds
        assert report.violations == ()

    def test_sub_mass_above_total_is_incoherent(self):
        p = problem(1, ["t1", "t2"], member(["t1"], [(1,)], [2]), member(["t1", "t2"], [(1,)], [1]))
        report = concave.restriction_monotonicity(p, [(0, 1)])
        assert not report.coherent
        assert report.comparisons[0].holds is False

    def test_reflexive_pair(self):
        p = problem(1, ["t1", "t2"], member(["t1"], [(1,)], [F(3, 10)]), member(["t1", "t2"], [(1,)], [1]))
        report = concave.restriction_monotonicity(p, [(0, 0)])
        assert report.comparisons[0].phi_tau == report.comparisons[0].phi_upsilon

    def test_inclusion_must_hold(self):
        p = problem(1, ["t1", "t2"], member(["t1"], [(1,)], [F(3, 10)]), member(["t1", "t2"], [(1,)], [1]))
        with pytest.raises(InputError):
            concave.restriction_monotonicity(p, [(1, 0)])


def test_generated_integral_laws(rng):
    for _ in range(200):
        n = int(rng.integers(1, 5))
        anchor_set, hidden = random_anchor_set(rng, n)
        gamma = lambda h: concave.eval_generated(anchor_set, h).value
        f, g = random_payoff(rng, n), random_payoff(rng, n)
        bump = PayoffFn(tuple(abs(v) for v in g.values))
        c = rational(rng)
        t = abs(rational(rng)) + F(1, 2)

        assert gamma(f) <= gamma(f + bump)
        assert gamma(f + g) >= gamma(f) + gamma(g)
        assert gamma(f.scale(t)) == t * gamma(f)
        assert gamma(f.shift(c)) == gamma(f) + c

        cores = [concave.CoreElement(hidden), concave.eval_generated(anchor_set, g).core]
        for core in cores:
            assert concave.core_membership(anchor_set, core).member
            assert gamma(f) <= core.integral(f)
