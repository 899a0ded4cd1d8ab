from fractions import Fraction

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from builders import rational, small_rationals
from oracles import basic_feasible_points
from src.core import lp
from src.core.errors import DimensionMismatchError, InputError
from src.core.vertices import enumerate_vertices

F = Fraction


def test_single_binding_row_is_optimal():
    program = lp.LinearProgram(lp.Sense.MAXIMIZE, (1,), (lp.Row((1,), lp.Relation.LE, 1),))
    result = lp.solve(program)
    assert isinstance(result, lp.Optimal)
    assert result.primal == (F(1),)
    assert result.value == 1
    assert result.dual == (F(1),)


def test_sign_contradiction_yields_farkas_multiplier():
    program = lp.LinearProgram(lp.Sense.MAXIMIZE, (1,), (lp.Row((1,), lp.Relation.LE, -1),))
    result = lp.solve(program)
    assert isinstance(result, lp.Infeasible)
    assert result.farkas == (F(1),)
    assert lp.verify_result(program, result) == []


def test_free_variable_without_rows_is_unbounded():
    program = lp.LinearProgram(lp.Sense.MAXIMIZE, (1,), (), (lp.Bound.FREE,))
    result = lp.solve(program)
    assert isinstance(result, lp.Unbounded)
    assert result.ray == (F(1),)


def test_minimize_free_variable_moves_down():
    program = lp.LinearProgram(lp.Sense.MINIMIZE, (1,), (lp.Row((1,), lp.Relation.GE, -3),), (lp.Bound.FREE,))
    result = lp.solve(program)
    assert isinstance(result, lp.Optimal)
    assert result.value == -3
    assert lp.verify_result(program, result) == []


def test_equality_rows_and_redundancy():
    rows = (
        lp.Row((1, 1, 0), lp.Relation.EQ, 1),
        lp.Row((2, 2, 0), lp.Relation.EQ, 2),
        lp.Row((0, 1, 1), lp.Relation.LE, F(1, 2)),
    )
    program = lp.LinearProgram(lp.Sense.MAXIMIZE, (0, 1, 0), rows)
    result = lp.solve(program)
    assert isinstance(result, lp.Optimal)
    assert result.value == F(1, 2)


def test_dimension_mismatch_is_an_input_error():
    with pytest.raises(DimensionMismatchError):
        lp.LinearProgram(lp.Sense.MAXIMIZE, (1, 2), (lp.Row((1,), lp.Relation.LE, 1),))
    with pytest.raises(InputError):
        lp.LinearProgram(lp.Sense.MAXIMIZE, (), ())


def test_verifier_rejects_a_tampered_certificate():
    program = lp.LinearProgram(lp.Sense.MAXIMIZE, (1,), (lp.Row((1,), lp.Relation.LE, 1),))
    result = lp.solve(program)
    tampered = lp.Optimal(primal=result.primal, dual=(F(2),), value=result.value)
    assert lp.verify_result(program, tampered)


def test_degenerate_program_terminates():
    # Beale's cycling example
    rows = (
        lp.Row((F(1, 4), -8, -1, 9), lp.Relation.LE, 0),
        lp.Row((F(1, 2), -12, F(-1, 2), 3), lp.Relation.LE, 0),
        lp.Row((0, 0, 1, 0), lp.Relation.LE, 1),
    )
    program = lp.LinearProgram(lp.Sense.MAXIMIZE, (F(3, 4), -20, F(1, 2), -6), rows)
    result = lp.solve(program)
    assert isinstance(result, lp.Optimal)
    assert result.value == F(5, 4)


relations = st.sampled_from(list(lp.Relation))


@st.composite
def programs(draw):
    width = draw(st.integers(1, 4))
    height = draw(st.integers(0, 4))
    rows = tuple(
        lp.Row(tuple(draw(small_rationals) for _ in range(width)), draw(relations), draw(small_rationals))
        for _ in range(height)
    )
    bounds = tuple(draw(st.sampled_from(list(lp.Bound))) for _ in range(width))
    sense = draw(st.sampled_from(list(lp.Sense)))
    return lp.LinearProgram(sense, tuple(draw(small_rationals) for _ in range(width)), rows, bounds)


@hsettings(max_examples=300, deadline=None)
@given(programs())
def test_every_outcome_carries_a_valid_certificate(program):
    assert lp.verify_result(program, lp.solve(program)) == []


def test_vertices_match_column_subset_oracle(rng):
    for _ in range(60):
        height = int(rng.integers(1, 4))
        width = int(rng.integers(height, 6))
        a = [[F(1)] * width] + [[rational(rng, -3, 3, 2) for _ in range(width)] for _ in range(height - 1)]
        b = [F(1)] + [rational(rng, -2, 2, 2) for _ in range(height - 1)]
        assert set(enumerate_vertices(a, b)) == basic_feasible_points(a, b)


def test_vertices_of_simplex_are_diracs():
    vertices = enumerate_vertices([[F(1)] * 3], [F(1)])
    assert vertices == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_vertices_with_mixed_sign_row():
    a = [[F(1)] * 4, [F(1), F(-3, 2), F(3), F(3)]]
    b = [F(1), F(1)]
    vertices = enumerate_vertices(a, b)
    assert set(vertices) == basic_feasible_points(a, b)
    assert (0, 0, 0, 0) not in vertices
    assert all(sum(v) == 1 for v in vertices)
