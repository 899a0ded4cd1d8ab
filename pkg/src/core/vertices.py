"""Exact vertex enumeration for polytopes {x >= 0 : A x = b}

Starting from a phase-one basis, every feasible basis reachable by a
single pivot is visited breadth first. A pivot on a nonzero entry is
taken whenever the new basic solution stays nonnegative; this covers both
ratio-test moves between adjacent vertices and degenerate basis exchanges
at one vertex, so the search reaches every feasible basis.
"""
import logging
from collections import deque
from fractions import Fraction
from typing import Sequence

from .errors import InvariantError
from .linalg import rref
from .lp import feasible_basis

logger = logging.getLogger(__name__)


def _basic_solution(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], basis: Sequence[int]
) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Tableau rows B^-1 A and B^-1 b for the given basis (in basis order)"""
    width = len(rows[0])
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    ordered = sorted(basis)
    # Columns of the basis first so that rref pivots exactly on them
    permutation = ordered + [j for j in range(width) if j not in set(ordered)] + [width]
    permuted = [[row[j] for j in permutation] for row in augmented]
    reduced, pivots = rref(permuted)
    if pivots[: len(ordered)] != list(range(len(ordered))):
        raise InvariantError(f"basis {ordered} is singular")
    tableau = [[Fraction(0)] * width for _ in ordered]
    values = [Fraction(0)] * len(ordered)
    for r, pivot in enumerate(pivots[: len(ordered)]):
        # reduced columns are in permuted order; permutation[k] is the original column
        for k, v in enumerate(reduced[r][:-1]):
            tableau[pivot][permutation[k]] = v
        values[pivot] = reduced[r][-1]
    position = {col: i for i, col in enumerate(ordered)}
    return [tableau[position[c]] for c in basis], [values[position[c]] for c in basis]


def enumerate_vertices(
    a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> list[tuple[Fraction, ...]]:
    """All vertices of a bounded polytope in standard form, ascending lexicographic order"""
    start = feasible_basis(a, b)
    if start is None:
        return []
    rows, rhs, basis = start
    width = len(a[0])
    if not rows:
        return [tuple(Fraction(0) for _ in range(width))]

    seen = {frozenset(basis)}
    queue = deque([basis])
    vertices = set()
    while queue:
        current = queue.popleft()
        tableau, values = _basic_solution(rows, rhs, current)
        point = [Fraction(0)] * width
        for col, v in zip(current, values):
            point[col] = v
        vertices.add(tuple(point))

        basic = set(current)
        for entering in range(width):
            if entering in basic:
                continue
            for r, row in enumerate(tableau):
                coef = row[entering]
                if coef == 0:
                    continue
                step = values[r] / coef
                if step < 0:
                    continue
                if any(values[i] - tableau[i][entering] * step < 0 for i in range(len(values))):
                    continue
                neighbour = list(current)
                neighbour[r] = entering
                key = frozenset(neighbour)
                if key not in seen:
                    seen.add(key)
                    queue.append(neighbour)

    logger.debug(f"visited {len(seen)} feasible bases, {len(vertices)} vertices")
    return sorted(vertices)
