"""Exact rational two-phase simplex with verified certificates

Every result carries a certificate that ``verify_result`` can re-check
against the original program with fresh arithmetic:

* ``Optimal``    primal point, dual multipliers and a zero duality gap
* ``Infeasible`` Farkas multipliers aggregating the rows into 0 <= y.b < 0
* ``Unbounded``  a feasible point and an improving ray

Pivoting follows Bland's rule (smallest eligible index enters, ties in the
ratio test leave by smallest basic index), so runs are deterministic and
terminate on degenerate programs.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from ..config.settings import settings
from .errors import DimensionMismatchError, InputError, InvariantError

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


class Sense(str, Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Bound(str, Enum):
    NONNEGATIVE = "nonnegative"
    FREE = "free"


@dataclass(frozen=True)
class Row:
    coefficients: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))
        object.__setattr__(self, "relation", Relation(self.relation))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def activity(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coefficients, x)), ZERO)


@dataclass(frozen=True)
class LinearProgram:
    sense: Sense
    objective: tuple[Fraction, ...]
    rows: tuple[Row, ...]
    bounds: tuple[Bound, ...] = ()

    def __post_init__(self):
        objective = tuple(Fraction(c) for c in self.objective)
        if not objective:
            raise InputError("a linear program needs at least one variable")
        bounds = tuple(Bound(b) for b in self.bounds) or (Bound.NONNEGATIVE,) * len(objective)
        if len(bounds) != len(objective):
            raise DimensionMismatchError(
                f"{len(bounds)} variable bounds for {len(objective)} variables"
            )
        for i, row in enumerate(self.rows):
            if len(row.coefficients) != len(objective):
                raise DimensionMismatchError(
                    f"row {i} has {len(row.coefficients)} coefficients, expected {len(objective)}"
                )
        object.__setattr__(self, "sense", Sense(self.sense))
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "bounds", bounds)

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), ZERO)


@dataclass(frozen=True)
class Optimal:
    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    value: Fraction


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple[Fraction, ...]


@dataclass(frozen=True)
class Unbounded:
    feasible: tuple[Fraction, ...]
    ray: tuple[Fraction, ...]


LPResult = Union[Optimal, Infeasible, Unbounded]


class _Tableau:
    """Dense tableau B^-1 [A | I | b] over a standard-form system A z = b, z >= 0, b >= 0

    One artificial column per row is kept to the right of the structural
    columns; its block always holds B^-1, which is where duals are read.
    """

    def __init__(self, a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
        self.m = len(a)
        self.n = len(a[0]) if a else 0
        self.rows: list[list[Fraction]] = []
        for i, (row, rhs) in enumerate(zip(a, b)):
            artificial = [Fraction(int(i == k)) for k in range(self.m)]
            self.rows.append([Fraction(x) for x in row] + artificial + [Fraction(rhs)])
        self.basis = [self.n + i for i in range(self.m)]
        self.pivots = 0

    @property
    def rhs(self) -> int:
        return self.n + self.m

    def is_artificial(self, col: int) -> bool:
        return col >= self.n

    def pivot(self, r: int, col: int) -> None:
        self.pivots += 1
        if self.pivots > settings.MAX_PIVOTS:
            raise InvariantError(f"simplex exceeded {settings.MAX_PIVOTS} pivots")
        pivot_row = self.rows[r]
        scale = pivot_row[col]
        pivot_row = [x / scale for x in pivot_row]
        self.rows[r] = pivot_row
        for i, row in enumerate(self.rows):
            if i != r and row[col] != 0:
                factor = row[col]
                self.rows[i] = [x - factor * p for x, p in zip(row, pivot_row)]
        self.basis[r] = col

    def reduced_cost(self, cost: Sequence[Fraction], col: int) -> Fraction:
        return cost[col] - sum(
            (cost[self.basis[r]] * self.rows[r][col] for r in range(self.m)), ZERO
        )

    def optimize(self, cost: Sequence[Fraction], allowed: int) -> Optional[int]:
        """Maximize cost.z with columns < allowed eligible to enter

        Returns None at optimality, otherwise the entering column whose
        ratio test found no blocking row.
        """
        while True:
            basic = set(self.basis)
            entering = next(
                (j for j in range(allowed) if j not in basic and self.reduced_cost(cost, j) > 0),
                None,
            )
            if entering is None:
                return None
            leaving = None
            best = None
            for r in range(self.m):
                coef = self.rows[r][entering]
                if coef > 0:
                    ratio = self.rows[r][self.rhs] / coef
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[r] < self.basis[leaving])
                    ):
                        best, leaving = ratio, r
            if leaving is None:
                return entering
            self.pivot(leaving, entering)

    def basic_values(self) -> list[Fraction]:
        z = [ZERO] * (self.n + self.m)
        for r, col in enumerate(self.basis):
            z[col] = self.rows[r][self.rhs]
        return z

    def duals(self, cost: Sequence[Fraction]) -> list[Fraction]:
        """c_B B^-1, read from the artificial block"""
        return [
            sum((cost[self.basis[r]] * self.rows[r][self.n + i] for r in range(self.m)), ZERO)
            for i in range(self.m)
        ]

    def drive_out_artificials(self) -> list[int]:
        """Pivot zero-level artificials out of the basis; return redundant rows"""
        redundant = []
        for r in range(self.m):
            if not self.is_artificial(self.basis[r]):
                continue
            col = next((j for j in range(self.n) if self.rows[r][j] != 0), None)
            if col is None:
                redundant.append(r)
            else:
                self.pivot(r, col)
        return redundant

    def phase_one(self) -> Fraction:
        """Minimize the sum of artificials; returns the residual infeasibility"""
        cost = [ZERO] * self.n + [Fraction(-1)] * self.m
        self.optimize(cost, self.n)
        return sum(
            (self.rows[r][self.rhs] for r in range(self.m) if self.is_artificial(self.basis[r])),
            ZERO,
        )


@dataclass(frozen=True)
class _StandardForm:
    """Column map from the standard form back to the original variables"""
    a: list[list[Fraction]]
    b: list[Fraction]
    signs: list[int]
    columns: list[tuple[int, int]]


def _standardize(lp: LinearProgram) -> _StandardForm:
    columns: list[tuple[int, int]] = []
    for j, bound in enumerate(lp.bounds):
        columns.append((j, 1))
        if bound is Bound.FREE:
            columns.append((j, -1))
    slack_of = {}
    for i, row in enumerate(lp.rows):
        if row.relation is not Relation.EQ:
            slack_of[i] = len(columns) + len(slack_of)

    a, b, signs = [], [], []
    for i, row in enumerate(lp.rows):
        sign = -1 if row.rhs < 0 else 1
        entries = [sign * row.coefficients[j] * s for j, s in columns] + [ZERO] * len(slack_of)
        if i in slack_of:
            entries[slack_of[i]] = Fraction(sign if row.relation is Relation.LE else -sign)
        a.append(entries)
        b.append(sign * row.rhs)
        signs.append(sign)
    return _StandardForm(a=a, b=b, signs=signs, columns=columns + [(-1, 0)] * len(slack_of))


def _to_original(form: _StandardForm, z: Sequence[Fraction], size: int) -> tuple[Fraction, ...]:
    x = [ZERO] * size
    for col, (j, s) in enumerate(form.columns):
        if j >= 0:
            x[j] += s * z[col]
    return tuple(x)


def solve(lp: LinearProgram) -> LPResult:
    """Solve a linear program exactly; the returned certificate is verified"""
    form = _standardize(lp)
    n = len(form.columns)
    size = lp.num_variables
    direction = 1 if lp.sense is Sense.MAXIMIZE else -1

    if not lp.rows:
        result = _solve_unconstrained(lp, direction)
    else:
        tableau = _Tableau(form.a, form.b)
        residual = tableau.phase_one()
        if residual > 0:
            phase_one_cost = [ZERO] * n + [Fraction(-1)] * tableau.m
            u = tableau.duals(phase_one_cost)
            farkas = tuple(sign * ui for sign, ui in zip(form.signs, u))
            logger.debug(f"infeasible after {tableau.pivots} pivots")
            result = Infeasible(farkas=farkas)
        else:
            tableau.drive_out_artificials()
            cost = [ZERO] * (n + tableau.m)
            for col, (j, s) in enumerate(form.columns):
                if j >= 0:
                    cost[col] = direction * s * lp.objective[j]
            entering = tableau.optimize(cost, n)
            z = tableau.basic_values()
            primal = _to_original(form, z, size)
            if entering is None:
                y = tableau.duals(cost)
                dual = tuple(direction * sign * yi for sign, yi in zip(form.signs, y))
                result = Optimal(primal=primal, dual=dual, value=lp.objective_value(primal))
            else:
                d = [ZERO] * (n + tableau.m)
                d[entering] = Fraction(1)
                for r, col in enumerate(tableau.basis):
                    d[col] = -tableau.rows[r][entering]
                result = Unbounded(feasible=primal, ray=_to_original(form, d, size))
            logger.debug(f"{type(result).__name__} after {tableau.pivots} pivots")

    if settings.VERIFY_SOLUTIONS:
        failures = verify_result(lp, result)
        if failures:
            raise InvariantError(f"certificate failed verification: {'; '.join(failures)}")
    return result


def _solve_unconstrained(lp: LinearProgram, direction: int) -> LPResult:
    """No rows: optimal at zero unless some variable improves the objective freely"""
    zero = tuple(ZERO for _ in lp.objective)
    for j, (c, bound) in enumerate(zip(lp.objective, lp.bounds)):
        gain = direction * c
        if gain > 0 or (gain < 0 and bound is Bound.FREE):
            ray = [ZERO] * lp.num_variables
            ray[j] = Fraction(1 if gain > 0 else -1)
            return Unbounded(feasible=zero, ray=tuple(ray))
    return Optimal(primal=zero, dual=(), value=ZERO)


def feasible_basis(
    a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> Optional[tuple[list[list[Fraction]], list[Fraction], list[int]]]:
    """Phase one on {z >= 0 : a z = b}

    Returns the nonredundant rows (sign-normalized so b >= 0) and a
    feasible basis of structural columns, or None when the system is
    infeasible.
    """
    signs = [-1 if rhs < 0 else 1 for rhs in b]
    a_std = [[s * Fraction(x) for x in row] for s, row in zip(signs, a)]
    b_std = [s * Fraction(rhs) for s, rhs in zip(signs, b)]
    tableau = _Tableau(a_std, b_std)
    if tableau.phase_one() > 0:
        return None
    redundant = set(tableau.drive_out_artificials())
    keep = [r for r in range(tableau.m) if r not in redundant]
    rows = [tableau.rows[r][: tableau.n] for r in keep]
    rhs = [tableau.rows[r][tableau.rhs] for r in keep]
    basis = [tableau.basis[r] for r in keep]
    return rows, rhs, basis


def _sign_ok(value: Fraction, relation: Relation, flip: int = 1) -> bool:
    """Sign pattern of a multiplier under the maximize convention"""
    value = flip * value
    if relation is Relation.LE:
        return value >= 0
    if relation is Relation.GE:
        return value <= 0
    return True


def _holds(lhs: Fraction, relation: Relation, rhs: Fraction) -> bool:
    if relation is Relation.LE:
        return lhs <= rhs
    if relation is Relation.GE:
        return lhs >= rhs
    return lhs == rhs


def _primal_failures(lp: LinearProgram, x: Sequence[Fraction], label: str) -> list[str]:
    failures = []
    if len(x) != lp.num_variables:
        return [f"{label} has {len(x)} entries, expected {lp.num_variables}"]
    for j, (v, bound) in enumerate(zip(x, lp.bounds)):
        if bound is Bound.NONNEGATIVE and v < 0:
            failures.append(f"{label}[{j}] = {v} violates nonnegativity")
    for i, row in enumerate(lp.rows):
        if not _holds(row.activity(x), row.relation, row.rhs):
            failures.append(f"{label} violates row {i}")
    return failures


def _aggregate(lp: LinearProgram, y: Sequence[Fraction]) -> list[Fraction]:
    return [
        sum((yi * row.coefficients[j] for yi, row in zip(y, lp.rows)), ZERO)
        for j in range(lp.num_variables)
    ]


def verify_result(lp: LinearProgram, result: LPResult) -> list[str]:
    """Re-check a certificate against the program; an empty list means verified"""
    failures: list[str] = []
    flip = 1 if lp.sense is Sense.MAXIMIZE else -1

    if isinstance(result, Optimal):
        failures += _primal_failures(lp, result.primal, "primal")
        if len(result.dual) != len(lp.rows):
            return failures + [f"dual has {len(result.dual)} entries, expected {len(lp.rows)}"]
        for i, (yi, row) in enumerate(zip(result.dual, lp.rows)):
            if not _sign_ok(yi, row.relation, flip):
                failures.append(f"dual[{i}] = {yi} has the wrong sign")
        aggregated = _aggregate(lp, result.dual)
        for j, (aj, cj, bound) in enumerate(zip(aggregated, lp.objective, lp.bounds)):
            if bound is Bound.FREE and aj != cj:
                failures.append(f"dual constraint {j} must be tight")
            elif bound is Bound.NONNEGATIVE and flip * (aj - cj) < 0:
                failures.append(f"dual constraint {j} is violated")
        dual_value = sum((yi * row.rhs for yi, row in zip(result.dual, lp.rows)), ZERO)
        primal_value = lp.objective_value(result.primal)
        if not (primal_value == dual_value == result.value):
            failures.append(
                f"duality gap: primal {primal_value}, dual {dual_value}, reported {result.value}"
            )

    elif isinstance(result, Infeasible):
        y = result.farkas
        if len(y) != len(lp.rows):
            return [f"farkas has {len(y)} entries, expected {len(lp.rows)}"]
        for i, (yi, row) in enumerate(zip(y, lp.rows)):
            if not _sign_ok(yi, row.relation):
                failures.append(f"farkas[{i}] = {yi} has the wrong sign")
        for j, (aj, bound) in enumerate(zip(_aggregate(lp, y), lp.bounds)):
            if bound is Bound.FREE and aj != 0:
                failures.append(f"farkas aggregate {j} must vanish on a free variable")
            elif aj < 0:
                failures.append(f"farkas aggregate {j} is negative")
        if sum((yi * row.rhs for yi, row in zip(y, lp.rows)), ZERO) >= 0:
            failures.append("farkas combination does not reach a contradiction")

    elif isinstance(result, Unbounded):
        failures += _primal_failures(lp, result.feasible, "feasible point")
        d = result.ray
        if len(d) != lp.num_variables:
            return failures + [f"ray has {len(d)} entries, expected {lp.num_variables}"]
        for j, (v, bound) in enumerate(zip(d, lp.bounds)):
            if bound is Bound.NONNEGATIVE and v < 0:
                failures.append(f"ray[{j}] leaves the nonnegative orthant")
        for i, row in enumerate(lp.rows):
            if not _holds(row.activity(d), row.relation, ZERO):
                failures.append(f"ray breaks row {i}")
        if flip * lp.objective_value(d) <= 0:
            failures.append("ray does not improve the objective")

    else:
        failures.append(f"unknown result type {type(result).__name__}")
    return failures
