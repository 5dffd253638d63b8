"""
Presburger Service

Satisfiability and model checking for existential linear integer arithmetic
with divisibility.

Formulas are brought into negation normal form; `K dvd T` becomes T = K·q with
a fresh quotient q, its negation T = |K|·q + r with 1 <= r < |K|, and `!=` is
split two ways. Disjunctions are explored depth-first in textual order, which
visits the conjuncts of the disjunctive normal form in DNF order while pruning
every prefix whose rational relaxation is already infeasible. Each conjunct has
its equalities solved exactly over the integers and is then decided by branch
and bound over LP relaxations (HiGHS via scipy) inside the small-model box,
branching on the lowest-index fractional variable, floor branch first. A box
wider than PA_FLOAT_LIMIT is clamped; a search the clamp cut short reports
SolverLimitExceeded rather than UNSAT.
"""

from __future__ import annotations

import itertools
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog

from sfasat.core.config import settings
from sfasat.core.exceptions import MissingVariable, SolverLimitExceeded, UnsupportedTerm
from sfasat.core.logging import get_logger
from sfasat.models.presburger import (
    Add,
    And,
    Bottom,
    Const,
    Dvd,
    Eq,
    Exists,
    Formula,
    IntVar,
    Le,
    LinearExpr,
    Not,
    Or,
    Scale,
    Top,
    iter_nodes,
    linearize,
    variables,
)

logger = get_logger(__name__)

IntAssignment = Dict[str, int]

# values closer than this to an integer count as integral in the relaxation
INTEGRALITY_TOLERANCE = 1e-6

_FRESH_PREFIX = "#"


@dataclass(frozen=True)
class Row:
    """Σ coeffs·x + constant (= 0 when equality, <= 0 otherwise)."""

    coeffs: Tuple[Tuple[str, int], ...]
    constant: int
    equality: bool

    def holds(self, assignment: IntAssignment) -> bool:
        value = sum(c * assignment.get(v, 0) for v, c in self.coeffs) + self.constant
        return value == 0 if self.equality else value <= 0


@dataclass(frozen=True)
class _Conj:
    items: Tuple["_Node", ...]


@dataclass(frozen=True)
class _Disj:
    items: Tuple["_Node", ...]


@dataclass(frozen=True)
class _Const:
    value: bool


_Node = Union[Row, _Conj, _Disj, _Const]


def _row(expr: LinearExpr, equality: bool) -> _Node:
    if not expr.coeffs:
        holds = expr.constant == 0 if equality else expr.constant <= 0
        return _Const(holds)
    return Row(expr.coeffs, expr.constant, equality)


def _difference(left, right) -> LinearExpr:
    a, b = linearize(left), linearize(right)
    coeffs: Dict[str, int] = dict(a.coeffs)
    for v, c in b.coeffs:
        coeffs[v] = coeffs.get(v, 0) - c
    return LinearExpr(tuple((v, c) for v, c in coeffs.items() if c != 0), a.constant - b.constant)


def _shift(expr: LinearExpr, extra: Sequence[Tuple[str, int]], constant: int = 0) -> LinearExpr:
    coeffs = dict(expr.coeffs)
    for v, c in extra:
        coeffs[v] = coeffs.get(v, 0) + c
    return LinearExpr(tuple((v, c) for v, c in coeffs.items() if c != 0), expr.constant + constant)


def _negate(expr: LinearExpr) -> LinearExpr:
    return LinearExpr(tuple((v, -c) for v, c in expr.coeffs), -expr.constant)


class _Normalizer:
    """Negation normal form over linear rows, with fresh quotient variables."""

    def __init__(self) -> None:
        self._counter = itertools.count()
        self.fresh: List[str] = []

    def new_var(self, stem: str) -> str:
        name = f"{_FRESH_PREFIX}{stem}{next(self._counter)}"
        self.fresh.append(name)
        return name

    def convert(self, formula: Formula, positive: bool = True) -> _Node:
        if isinstance(formula, Top):
            return _Const(positive)
        if isinstance(formula, Bottom):
            return _Const(not positive)
        if isinstance(formula, Exists):
            return self.convert(formula.body, positive)
        if isinstance(formula, Not):
            return self.convert(formula.arg, not positive)
        if isinstance(formula, (And, Or)):
            items = tuple(self.convert(arg, positive) for arg in formula.args)
            conjunctive = isinstance(formula, And) == positive
            return _Conj(items) if conjunctive else _Disj(items)
        if isinstance(formula, Eq):
            diff = _difference(formula.left, formula.right)
            if positive:
                return _row(diff, True)
            return self._not_zero(diff)
        if isinstance(formula, Le):
            diff = _difference(formula.left, formula.right)
            if positive:
                return _row(diff, False)
            # left > right  <=>  right - left + 1 <= 0
            return _row(_shift(_negate(diff), (), 1), False)
        if isinstance(formula, Dvd):
            return self._divisibility(formula, positive)
        raise UnsupportedTerm(f"Not a Presburger formula: {type(formula).__name__}")

    def _not_zero(self, diff: LinearExpr) -> _Node:
        return _Disj((_row(_shift(diff, (), 1), False), _row(_shift(_negate(diff), (), 1), False)))

    def _divisibility(self, formula: Dvd, positive: bool) -> _Node:
        expr = linearize(formula.term)
        k = abs(formula.modulus)
        if k == 0:
            return _row(expr, True) if positive else self._not_zero(expr)
        if k == 1:
            return _Const(positive)
        quotient = self.new_var("q")
        if positive:
            return _row(_shift(expr, ((quotient, -k),)), True)
        remainder = self.new_var("r")
        return _Conj(
            (
                _row(_shift(expr, ((quotient, -k), (remainder, -1))), True),
                _row(LinearExpr(((remainder, -1),), 1), False),
                _row(LinearExpr(((remainder, 1),), -(k - 1)), False),
            )
        )


def _normalize_row(row: Row) -> Optional[Row]:
    """Divide by the coefficient gcd; None when an equality has no integer solution."""
    g = 0
    for _, c in row.coeffs:
        g = math.gcd(g, c)
    if g <= 1:
        return row
    if row.equality:
        if row.constant % g:
            return None
        return Row(tuple((v, c // g) for v, c in row.coeffs), row.constant // g, True)
    # Σ a·x <= -c  <=>  Σ (a/g)·x <= floor(-c/g)
    return Row(tuple((v, c // g) for v, c in row.coeffs), -((-row.constant) // g), False)


def _replace(
    coeffs: Tuple[Tuple[str, int], ...], constant: int, name: str, expr: LinearExpr
) -> Tuple[Tuple[Tuple[str, int], ...], int]:
    """Σ coeffs·x + constant with `name` replaced by `expr`."""
    factor = next((c for v, c in coeffs if v == name), 0)
    if not factor:
        return coeffs, constant
    merged: Dict[str, int] = {v: c for v, c in coeffs if v != name}
    for v, c in expr.coeffs:
        merged[v] = merged.get(v, 0) + factor * c
    return tuple((v, c) for v, c in merged.items() if c != 0), constant + factor * expr.constant


def _restore(model: IntAssignment, substitutions: Sequence[Tuple[str, LinearExpr]]) -> IntAssignment:
    values = dict(model)
    # a substitution only mentions variables that are still free or eliminated after it
    for name, expr in reversed(substitutions):
        values[name] = sum(c * values.get(v, 0) for v, c in expr.coeffs) + expr.constant
    return values


def small_model_bound(columns: int, rows: int, largest: int) -> int:
    """If an integer program has a solution, it has one with |x_i| below this bound."""
    return max(1, columns * (max(1, rows) * max(1, largest)) ** (2 * max(1, rows) + 1))


@dataclass(frozen=True)
class _Reduced:
    """Inequalities left after equality elimination, over the remaining variables."""

    rows: Tuple[Row, ...]
    substitutions: Tuple[Tuple[str, LinearExpr], ...]
    # the original variables, rewritten over the remaining ones
    targets: Tuple[LinearExpr, ...]


class _Abandoned(Exception):
    """A parallel search whose answer is no longer needed."""


class _Budget:
    """Leaf count shared by every search over one formula."""

    def __init__(self) -> None:
        self.leaves = 0
        self.settled = threading.Event()
        self._lock = threading.Lock()

    def spend(self) -> None:
        with self._lock:
            self.leaves += 1
            leaves = self.leaves
        if leaves > settings.PA_MAX_BRANCHES:
            raise SolverLimitExceeded(
                f"More than {settings.PA_MAX_BRANCHES} disjuncts explored; formula too disjunctive"
            )

    def check(self) -> None:
        if self.settled.is_set():
            raise _Abandoned()


class _Search:
    def __init__(self, order: Sequence[str], budget: Optional[_Budget] = None):
        self.order = {name: i for i, name in enumerate(order)}
        self.budget = budget if budget is not None else _Budget()
        self._fresh = itertools.count()

    def position(self, name: str) -> int:
        return self.order.setdefault(name, len(self.order))

    def run(self, agenda: Tuple[_Node, ...], rows: Tuple[Row, ...], checked: int = 0) -> Optional[IntAssignment]:
        """Depth-first over disjunct choices; `checked` rows are known to have a rational solution."""
        self.budget.check()
        rows_list = list(rows)
        pending = list(agenda)
        choice: Optional[_Disj] = None
        while pending:
            node = pending.pop(0)
            if isinstance(node, Row):
                rows_list.append(node)
            elif isinstance(node, _Const):
                if not node.value:
                    return None
            elif isinstance(node, _Conj):
                pending[0:0] = node.items
            else:
                choice = node
                break

        if choice is None:
            self.budget.spend()
            return self.integer_feasible(rows_list)

        if len(rows_list) > checked and self.relax(rows_list, {}) is None:
            return None
        for alternative in choice.items:
            found = self.run((alternative, *pending), tuple(rows_list), len(rows_list))
            if found is not None:
                return found
        return None

    # -- equality elimination ------------------------------------------
    def eliminate(self, rows: List[Row]) -> Optional[_Reduced]:
        """
        Solve the equalities over the integers, leaving only inequalities.

        A variable with a unit coefficient is solved for directly. Otherwise the
        variable x with the smallest coefficient a is rewritten as
        x = t - Σ floor(b/a)·y, which leaves every other coefficient of that row
        below |a|; repeating ends in a unit coefficient or in a row whose
        constant the gcd does not divide. Parity conflicts are refuted here.
        """
        names = sorted({v for row in rows for v, _ in row.coeffs}, key=self.position)
        targets = [LinearExpr(((name, 1),), 0) for name in names]
        equalities = [row for row in rows if row.equality]
        inequalities = [row for row in rows if not row.equality]
        substitutions: List[Tuple[str, LinearExpr]] = []

        while equalities:
            row = _normalize_row(equalities.pop(0))
            if row is None:
                return None
            if not row.coeffs:
                if row.constant != 0:
                    return None
                continue
            name, coef = min(row.coeffs, key=lambda vc: (abs(vc[1]), self.position(vc[0])))
            if abs(coef) == 1:
                expr = LinearExpr(tuple((v, -coef * c) for v, c in row.coeffs if v != name), -coef * row.constant)
            else:
                fresh = f"{_FRESH_PREFIX}t{next(self._fresh)}"
                self.position(fresh)
                rest = tuple((v, -(c // coef)) for v, c in row.coeffs if v != name and c // coef)
                expr = LinearExpr(((fresh, 1),) + rest, 0)
                # the same row is reduced again until a coefficient reaches 1
                equalities.insert(0, row)
            substitutions.append((name, expr))
            equalities = [Row(*_replace(r.coeffs, r.constant, name, expr), True) for r in equalities]
            inequalities = [Row(*_replace(r.coeffs, r.constant, name, expr), False) for r in inequalities]
            targets = [LinearExpr(*_replace(t.coeffs, t.constant, name, expr)) for t in targets]

        settled: List[Row] = []
        for row in inequalities:
            fixed = _normalize_row(row)
            if not fixed.coeffs:
                if fixed.constant > 0:
                    return None
                continue
            settled.append(fixed)
        return _Reduced(tuple(settled), tuple(substitutions), tuple(t for t in targets if t.coeffs))

    # -- branch and bound ----------------------------------------------
    def integer_feasible(self, rows: List[Row]) -> Optional[IntAssignment]:
        reduced = self.eliminate(rows)
        if reduced is None:
            return None
        used = {v for row in reduced.rows for v, _ in row.coeffs} | {v for t in reduced.targets for v, _ in t.coeffs}
        if not used:
            return _restore({}, reduced.substitutions)
        names = sorted(used, key=self.position)

        largest = max(
            [1] + [abs(c) for row in reduced.rows for _, c in row.coeffs] + [abs(row.constant) for row in reduced.rows]
        )
        bound = small_model_bound(len(names), len(reduced.rows), largest)
        clamped = bound > settings.PA_FLOAT_LIMIT
        box = int(settings.PA_FLOAT_LIMIT) if clamped else bound
        # set once a relaxation is empty inside the box but not outside it
        cut_by_box = False

        stack: List[Dict[str, Tuple[Optional[int], Optional[int]]]] = [{}]
        explored = 0
        while stack:
            self.budget.check()
            limits = stack.pop()
            explored += 1
            if explored > settings.PA_MAX_NODES:
                raise SolverLimitExceeded(f"Branch and bound exceeded {settings.PA_MAX_NODES} nodes")
            point = self.relax(list(reduced.rows), limits, names, box, reduced.targets)
            if point is None:
                if clamped and not cut_by_box:
                    cut_by_box = self.relax(list(reduced.rows), limits, names) is not None
                continue
            branch = next(
                (name for name in names if abs(point[name] - round(point[name])) > INTEGRALITY_TOLERANCE),
                None,
            )
            if branch is not None:
                floor = math.floor(point[branch])
                lo, hi = limits.get(branch, (None, None))
                # floor branch is explored first, so it goes on the stack last
                stack.append({**limits, branch: (floor + 1, hi)})
                stack.append({**limits, branch: (lo, floor)})
                continue

            candidate = {name: int(round(point[name])) for name in names}
            if all(row.holds(candidate) for row in reduced.rows):
                return _restore(candidate, reduced.substitutions)
            # the rounded point fails exactly: fix the first variable and split around it
            name = names[0]
            for other in names:
                lo, hi = limits.get(other, (None, None))
                if lo is None or hi is None or lo != hi:
                    name = other
                    break
            value = candidate[name]
            lo, hi = limits.get(name, (None, None))
            if lo is not None and hi is not None and lo == hi:
                continue
            stack.append({**limits, name: (value + 1, hi)})
            stack.append({**limits, name: (lo, value - 1)})
            stack.append({**limits, name: (value, value)})

        if cut_by_box:
            raise SolverLimitExceeded(f"No model within ±{box} and the small-model bound exceeds PA_FLOAT_LIMIT")
        return None

    def relax(
        self,
        rows: List[Row],
        limits: Dict[str, Tuple[Optional[int], Optional[int]]],
        names: Optional[List[str]] = None,
        box: Optional[int] = None,
        targets: Sequence[LinearExpr] = (),
    ) -> Optional[Dict[str, float]]:
        """Solve the rational relaxation, keeping Σ|target| small; None when infeasible."""
        if names is None:
            names = sorted({v for row in rows for v, _ in row.coeffs}, key=self.position)
        column = {name: i for i, name in enumerate(names)}
        n = len(names)
        width = n + len(targets)

        ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
        for row in rows:
            vector = np.zeros(width)
            for v, c in row.coeffs:
                vector[column[v]] = c
            if row.equality:
                eq_rows.append(vector)
                eq_rhs.append(-row.constant)
            else:
                ub_rows.append(vector)
                ub_rhs.append(-row.constant)

        objective = np.zeros(width)
        for i, target in enumerate(targets):
            # ±target <= u_i with u_i minimized
            for sign in (1, -1):
                vector = np.zeros(width)
                for v, c in target.coeffs:
                    vector[column[v]] = sign * c
                vector[n + i] = -1.0
                ub_rows.append(vector)
                ub_rhs.append(-sign * target.constant)
            objective[n + i] = 1.0

        bounds = []
        for name in names:
            lo, hi = limits.get(name, (None, None))
            if box is not None:
                lo = -box if lo is None else max(lo, -box)
                hi = box if hi is None else min(hi, box)
            bounds.append((lo, hi))
        bounds.extend((0, None) for _ in targets)

        for c in (objective, np.zeros(width)):
            result = linprog(
                c,
                A_ub=np.array(ub_rows) if ub_rows else None,
                b_ub=np.array(ub_rhs) if ub_rows else None,
                A_eq=np.array(eq_rows) if eq_rows else None,
                b_eq=np.array(eq_rhs) if eq_rows else None,
                bounds=bounds,
                method="highs",
            )
            if result.status == 0:
                return {name: float(result.x[column[name]]) for name in names}
            if result.status == 2:
                return None
        raise SolverLimitExceeded(f"LP relaxation failed: {result.message}")


def _first_model(order: Sequence[str], alternatives: Sequence[_Node]) -> Optional[IntAssignment]:
    """Search top-level disjuncts on a thread pool; the first satisfiable one in textual order wins."""
    budget = _Budget()
    pool = ThreadPoolExecutor(max_workers=settings.PA_WORKERS)
    futures = [pool.submit(_Search(order, budget).run, (alternative,), ()) for alternative in alternatives]
    try:
        for future in futures:
            model = future.result()
            if model is not None:
                return model
        return None
    finally:
        # later disjuncts still running stop at their next node
        budget.settled.set()
        pool.shutdown(wait=True, cancel_futures=True)


class PresburgerService:
    """Service for existential Presburger arithmetic"""

    @staticmethod
    def check_supported(formula: Formula) -> None:
        allowed = (Top, Bottom, Eq, Le, Dvd, And, Or, Not, Exists, Const, IntVar, Add, Scale)
        for node in iter_nodes(formula):
            if not isinstance(node, allowed):
                raise UnsupportedTerm(f"{type(node).__name__} is not part of Presburger arithmetic")

    @staticmethod
    def pa_solve(formula: Formula) -> Optional[IntAssignment]:
        """A model over all variables of the formula, or None when unsatisfiable."""
        PresburgerService.check_supported(formula)
        order = variables(formula)
        normalizer = _Normalizer()
        root = normalizer.convert(formula)

        if settings.PA_WORKERS > 1 and isinstance(root, _Disj):
            model = _first_model(order, root.items)
        else:
            model = _Search(order).run((root,), ())

        if model is None:
            logger.debug(f"pa_solve: unsat over {len(order)} variables")
            return None

        assignment = {name: model.get(name, 0) for name in order}
        if not PresburgerService.pa_eval(formula, assignment):
            logger.error("pa_solve produced a model that fails evaluation")
            raise SolverLimitExceeded("Numerical failure: model does not satisfy the formula")
        logger.debug(f"pa_solve: sat over {len(order)} variables")
        return assignment

    @staticmethod
    def pa_eval(formula: Formula, assignment: IntAssignment) -> bool:
        if isinstance(formula, Top):
            return True
        if isinstance(formula, Bottom):
            return False
        if isinstance(formula, Exists):
            return PresburgerService.pa_eval(formula.body, assignment)
        if isinstance(formula, Not):
            return not PresburgerService.pa_eval(formula.arg, assignment)
        if isinstance(formula, And):
            return all(PresburgerService.pa_eval(arg, assignment) for arg in formula.args)
        if isinstance(formula, Or):
            return any(PresburgerService.pa_eval(arg, assignment) for arg in formula.args)
        if isinstance(formula, Eq):
            return _term_value(formula.left, assignment) == _term_value(formula.right, assignment)
        if isinstance(formula, Le):
            return _term_value(formula.left, assignment) <= _term_value(formula.right, assignment)
        if isinstance(formula, Dvd):
            value = _term_value(formula.term, assignment)
            if formula.modulus == 0:
                return value == 0
            return value % formula.modulus == 0
        raise UnsupportedTerm(f"Not a Presburger formula: {type(formula).__name__}")

    @staticmethod
    def enumerate_models(names: Sequence[str], bound: int) -> Iterator[IntAssignment]:
        """Every assignment of names into [-bound, bound], lexicographically (test oracle)."""
        for values in itertools.product(range(-bound, bound + 1), repeat=len(names)):
            yield dict(zip(names, values))


def _term_value(term, assignment: IntAssignment) -> int:
    expr = linearize(term)
    for name, _ in expr.coeffs:
        if name not in assignment:
            raise MissingVariable(name)
    return expr.value(assignment)
