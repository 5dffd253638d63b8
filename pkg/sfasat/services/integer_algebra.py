"""
Integer algebra: Boolean combinations of single-variable linear comparisons
and congruences.

Non-emptiness is decided per conjunct of the disjunctive normal form. Bound
atoms intersect to an interval, `!=` atoms exclude single points, and the
congruences are periodic with period L = lcm of their moduli, so scanning
L·(excluded + 1) consecutive integers from the tightest bound is exhaustive.
"""

from __future__ import annotations

import math
from itertools import count
from typing import Iterator, List, Optional, Set, Tuple

from sfasat.core.exceptions import AlgebraMismatch
from sfasat.models.predicate import (
    NEGATED_COMPARISON,
    Atom,
    LinearAtom,
    ModAtom,
    PAnd,
    PAtom,
    PFalse,
    PNot,
    POr,
    PredExpr,
    Predicate,
    PTrue,
    expand_named,
)
from sfasat.services.algebra_service import EffectiveBooleanAlgebra

Literal = Tuple[Atom, bool]

MIRRORED_COMPARISON = {"<": ">", "<=": ">=", "==": "==", ">=": "<=", ">": "<", "!=": "!="}


class IntegerAlgebra(EffectiveBooleanAlgebra):
    algebra_id = "lia"

    def contains(self, element: object) -> bool:
        return isinstance(element, int) and not isinstance(element, bool)

    def evaluate_atom(self, atom: Atom, element: int) -> bool:
        if isinstance(atom, (LinearAtom, ModAtom)):
            return atom.holds(element)
        raise AlgebraMismatch(self.algebra_id, type(atom).__name__)

    def parse(self, text: str) -> Predicate:
        from sfasat.utils.predicate_parser import PredicateParser

        return Predicate(self.algebra_id, PredicateParser.parse_integer(text))

    def _find_witness(self, body: PredExpr) -> Optional[int]:
        for conjunct in _conjuncts(expand_named(body), True):
            found = _solve_conjunct(conjunct)
            if found is not None:
                return found
        return None


def _conjuncts(expr: PredExpr, positive: bool) -> Iterator[List[Literal]]:
    """Lazily enumerate the DNF of expr (or of its negation) as literal lists."""
    if isinstance(expr, PTrue):
        if positive:
            yield []
        return
    if isinstance(expr, PFalse):
        if not positive:
            yield []
        return
    if isinstance(expr, PAtom):
        if isinstance(expr.atom, (LinearAtom, ModAtom)):
            yield [(expr.atom, positive)]
            return
        raise AlgebraMismatch("lia", type(expr.atom).__name__)
    if isinstance(expr, PNot):
        yield from _conjuncts(expr.arg, not positive)
        return
    conjunctive = isinstance(expr, PAnd) == positive
    if not isinstance(expr, (PAnd, POr)):
        raise TypeError(f"Not a predicate expression: {expr!r}")
    if conjunctive:
        for left in _conjuncts(expr.left, positive):
            for right in _conjuncts(expr.right, positive):
                yield left + right
    else:
        yield from _conjuncts(expr.left, positive)
        yield from _conjuncts(expr.right, positive)


def _solve_conjunct(literals: List[Literal]) -> Optional[int]:
    lo: Optional[int] = None
    hi: Optional[int] = None
    excluded: Set[int] = set()
    congruences: List[Tuple[ModAtom, bool]] = []

    for atom, positive in literals:
        if isinstance(atom, ModAtom):
            congruences.append((atom, positive))
            continue
        op = atom.op if positive else NEGATED_COMPARISON[atom.op]
        a, c = atom.coef, atom.bound - atom.offset
        if a == 0:
            if not LinearAtom(0, 0, op, c).holds(0):
                return None
            continue
        if a < 0:
            a, c, op = -a, -c, MIRRORED_COMPARISON[op]
        # a > 0 and the atom reads a·x op c
        if op == "<":
            hi = _min(hi, (c - 1) // a)
        elif op == "<=":
            hi = _min(hi, c // a)
        elif op == ">":
            lo = _max(lo, -((-(c + 1)) // a))
        elif op == ">=":
            lo = _max(lo, -((-c) // a))
        elif op == "==":
            if c % a:
                return None
            lo, hi = _max(lo, c // a), _min(hi, c // a)
        elif c % a == 0:
            excluded.add(c // a)

    if lo is not None and hi is not None and lo > hi:
        return None

    period = math.lcm(*(atom.modulus for atom, _ in congruences)) if congruences else 1
    window = period * (len(excluded) + 1)

    for candidate in _scan(lo, hi, window):
        if candidate in excluded:
            continue
        if all(atom.holds(candidate) == positive for atom, positive in congruences):
            return candidate
    return None


def _scan(lo: Optional[int], hi: Optional[int], window: int) -> Iterator[int]:
    if lo is not None:
        stop = lo + window if hi is None else min(hi + 1, lo + window)
        yield from range(lo, stop)
    elif hi is not None:
        yield from range(hi, hi - window, -1)
    else:
        yield 0
        for step in count(1):
            if step > window:
                return
            yield step
            yield -step


def _min(current: Optional[int], value: int) -> int:
    return value if current is None else min(current, value)


def _max(current: Optional[int], value: int) -> int:
    return value if current is None else max(current, value)
