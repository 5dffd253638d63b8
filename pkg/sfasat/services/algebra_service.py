"""
Effective Boolean algebras.

`EffectiveBooleanAlgebra` is the contract every element theory implements:
Boolean closure, pointwise evaluation, and a decision procedure for
non-emptiness that also produces a witness element. `AlgebraService` is the
registry and the module-level entry point used by the rest of the solver.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Dict, Optional

from sfasat.core.config import settings
from sfasat.core.exceptions import AlgebraMismatch, SemanticError
from sfasat.core.logging import get_logger
from sfasat.models.predicate import (
    FALSE,
    TRUE,
    Atom,
    NamedAtom,
    PAnd,
    PAtom,
    PFalse,
    PNot,
    POr,
    PredExpr,
    Predicate,
    PTrue,
    Witness,
)

logger = get_logger(__name__)


class EffectiveBooleanAlgebra(ABC):
    """Predicates over one domain, closed under ∧ ∨ ¬, with decidable non-emptiness."""

    algebra_id: str

    def __init__(self) -> None:
        # lru_cache keeps its bookkeeping under an internal lock
        self._witness_cache = lru_cache(maxsize=settings.ORACLE_CACHE_SIZE)(self._find_witness)

    # -- to implement -------------------------------------------------
    @abstractmethod
    def contains(self, element: object) -> bool:
        """True iff the value is a domain element of this algebra."""

    @abstractmethod
    def evaluate_atom(self, atom: Atom, element: int) -> bool:
        """Truth of a non-named atom at a domain element."""

    @abstractmethod
    def _find_witness(self, body: PredExpr) -> Optional[int]:
        """Some element of the denotation, or None when it is empty."""

    @abstractmethod
    def parse(self, text: str) -> Predicate:
        """Parse predicate text of this algebra's grammar."""

    # -- shared behaviour ---------------------------------------------
    @property
    def top(self) -> Predicate:
        return Predicate(self.algebra_id, TRUE)

    @property
    def bottom(self) -> Predicate:
        return Predicate(self.algebra_id, FALSE)

    def check_element(self, element: object) -> int:
        if not self.contains(element):
            raise AlgebraMismatch(self.algebra_id, f"element {element!r}")
        return element  # type: ignore[return-value]

    def evaluate_body(self, body: PredExpr, element: int) -> bool:
        if isinstance(body, PTrue):
            return True
        if isinstance(body, PFalse):
            return False
        if isinstance(body, PAtom):
            if isinstance(body.atom, NamedAtom):
                return self.evaluate_body(body.atom.body, element)
            return self.evaluate_atom(body.atom, element)
        if isinstance(body, PNot):
            return not self.evaluate_body(body.arg, element)
        if isinstance(body, PAnd):
            return self.evaluate_body(body.left, element) and self.evaluate_body(body.right, element)
        if isinstance(body, POr):
            return self.evaluate_body(body.left, element) or self.evaluate_body(body.right, element)
        raise TypeError(f"Not a predicate expression: {body!r}")

    def evaluate(self, predicate: Predicate, element: object) -> bool:
        self._own(predicate)
        return self.evaluate_body(predicate.body, self.check_element(element))

    def is_satisfiable(self, predicate: Predicate) -> Optional[Witness]:
        self._own(predicate)
        found = self._witness_cache(predicate.body)
        return None if found is None else Witness(found)

    def _own(self, predicate: Predicate) -> None:
        if predicate.algebra_id != self.algebra_id:
            raise AlgebraMismatch(self.algebra_id, predicate.algebra_id)


class AlgebraService:
    """Registry of algebra instances and the algebra-level operations."""

    _instances: Dict[str, EffectiveBooleanAlgebra] = {}
    _lock = threading.Lock()

    @staticmethod
    def get(algebra_id: str) -> EffectiveBooleanAlgebra:
        """Look up (or lazily create) the algebra for an identifier: `lia` or `bv<width>`."""
        with AlgebraService._lock:
            algebra = AlgebraService._instances.get(algebra_id)
            if algebra is None:
                algebra = AlgebraService._create(algebra_id)
                AlgebraService._instances[algebra_id] = algebra
            return algebra

    @staticmethod
    def declare(kind: str, width: Optional[int] = None) -> EffectiveBooleanAlgebra:
        """Resolve an `algebra` declaration such as `lia` or `bv 6`."""
        if kind == "lia":
            if width is not None:
                raise SemanticError("The integer algebra takes no width")
            return AlgebraService.get("lia")
        if kind == "bv":
            width = settings.BV_DEFAULT_WIDTH if width is None else width
            if width < 1:
                raise SemanticError(f"Bad bitvector width {width}")
            return AlgebraService.get(f"bv{width}")
        raise SemanticError(f"Unknown algebra {kind}")

    @staticmethod
    def _create(algebra_id: str) -> EffectiveBooleanAlgebra:
        from sfasat.services.bitvector_algebra import BitvectorAlgebra
        from sfasat.services.integer_algebra import IntegerAlgebra

        if algebra_id == "lia":
            return IntegerAlgebra()
        if algebra_id.startswith("bv") and algebra_id[2:].isdigit() and int(algebra_id[2:]) > 0:
            return BitvectorAlgebra(int(algebra_id[2:]))
        raise SemanticError(f"Unknown algebra {algebra_id}")

    @staticmethod
    def combine(op: str, p: Predicate, q: Optional[Predicate] = None) -> Predicate:
        """Boolean connective on predicates of one algebra."""
        if op == "not":
            if q is not None:
                raise ValueError("not takes a single predicate")
            return Predicate(p.algebra_id, _simplify_not(p.body))
        if q is None:
            raise ValueError(f"{op} takes two predicates")
        if p.algebra_id != q.algebra_id:
            raise AlgebraMismatch(p.algebra_id, q.algebra_id)
        if op == "and":
            return Predicate(p.algebra_id, _simplify_and(p.body, q.body))
        if op == "or":
            return Predicate(p.algebra_id, _simplify_or(p.body, q.body))
        raise ValueError(f"Unknown connective {op}")

    @staticmethod
    def evaluate(p: Predicate, element: object) -> bool:
        return AlgebraService.get(p.algebra_id).evaluate(p, element)

    @staticmethod
    def is_satisfiable(p: Predicate) -> Optional[Witness]:
        witness = AlgebraService.get(p.algebra_id).is_satisfiable(p)
        logger.debug(f"oracle {p.algebra_id}: {p.render()} -> {witness}")
        return witness

    @staticmethod
    def parse_predicate(text: str, algebra_id: str) -> Predicate:
        return AlgebraService.get(algebra_id).parse(text)


def _simplify_not(body: PredExpr) -> PredExpr:
    if isinstance(body, PTrue):
        return FALSE
    if isinstance(body, PFalse):
        return TRUE
    return PNot(body)


def _simplify_and(left: PredExpr, right: PredExpr) -> PredExpr:
    if isinstance(left, PTrue):
        return right
    if isinstance(right, PTrue):
        return left
    if isinstance(left, PFalse) or isinstance(right, PFalse):
        return FALSE
    return PAnd(left, right)


def _simplify_or(left: PredExpr, right: PredExpr) -> PredExpr:
    if isinstance(left, PFalse):
        return right
    if isinstance(right, PFalse):
        return left
    if isinstance(left, PTrue) or isinstance(right, PTrue):
        return TRUE
    return POr(left, right)
