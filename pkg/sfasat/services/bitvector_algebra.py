"""
Fixed-width bitvector algebra over reduced ordered BDDs.

Each algebra instance owns one `dd.autoref` manager with the bits declared
most significant first, so every compiled predicate is a canonical diagram and
the leftmost satisfying path read with 0-branches first is the numerically
smallest element of the denotation.
"""

from __future__ import annotations

import threading
from typing import Dict, List, Optional

from dd import autoref as _bdd

from sfasat.core.exceptions import AlgebraMismatch
from sfasat.core.logging import get_logger
from sfasat.models.predicate import (
    Atom,
    MemberAtom,
    NamedAtom,
    PAnd,
    PAtom,
    PFalse,
    PNot,
    POr,
    PredExpr,
    Predicate,
    PTrue,
)
from sfasat.services.algebra_service import EffectiveBooleanAlgebra

logger = get_logger(__name__)


class BitvectorAlgebra(EffectiveBooleanAlgebra):
    def __init__(self, width: int):
        self.width = width
        self.algebra_id = f"bv{width}"
        super().__init__()
        # the manager is not thread-safe
        self._lock = threading.RLock()
        self._manager = _bdd.BDD()
        self._manager.configure(reordering=False)
        # level 0 holds the most significant bit
        self.bits: List[str] = [f"b{i}" for i in reversed(range(width))]
        for level, name in enumerate(self.bits):
            self._manager.add_var(name, level=level)
        self._compiled: Dict[PredExpr, _bdd.Function] = {}

    @property
    def manager(self) -> _bdd.BDD:
        return self._manager

    def contains(self, element: object) -> bool:
        return (
            isinstance(element, int)
            and not isinstance(element, bool)
            and 0 <= element < (1 << self.width)
        )

    def evaluate_atom(self, atom: Atom, element: int) -> bool:
        if isinstance(atom, MemberAtom):
            return atom.holds(element)
        raise AlgebraMismatch(self.algebra_id, type(atom).__name__)

    def parse(self, text: str) -> Predicate:
        from sfasat.utils.predicate_parser import PredicateParser

        return Predicate(self.algebra_id, PredicateParser.parse_bitvector(text, self.width))

    # -- diagrams -----------------------------------------------------
    def diagram(self, predicate: Predicate) -> _bdd.Function:
        """The canonical reduced ordered BDD of a predicate."""
        self._own(predicate)
        with self._lock:
            return self._compile(predicate.body)

    def evaluate_diagram(self, predicate: Predicate, element: int) -> bool:
        """Evaluate by restricting the diagram to the element's bits."""
        u = self.diagram(predicate)
        with self._lock:
            return self._manager.let(self._assignment(self.check_element(element)), u) == self._manager.true

    def diagram_nodes(self, predicate: Predicate) -> List[_bdd.Function]:
        """Every internal node reachable from the root, each once."""
        root = self.diagram(predicate)
        nodes: List[_bdd.Function] = []
        with self._lock:
            seen = set()
            stack = [root]
            while stack:
                u = stack.pop()
                if u == self._manager.true or u == self._manager.false:
                    continue
                key = u.node
                if key in seen:
                    continue
                seen.add(key)
                nodes.append(u)
                stack.extend([u.low, u.high])
        return nodes

    def _compile(self, body: PredExpr) -> _bdd.Function:
        cached = self._compiled.get(body)
        if cached is not None:
            return cached
        manager = self._manager
        if isinstance(body, PTrue):
            u = manager.true
        elif isinstance(body, PFalse):
            u = manager.false
        elif isinstance(body, PAtom):
            atom = body.atom
            if isinstance(atom, NamedAtom):
                u = self._compile(atom.body)
            elif isinstance(atom, MemberAtom):
                u = manager.false
                for value in atom.values:
                    u = u | self._cube(value)
            else:
                raise AlgebraMismatch(self.algebra_id, type(atom).__name__)
        elif isinstance(body, PNot):
            u = ~self._compile(body.arg)
        elif isinstance(body, PAnd):
            u = self._compile(body.left) & self._compile(body.right)
        elif isinstance(body, POr):
            u = self._compile(body.left) | self._compile(body.right)
        else:
            raise TypeError(f"Not a predicate expression: {body!r}")
        self._compiled[body] = u
        return u

    def _cube(self, value: int) -> _bdd.Function:
        if not self.contains(value):
            raise AlgebraMismatch(self.algebra_id, f"element {value!r}")
        u = self._manager.true
        for name, bit in self._assignment(value).items():
            literal = self._manager.var(name)
            u = u & (literal if bit else ~literal)
        return u

    def _assignment(self, value: int) -> Dict[str, bool]:
        return {f"b{i}": bool((value >> i) & 1) for i in range(self.width)}

    def _find_witness(self, body: PredExpr) -> Optional[int]:
        with self._lock:
            u = self._compile(body)
            manager = self._manager
            if u == manager.false:
                return None
            value = 0
            # bits not tested on the path default to 0
            for name in self.bits:
                low = manager.let({name: False}, u)
                if low != manager.false:
                    u = low
                    continue
                u = manager.let({name: True}, u)
                value |= 1 << int(name[1:])
            return value
