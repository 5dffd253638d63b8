"""
Boolean algebra of finite sets with Presburger arithmetic (quantifier-free).

Set expressions are built from set variables, the empty set, the universe,
union, intersection and complement. `Card` lifts a set expression into an
integer term; `SetEqual` and `SetSubset` are the set atoms. Everything else
(integer atoms and connectives) is shared with `sfasat.models.presburger`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Iterator, Mapping, Sequence, Tuple, Union

from sfasat.models.presburger import Add, And, Dvd, Eq, Exists, Le, Not, Or, Scale


# -------------------------------
# Set expressions
# -------------------------------
@dataclass(frozen=True)
class SetVar:
    name: str

    def member(self, bits: Mapping[str, bool]) -> bool:
        return bits[self.name]

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class EmptySet:
    def member(self, bits: Mapping[str, bool]) -> bool:
        return False

    def render(self) -> str:
        return "empty"


@dataclass(frozen=True)
class Universe:
    def member(self, bits: Mapping[str, bool]) -> bool:
        return True

    def render(self) -> str:
        return "U"


@dataclass(frozen=True)
class SetUnion:
    left: "SetExpr"
    right: "SetExpr"

    def member(self, bits: Mapping[str, bool]) -> bool:
        return self.left.member(bits) or self.right.member(bits)

    def render(self) -> str:
        return f"({self.left.render()} + {self.right.render()})"


@dataclass(frozen=True)
class SetIntersection:
    left: "SetExpr"
    right: "SetExpr"

    def member(self, bits: Mapping[str, bool]) -> bool:
        return self.left.member(bits) and self.right.member(bits)

    def render(self) -> str:
        return f"({self.left.render()} & {self.right.render()})"


@dataclass(frozen=True)
class SetComplement:
    arg: "SetExpr"

    def member(self, bits: Mapping[str, bool]) -> bool:
        return not self.arg.member(bits)

    def render(self) -> str:
        return f"~{self.arg.render()}"


SetExpr = Union[SetVar, EmptySet, Universe, SetUnion, SetIntersection, SetComplement]

EMPTY = EmptySet()
UNIVERSE = Universe()


# -------------------------------
# Cardinality term and set atoms
# -------------------------------
@dataclass(frozen=True)
class Card:
    arg: SetExpr

    def render(self) -> str:
        inner = self.arg.render()
        if isinstance(self.arg, (SetUnion, SetIntersection)):
            inner = inner[1:-1]
        return f"|{inner}|"


@dataclass(frozen=True)
class SetEqual:
    left: SetExpr
    right: SetExpr

    def render(self) -> str:
        return f"{self.left.render()} = {self.right.render()}"


@dataclass(frozen=True)
class SetSubset:
    left: SetExpr
    right: SetExpr

    def render(self) -> str:
        return f"{self.left.render()} sub {self.right.render()}"


def region_bits(beta: str, set_vars: Sequence[str]) -> Dict[str, bool]:
    """Membership of a Venn region β (one bit per set variable, in order)."""
    return {name: bit == "1" for name, bit in zip(set_vars, beta)}


def in_region(expr: SetExpr, beta: str, set_vars: Sequence[str]) -> bool:
    """⟦expr⟧_β: whether region β lies inside the set expression."""
    return expr.member(region_bits(beta, set_vars))


def all_regions(count: int) -> Tuple[str, ...]:
    """Every bitstring of the given length, lexicographically ('' when count is 0)."""
    return tuple(format(i, f"0{count}b") if count else "" for i in range(1 << count))


# -------------------------------
# Traversal
# -------------------------------
def iter_bapa_nodes(node) -> Iterator[object]:
    """Pre-order walk through formulas, integer terms and set expressions."""
    yield node
    if isinstance(node, (And, Or, Add)):
        for arg in node.args:
            yield from iter_bapa_nodes(arg)
    elif isinstance(node, (Eq, Le, SetEqual, SetSubset, SetUnion, SetIntersection)):
        yield from iter_bapa_nodes(node.left)
        yield from iter_bapa_nodes(node.right)
    elif isinstance(node, (Dvd, Scale)):
        yield from iter_bapa_nodes(node.term)
    elif isinstance(node, (Not, SetComplement, Card)):
        yield from iter_bapa_nodes(node.arg)
    elif isinstance(node, Exists):
        yield from iter_bapa_nodes(node.body)


def set_variables(formula) -> Tuple[str, ...]:
    """Set variable names in first-occurrence order."""
    seen: Dict[str, None] = {}
    for node in iter_bapa_nodes(formula):
        if isinstance(node, SetVar):
            seen.setdefault(node.name, None)
    return tuple(seen)


def cardinality_terms(formula) -> Tuple[Card, ...]:
    """Distinct cardinality terms in first-occurrence order."""
    seen: Dict[Card, None] = {}
    for node in iter_bapa_nodes(formula):
        if isinstance(node, Card):
            seen.setdefault(node, None)
    return tuple(seen)


def rename_sets(node, rename: Callable[[str], str]):
    """Copy of a formula, term or set expression with every set variable renamed."""
    if isinstance(node, SetVar):
        return SetVar(rename(node.name))
    if isinstance(node, (SetUnion, SetIntersection, SetEqual, SetSubset, Eq, Le)):
        return type(node)(rename_sets(node.left, rename), rename_sets(node.right, rename))
    if isinstance(node, (SetComplement, Card, Not)):
        return type(node)(rename_sets(node.arg, rename))
    if isinstance(node, (And, Or, Add)):
        return type(node)(tuple(rename_sets(arg, rename) for arg in node.args))
    if isinstance(node, Dvd):
        return Dvd(node.modulus, rename_sets(node.term, rename))
    if isinstance(node, Scale):
        return Scale(node.coef, rename_sets(node.term, rename))
    if isinstance(node, Exists):
        return Exists(node.names, rename_sets(node.body, rename))
    return node
