"""
Element predicates.

A predicate is an immutable Boolean expression over algebra-specific atoms,
tagged with the identifier of the algebra that interprets it. Expressions are
frozen dataclasses, so equal expressions hash equally and oracle calls can be
memoized on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Tuple, Union

# comparison operators of linear atoms, as written in predicate text
COMPARISONS = ("<", "<=", "==", ">=", ">", "!=")

NEGATED_COMPARISON = {
    "<": ">=",
    "<=": ">",
    "==": "!=",
    ">=": "<",
    ">": "<=",
    "!=": "==",
}


# -------------------------------
# Atoms
# -------------------------------
@dataclass(frozen=True)
class LinearAtom:
    """coef·x + offset ▷ bound over the integers."""

    coef: int
    offset: int
    op: str
    bound: int

    def holds(self, value: int) -> bool:
        lhs = self.coef * value + self.offset
        return {
            "<": lhs < self.bound,
            "<=": lhs <= self.bound,
            "==": lhs == self.bound,
            ">=": lhs >= self.bound,
            ">": lhs > self.bound,
            "!=": lhs != self.bound,
        }[self.op]

    def render(self) -> str:
        if self.coef == 1:
            lhs = "x"
        elif self.coef == -1:
            lhs = "-1*x"
        else:
            lhs = f"{self.coef}*x"
        if self.offset > 0:
            lhs += f" + {self.offset}"
        elif self.offset < 0:
            lhs += f" - {-self.offset}"
        return f"{lhs} {self.op} {self.bound}"


@dataclass(frozen=True)
class ModAtom:
    """x ≡ residue (mod modulus), modulus ≥ 1, residue already reduced."""

    modulus: int
    residue: int

    def holds(self, value: int) -> bool:
        return value % self.modulus == self.residue

    def render(self) -> str:
        return f"x % {self.modulus} == {self.residue}"


@dataclass(frozen=True)
class MemberAtom:
    """Membership of a bitvector value in an explicit finite set."""

    values: Tuple[int, ...]

    def holds(self, value: int) -> bool:
        return value in self.values

    def render(self) -> str:
        return "in {" + ",".join(str(v) for v in self.values) + "}"


@dataclass(frozen=True)
class NamedAtom:
    """A declared predicate used as one opaque generator."""

    name: str
    body: "PredExpr"

    def render(self) -> str:
        return self.name


Atom = Union[LinearAtom, ModAtom, MemberAtom, NamedAtom]


# -------------------------------
# Boolean structure
# -------------------------------
@dataclass(frozen=True)
class PTrue:
    def render(self) -> str:
        return "true"


@dataclass(frozen=True)
class PFalse:
    def render(self) -> str:
        return "false"


@dataclass(frozen=True)
class PAtom:
    atom: Atom

    def render(self) -> str:
        return self.atom.render()


@dataclass(frozen=True)
class PNot:
    arg: "PredExpr"

    def render(self) -> str:
        return f"!{_wrap(self.arg)}"


@dataclass(frozen=True)
class PAnd:
    left: "PredExpr"
    right: "PredExpr"

    def render(self) -> str:
        return f"{_wrap(self.left)} && {_wrap(self.right)}"


@dataclass(frozen=True)
class POr:
    left: "PredExpr"
    right: "PredExpr"

    def render(self) -> str:
        return f"{_wrap(self.left)} || {_wrap(self.right)}"


PredExpr = Union[PTrue, PFalse, PAtom, PNot, PAnd, POr]

TRUE = PTrue()
FALSE = PFalse()


def _wrap(expr: PredExpr) -> str:
    if isinstance(expr, (PAnd, POr)):
        return f"({expr.render()})"
    return expr.render()


def iter_atoms(expr: PredExpr) -> Iterator[Atom]:
    """Atoms in left-to-right textual order, duplicates included."""
    if isinstance(expr, PAtom):
        yield expr.atom
    elif isinstance(expr, PNot):
        yield from iter_atoms(expr.arg)
    elif isinstance(expr, (PAnd, POr)):
        yield from iter_atoms(expr.left)
        yield from iter_atoms(expr.right)


def expand_named(expr: PredExpr) -> PredExpr:
    """Inline every NamedAtom by its body."""
    if isinstance(expr, PAtom):
        if isinstance(expr.atom, NamedAtom):
            return expand_named(expr.atom.body)
        return expr
    if isinstance(expr, PNot):
        return PNot(expand_named(expr.arg))
    if isinstance(expr, PAnd):
        return PAnd(expand_named(expr.left), expand_named(expr.right))
    if isinstance(expr, POr):
        return POr(expand_named(expr.left), expand_named(expr.right))
    return expr


def conjoin(*parts: PredExpr) -> PredExpr:
    result: PredExpr = TRUE
    for part in parts:
        result = part if isinstance(result, PTrue) else PAnd(result, part)
    return result


# -------------------------------
# Values
# -------------------------------
@dataclass(frozen=True)
class Predicate:
    """An element of an effective Boolean algebra."""

    algebra_id: str
    body: PredExpr

    def render(self) -> str:
        return self.body.render()

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Witness:
    """A domain element proving that a predicate is non-empty."""

    element: int
