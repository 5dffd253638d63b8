"""
Existential Presburger arithmetic: terms, atoms, connectives.

Terms: integer constants, integer variables, sums, constant multiples.
Atoms: T1 = T2, T1 <= T2, K dvd T. Connectives are n-ary. An `Exists` node
binds variables; every variable of a formula is read existentially anyway, so
the node only records which ones are internal to a construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Tuple, Union

from sfasat.core.exceptions import UnsupportedTerm


# -------------------------------
# Terms
# -------------------------------
@dataclass(frozen=True)
class Const:
    value: int

    def render(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class IntVar:
    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class Add:
    args: Tuple["Term", ...]

    def render(self) -> str:
        return " + ".join(a.render() for a in self.args)


@dataclass(frozen=True)
class Scale:
    coef: int
    term: "Term"

    def render(self) -> str:
        inner = self.term.render()
        if isinstance(self.term, Add):
            inner = f"({inner})"
        return f"{self.coef}*{inner}"


# Card (set cardinality) lives with the set language and is a Term there too.
Term = Union[Const, IntVar, Add, Scale, "Card"]  # noqa: F821


# -------------------------------
# Atoms
# -------------------------------
@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term

    def render(self) -> str:
        return f"{self.left.render()} = {self.right.render()}"


@dataclass(frozen=True)
class Le:
    left: Term
    right: Term

    def render(self) -> str:
        return f"{self.left.render()} <= {self.right.render()}"


@dataclass(frozen=True)
class Dvd:
    modulus: int
    term: Term

    def render(self) -> str:
        inner = self.term.render()
        if isinstance(self.term, Add):
            inner = f"({inner})"
        return f"{self.modulus} dvd {inner}"


# -------------------------------
# Connectives
# -------------------------------
@dataclass(frozen=True)
class Top:
    def render(self) -> str:
        return "true"


@dataclass(frozen=True)
class Bottom:
    def render(self) -> str:
        return "false"


@dataclass(frozen=True)
class And:
    args: Tuple["Formula", ...]

    def render(self) -> str:
        return " & ".join(_group(a) for a in self.args) if self.args else "true"


@dataclass(frozen=True)
class Or:
    args: Tuple["Formula", ...]

    def render(self) -> str:
        return " | ".join(_group(a) for a in self.args) if self.args else "false"


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def render(self) -> str:
        return f"!({self.arg.render()})"


@dataclass(frozen=True)
class Exists:
    names: Tuple[str, ...]
    body: "Formula"

    def render(self) -> str:
        return f"exists {' '.join(self.names)}. ({self.body.render()})"


Formula = Union[Top, Bottom, Eq, Le, Dvd, And, Or, Not, Exists, "SetEqual", "SetSubset"]  # noqa: F821

TOP = Top()
BOTTOM = Bottom()


def _group(formula: "Formula") -> str:
    if isinstance(formula, (And, Or)) and len(formula.args) > 1:
        return f"({formula.render()})"
    return formula.render()


# -------------------------------
# Builders
# -------------------------------
def var(name: str) -> IntVar:
    return IntVar(name)


def const(value: int) -> Const:
    return Const(value)


def total(terms: Iterable[Term]) -> Term:
    """Sum of terms; the empty sum is 0."""
    items = tuple(terms)
    if not items:
        return Const(0)
    if len(items) == 1:
        return items[0]
    return Add(items)


def conj(*formulas: "Formula") -> "Formula":
    items = tuple(f for f in formulas if not isinstance(f, Top))
    if any(isinstance(f, Bottom) for f in items):
        return BOTTOM
    if not items:
        return TOP
    return items[0] if len(items) == 1 else And(items)


def disj(*formulas: "Formula") -> "Formula":
    items = tuple(f for f in formulas if not isinstance(f, Bottom))
    if any(isinstance(f, Top) for f in items):
        return TOP
    if not items:
        return BOTTOM
    return items[0] if len(items) == 1 else Or(items)


def ge(left: Term, right: Term) -> Le:
    return Le(right, left)


# -------------------------------
# Traversal
# -------------------------------
def iter_nodes(node) -> Iterator[object]:
    """Every AST node (formulas and terms), pre-order."""
    yield node
    if isinstance(node, (And, Or, Add)):
        for arg in node.args:
            yield from iter_nodes(arg)
    elif isinstance(node, (Eq, Le)):
        yield from iter_nodes(node.left)
        yield from iter_nodes(node.right)
    elif isinstance(node, Dvd):
        yield from iter_nodes(node.term)
    elif isinstance(node, Scale):
        yield from iter_nodes(node.term)
    elif isinstance(node, Not):
        yield from iter_nodes(node.arg)
    elif isinstance(node, Exists):
        yield from iter_nodes(node.body)


def node_count(formula: "Formula") -> int:
    return sum(1 for _ in iter_nodes(formula))


def variables(formula: "Formula") -> Tuple[str, ...]:
    """All integer variable names, first occurrence order (bound ones included)."""
    seen: Dict[str, None] = {}
    for node in iter_nodes(formula):
        if isinstance(node, Exists):
            for name in node.names:
                seen.setdefault(name, None)
        elif isinstance(node, IntVar):
            seen.setdefault(node.name, None)
    return tuple(seen)


def free_variables(formula: "Formula") -> Tuple[str, ...]:
    bound = set()
    for node in iter_nodes(formula):
        if isinstance(node, Exists):
            bound.update(node.names)
    return tuple(name for name in variables(formula) if name not in bound)


# -------------------------------
# Linear normal form
# -------------------------------
@dataclass(frozen=True)
class LinearExpr:
    """Σ coeffs[v]·v + constant, zero coefficients dropped."""

    coeffs: Tuple[Tuple[str, int], ...]
    constant: int

    def value(self, assignment: Dict[str, int]) -> int:
        return sum(c * assignment[v] for v, c in self.coeffs) + self.constant


def linearize(term: Term) -> LinearExpr:
    coeffs: Dict[str, int] = {}
    constant = _accumulate(term, 1, coeffs)
    return LinearExpr(tuple((v, c) for v, c in coeffs.items() if c != 0), constant)


def _accumulate(term: Term, factor: int, coeffs: Dict[str, int]) -> int:
    if isinstance(term, Const):
        return factor * term.value
    if isinstance(term, IntVar):
        coeffs[term.name] = coeffs.get(term.name, 0) + factor
        return 0
    if isinstance(term, Add):
        return sum(_accumulate(arg, factor, coeffs) for arg in term.args)
    if isinstance(term, Scale):
        return _accumulate(term.term, factor * term.coef, coeffs)
    raise UnsupportedTerm(f"Not a Presburger term: {type(term).__name__}")
