"""
Symbolic finite automata and their propositional abstraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

from sfasat.core.exceptions import SemanticError
from sfasat.models.predicate import Atom, NamedAtom, Predicate
from sfasat.models.presburger import Formula


@dataclass(frozen=True)
class Transition:
    source: str
    guard: Predicate
    target: str


@dataclass(frozen=True)
class Sfa:
    """States, initial state, accepting states and guarded transitions over one algebra."""

    algebra_id: str
    states: Tuple[str, ...]
    initial: str
    accepting: frozenset
    transitions: Tuple[Transition, ...]
    # declared generator order (file input); None means first occurrence in guards
    declared_generators: Optional[Tuple[Atom, ...]] = None

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise SemanticError("Duplicate state declaration")
        known = set(self.states)
        if self.initial not in known:
            raise SemanticError(f"Unknown initial state {self.initial}")
        for state in self.accepting:
            if state not in known:
                raise SemanticError(f"Unknown accepting state {state}")
        unique = []
        for t in self.transitions:
            if t.source not in known or t.target not in known:
                raise SemanticError(f"Unknown state in transition {t.source} -> {t.target}")
            if t.guard.algebra_id != self.algebra_id:
                raise SemanticError(f"Guard of {t.source} -> {t.target} belongs to {t.guard.algebra_id}")
            if t not in unique:
                unique.append(t)
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", tuple(unique))

    @staticmethod
    def build(
        algebra_id: str,
        states,
        initial: str,
        accepting,
        transitions,
        declared_generators=None,
    ) -> "Sfa":
        """Convenience constructor from plain iterables of (source, guard, target)."""
        return Sfa(
            algebra_id=algebra_id,
            states=tuple(states),
            initial=initial,
            accepting=frozenset(accepting),
            transitions=tuple(
                t if isinstance(t, Transition) else Transition(*t) for t in transitions
            ),
            declared_generators=None if declared_generators is None else tuple(declared_generators),
        )


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered atomic predicates φ_1..φ_k from which every guard is built."""

    algebra_id: str
    generators: Tuple[Atom, ...]
    index: Dict[Atom, int] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {atom: i for i, atom in enumerate(self.generators)})

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(generator_name(atom) for atom in self.generators)

    def resolve(self, name: str) -> int:
        """Position of a generator by name or by its S<i> alias (1-based)."""
        for i, own in enumerate(self.names):
            if own == name:
                return i
        if name.startswith("S") and name[1:].isdigit() and 1 <= int(name[1:]) <= len(self.generators):
            return int(name[1:]) - 1
        raise SemanticError(f"Unknown generator {name}")


def generator_name(atom: Atom) -> str:
    if isinstance(atom, NamedAtom):
        return atom.name
    return atom.render()


# -------------------------------
# Propositional formulas over S_1..S_k
# -------------------------------
@dataclass(frozen=True)
class SVar:
    index: int  # 1-based

    def holds(self, bits: str) -> bool:
        return bits[self.index - 1] == "1"

    def render(self) -> str:
        return f"S{self.index}"


@dataclass(frozen=True)
class SConst:
    value: bool

    def holds(self, bits: str) -> bool:
        return self.value

    def render(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class SNot:
    arg: "PropFormula"

    def holds(self, bits: str) -> bool:
        return not self.arg.holds(bits)

    def render(self) -> str:
        inner = self.arg.render()
        return f"!{inner}" if isinstance(self.arg, (SVar, SConst)) else f"!({inner})"


@dataclass(frozen=True)
class SAnd:
    left: "PropFormula"
    right: "PropFormula"

    def holds(self, bits: str) -> bool:
        return self.left.holds(bits) and self.right.holds(bits)

    def render(self) -> str:
        return f"({self.left.render()} & {self.right.render()})"


@dataclass(frozen=True)
class SOr:
    left: "PropFormula"
    right: "PropFormula"

    def holds(self, bits: str) -> bool:
        return self.left.holds(bits) or self.right.holds(bits)

    def render(self) -> str:
        return f"({self.left.render()} | {self.right.render()})"


PropFormula = Union[SVar, SConst, SNot, SAnd, SOr]

# A minterm β is a bitstring of length k; β[i] = '1' iff the element satisfies φ_{i+1}.
Minterm = str
# A table is one minterm per word position.
Table = Tuple[Minterm, ...]


@dataclass(frozen=True)
class LetterTransition:
    source: str
    letter: int  # 0-based index into TableAutomaton.letters
    target: str


@dataclass(frozen=True)
class TableAutomaton:
    """The automaton graph with each guard replaced by a propositional letter."""

    states: Tuple[str, ...]
    initial: str
    accepting: frozenset
    transitions: Tuple[LetterTransition, ...]
    letters: Tuple[PropFormula, ...]

    @property
    def letter_count(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class CardinalityConstraint:
    """A set-cardinality formula over the generator sets of an automaton.

    Set variables name generators (declared predicate names or S<i> aliases);
    the universe is the index set 1..|w| of the word.
    """

    formula: Formula
    text: Optional[str] = None

    def render(self) -> str:
        return self.text if self.text is not None else self.formula.render()
