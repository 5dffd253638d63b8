# sfasat/seed/factories.py
from typing import List, Optional, Sequence

from faker import Faker

from sfasat.models.bapa import UNIVERSE, Card, SetComplement, SetEqual, SetIntersection, SetSubset, SetUnion, SetVar
from sfasat.models.predicate import COMPARISONS, LinearAtom, ModAtom, PAnd, PAtom, PNot, POr, PredExpr, Predicate
from sfasat.models.presburger import And, Const, Dvd, Eq, Le, Not, Or
from sfasat.models.sfa import CardinalityConstraint, LetterTransition, Sfa, SVar, TableAutomaton


class InstanceFactory:
    """Seeded random automata, constraints and formulas for the oracle suites."""

    def __init__(self, seed: int = 0):
        self.fake = Faker()
        self.fake.seed_instance(seed)

    def _int(self, low: int, high: int) -> int:
        return self.fake.random_int(min=low, max=high)

    def _pick(self, items: Sequence):
        return items[self._int(0, len(items) - 1)]

    # -------------------------------
    # Element predicates
    # -------------------------------
    def integer_atom(self, limit: int = 4):
        if self.fake.pybool():
            modulus = self._int(1, limit)
            return ModAtom(modulus, self._int(0, modulus - 1))
        coef = self._pick([c for c in range(-limit, limit + 1) if c != 0])
        return LinearAtom(coef, self._int(-limit, limit), self._pick(COMPARISONS), self._int(-limit, limit))

    def combination(self, atoms: Sequence, depth: int = 2) -> PredExpr:
        if depth == 0 or self._int(0, 2) == 0:
            leaf: PredExpr = PAtom(self._pick(atoms))
            return PNot(leaf) if self._int(0, 3) == 0 else leaf
        left = self.combination(atoms, depth - 1)
        right = self.combination(atoms, depth - 1)
        return PAnd(left, right) if self.fake.pybool() else POr(left, right)

    def integer_predicate(self, atom_count: int = 3, depth: int = 2) -> Predicate:
        atoms = [self.integer_atom() for _ in range(atom_count)]
        return Predicate("lia", self.combination(atoms, depth))

    # -------------------------------
    # Automata
    # -------------------------------
    def sfa(self, max_states: int = 6, max_generators: int = 4, max_transitions: int = 6) -> Sfa:
        states = [f"q{i}" for i in range(self._int(1, max_states))]
        pool = list(dict.fromkeys(self.integer_atom() for _ in range(self._int(1, max_generators))))
        transitions = []
        for _ in range(self._int(1, max_transitions)):
            guard = Predicate("lia", self.combination(pool, depth=1))
            transitions.append((self._pick(states), guard, self._pick(states)))
        accepting = [q for q in states if self._int(0, 2) == 0]
        return Sfa.build("lia", states, states[0], accepting, transitions)

    def table_automaton(self, max_states: int = 5, max_letters: int = 4, max_transitions: int = 8) -> TableAutomaton:
        states = tuple(f"q{i}" for i in range(self._int(1, max_states)))
        letters = tuple(SVar(j + 1) for j in range(self._int(1, max_letters)))
        transitions = tuple(
            dict.fromkeys(
                LetterTransition(self._pick(states), self._int(0, len(letters) - 1), self._pick(states))
                for _ in range(self._int(1, max_transitions))
            )
        )
        accepting = frozenset(q for q in states if self._int(0, 2) == 0)
        return TableAutomaton(states, states[0], accepting, transitions, letters)

    @staticmethod
    def chain_automaton(length: int, letters: int = 2) -> TableAutomaton:
        """q0 -> q1 -> ... -> q{n-1}, letters used round robin, last state accepting."""
        states = tuple(f"q{i}" for i in range(length))
        transitions = tuple(LetterTransition(states[i], i % letters, states[i + 1]) for i in range(length - 1))
        return TableAutomaton(
            states, states[0], frozenset({states[-1]}), transitions, tuple(SVar(j + 1) for j in range(letters))
        )

    # -------------------------------
    # Set formulas
    # -------------------------------
    def set_expr(self, names: Sequence[str], depth: int = 1):
        if not names:
            return UNIVERSE
        if depth == 0 or self.fake.pybool():
            leaf = SetVar(self._pick(names))
            return SetComplement(leaf) if self._int(0, 3) == 0 else leaf
        left, right = self.set_expr(names, depth - 1), self.set_expr(names, depth - 1)
        return SetIntersection(left, right) if self.fake.pybool() else SetUnion(left, right)

    def cardinality_atom(self, names: Sequence[str], limit: int):
        term = Card(self.set_expr(names))
        bound = Const(self._int(0, limit))
        kind = self._int(0, 2)
        if kind == 0:
            return Eq(term, bound)
        if kind == 1:
            return Le(term, bound)
        return Le(bound, term)

    def cardinality_constraint(self, generator_count: int, max_atoms: int = 2, limit: int = 3) -> CardinalityConstraint:
        names = [f"S{i + 1}" for i in range(generator_count)]
        atoms = [self.cardinality_atom(names, limit) for _ in range(self._int(1, max_atoms))]
        formula = atoms[0] if len(atoms) == 1 else (And(tuple(atoms)) if self.fake.pybool() else Or(tuple(atoms)))
        return CardinalityConstraint(formula=formula)

    def bapa_formula(self, set_vars: Optional[List[str]] = None, max_atoms: int = 3, limit: int = 4):
        names = set_vars if set_vars is not None else ["A", "B", "C"][: self._int(1, 3)]
        atoms = []
        for _ in range(self._int(1, max_atoms)):
            kind = self._int(0, 5)
            if kind == 0:
                atoms.append(SetSubset(self.set_expr(names), self.set_expr(names)))
            elif kind == 1:
                atoms.append(SetEqual(self.set_expr(names), self.set_expr(names)))
            elif kind == 2:
                atoms.append(Dvd(self._int(1, limit), Card(self.set_expr(names))))
            else:
                atoms.append(self.cardinality_atom(names, limit))
            if self._int(0, 4) == 0:
                atoms[-1] = Not(atoms[-1])
        if len(atoms) == 1:
            return atoms[0]
        return And(tuple(atoms)) if self._int(0, 2) else Or(tuple(atoms))
