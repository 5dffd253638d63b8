"""
SFA Service

Word acceptance, generator extraction, propositionalization into a table
automaton, minterm helpers, and the classical prune-and-reach emptiness check.
"""

from typing import Dict, List, Sequence, Set, Tuple

import networkx as nx

from sfasat.core.exceptions import LengthMismatch, SemanticError
from sfasat.core.logging import get_logger
from sfasat.models.predicate import (
    TRUE,
    Atom,
    PAnd,
    PAtom,
    PFalse,
    PNot,
    POr,
    PredExpr,
    Predicate,
    PTrue,
    conjoin,
    iter_atoms,
)
from sfasat.models.sfa import (
    GeneratorSet,
    LetterTransition,
    Minterm,
    PropFormula,
    SAnd,
    SConst,
    Sfa,
    SNot,
    SOr,
    SVar,
    Table,
    TableAutomaton,
)
from sfasat.services.algebra_service import AlgebraService

logger = get_logger(__name__)


class SfaService:
    """Service for symbolic automaton operations"""

    @staticmethod
    def accepts(sfa: Sfa, word: Sequence[int]) -> bool:
        """Subset simulation; the empty word is accepted iff the initial state accepts."""
        algebra = AlgebraService.get(sfa.algebra_id)
        current: Set[str] = {sfa.initial}
        for element in word:
            algebra.check_element(element)
            current = {
                t.target
                for t in sfa.transitions
                if t.source in current and algebra.evaluate(t.guard, element)
            }
            if not current:
                return False
        return bool(current & sfa.accepting)

    @staticmethod
    def generators(sfa: Sfa) -> GeneratorSet:
        """Distinct atoms of all guards, in first-occurrence order unless declared."""
        seen: Dict[Atom, None] = {}
        for t in sfa.transitions:
            for atom in iter_atoms(t.guard.body):
                seen.setdefault(atom, None)
        if sfa.declared_generators is None:
            return GeneratorSet(sfa.algebra_id, tuple(seen))

        declared = tuple(dict.fromkeys(sfa.declared_generators))
        missing = [atom for atom in seen if atom not in declared]
        if missing:
            raise SemanticError(f"Guard atom {missing[0].render()} is not a declared generator")
        return GeneratorSet(sfa.algebra_id, declared)

    @staticmethod
    def propositionalize(sfa: Sfa) -> Tuple[TableAutomaton, List[PropFormula]]:
        """Replace each guard by its propositional letter over S_1..S_k."""
        generators = SfaService.generators(sfa)
        letters: Dict[PropFormula, int] = {}
        transitions = []
        for t in sfa.transitions:
            letter = SfaService.to_prop(t.guard.body, generators)
            index = letters.setdefault(letter, len(letters))
            transitions.append(LetterTransition(t.source, index, t.target))

        letter_list = list(letters)
        table = TableAutomaton(
            states=sfa.states,
            initial=sfa.initial,
            accepting=sfa.accepting,
            transitions=tuple(transitions),
            letters=tuple(letter_list),
        )
        logger.debug(f"propositionalized: k={len(generators)} m={len(letter_list)} |Δ|={len(transitions)}")
        return table, letter_list

    @staticmethod
    def to_prop(body: PredExpr, generators: GeneratorSet) -> PropFormula:
        if isinstance(body, PTrue):
            return SConst(True)
        if isinstance(body, PFalse):
            return SConst(False)
        if isinstance(body, PAtom):
            return SVar(generators.index[body.atom] + 1)
        if isinstance(body, PNot):
            return SNot(SfaService.to_prop(body.arg, generators))
        if isinstance(body, PAnd):
            return SAnd(SfaService.to_prop(body.left, generators), SfaService.to_prop(body.right, generators))
        if isinstance(body, POr):
            return SOr(SfaService.to_prop(body.left, generators), SfaService.to_prop(body.right, generators))
        raise TypeError(f"Not a predicate expression: {body!r}")

    @staticmethod
    def letter_guards(sfa: Sfa, table: TableAutomaton) -> List[Predicate]:
        """One original guard per letter (the first transition carrying it)."""
        guards: Dict[int, Predicate] = {}
        for t, lt in zip(sfa.transitions, table.transitions):
            guards.setdefault(lt.letter, t.guard)
        return [guards[j] for j in range(table.letter_count)]

    @staticmethod
    def minterm_predicate(beta: Minterm, generators: GeneratorSet) -> Predicate:
        """⋀ φ_i where β_i = 1 and ¬φ_i where β_i = 0; ⊤ for the empty bitstring."""
        if len(beta) != len(generators):
            raise LengthMismatch(len(generators), len(beta))
        parts = [
            PAtom(atom) if bit == "1" else PNot(PAtom(atom))
            for atom, bit in zip(generators.generators, beta)
        ]
        return Predicate(generators.algebra_id, conjoin(*parts) if parts else TRUE)

    @staticmethod
    def minterm_of(element: int, generators: GeneratorSet) -> Minterm:
        algebra = AlgebraService.get(generators.algebra_id)
        return "".join(
            "1" if algebra.evaluate(Predicate(generators.algebra_id, PAtom(atom)), element) else "0"
            for atom in generators.generators
        )

    @staticmethod
    def table_of(sfa: Sfa, word: Sequence[int]) -> Table:
        generators = SfaService.generators(sfa)
        return tuple(SfaService.minterm_of(element, generators) for element in word)

    @staticmethod
    def table_accepts(table_automaton: TableAutomaton, table: Table) -> bool:
        """Run the table automaton on minterms, reading each letter as a propositional test."""
        current: Set[str] = {table_automaton.initial}
        for beta in table:
            current = {
                t.target
                for t in table_automaton.transitions
                if t.source in current and table_automaton.letters[t.letter].holds(beta)
            }
            if not current:
                return False
        return bool(current & table_automaton.accepting)

    @staticmethod
    def prune_and_reach(sfa: Sfa) -> bool:
        """Drop transitions with empty guards, then search for a reachable accepting state."""
        graph = nx.DiGraph()
        graph.add_nodes_from(sfa.states)
        for t in sfa.transitions:
            if AlgebraService.is_satisfiable(t.guard) is not None:
                graph.add_edge(t.source, t.target)
        reachable = nx.descendants(graph, sfa.initial) | {sfa.initial}
        result = bool(reachable & sfa.accepting)
        logger.debug(f"prune_and_reach: {len(reachable)} reachable states -> {result}")
        return result
