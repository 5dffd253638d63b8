"""
Decide Service

Emptiness of symbolic automata, with and without cardinality constraints.

`check_sat` asks the element oracle once per letter and solves the Parikh
formula with unsatisfiable letters pinned to zero. `check_sat_card` adds one
counter c_{j,β} per letter and live Venn region, tying letter counts
(Σ_β c = k_j) to region cardinalities (Σ_j c = l_β) of the constraint's Venn
expansion. Witness words come from an Eulerian path through the flow, with
every position replaced by an oracle witness of its letter or region.
"""

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from sfasat.core.config import settings
from sfasat.core.exceptions import BoundExceeded, TooManyGenerators, WitnessValidationError
from sfasat.core.logging import get_logger
from sfasat.models.bapa import all_regions, rename_sets
from sfasat.models.presburger import Const, Eq, IntVar, conj, ge, total, variables
from sfasat.models.sfa import CardinalityConstraint, GeneratorSet, PropFormula, Sfa
from sfasat.schemas.bapa import SetModel
from sfasat.schemas.result import (
    Diagnostics,
    LetterProfile,
    LetterSatProfile,
    RegionProfile,
    SatResult,
    SatStatus,
)
from sfasat.services.algebra_service import AlgebraService
from sfasat.services.parikh_service import ParikhService
from sfasat.services.presburger_service import PresburgerService
from sfasat.services.qfbapa_service import QfbapaService
from sfasat.services.sfa_service import SfaService

logger = get_logger(__name__)

_RHO = "rho."


class RegionOracle:
    """Lazily computed, memoized element witnesses of Venn regions p_β."""

    def __init__(self, generators: GeneratorSet):
        self.generators = generators
        self._cache: Dict[str, Optional[int]] = {}
        self._lock = threading.Lock()

    def witness(self, beta: str) -> Optional[int]:
        with self._lock:
            if beta in self._cache:
                return self._cache[beta]
        found = AlgebraService.is_satisfiable(SfaService.minterm_predicate(beta, self.generators))
        element = None if found is None else found.element
        with self._lock:
            self._cache.setdefault(beta, element)
            return self._cache[beta]

    def witnesses(self, betas: Sequence[str]) -> Dict[str, Optional[int]]:
        """Witnesses for many regions; results keep the order of `betas`."""
        if settings.ORACLE_WORKERS > 1 and len(betas) > 1:
            with ThreadPoolExecutor(max_workers=settings.ORACLE_WORKERS) as pool:
                found = list(pool.map(self.witness, betas))
        else:
            found = [self.witness(beta) for beta in betas]
        return dict(zip(betas, found))


def _lettered_regions(letters: Sequence[PropFormula], k: int) -> List[str]:
    """Regions β (lexicographic) satisfying at least one letter."""
    return [beta for beta in all_regions(k) if any(letter.holds(beta) for letter in letters)]


def _canonical(constraint: CardinalityConstraint, generators: GeneratorSet):
    """The constraint with every set variable renamed to S<i> of its generator."""
    return rename_sets(constraint.formula, lambda name: f"S{generators.resolve(name) + 1}")


def _canonical_names(generators: GeneratorSet) -> Tuple[str, ...]:
    return tuple(f"S{i + 1}" for i in range(len(generators)))


class DecideService:
    """Service for automaton satisfiability"""

    @staticmethod
    def letter_profile(sfa: Sfa) -> LetterSatProfile:
        table, letters = SfaService.propositionalize(sfa)
        generators = SfaService.generators(sfa)
        guards = SfaService.letter_guards(sfa, table)

        letter_entries = []
        for letter, guard in zip(letters, guards):
            found = AlgebraService.is_satisfiable(guard)
            letter_entries.append(
                LetterProfile(
                    letter=letter.render(),
                    guard=guard.body.render(),
                    satisfiable=found is not None,
                    witness=None if found is None else found.element,
                )
            )

        regions: List[RegionProfile] = []
        if len(generators) <= settings.E_MAX:
            oracle = RegionOracle(generators)
            found = oracle.witnesses(_lettered_regions(letters, len(generators)))
            regions = [
                RegionProfile(region=beta, satisfiable=element is not None, witness=element)
                for beta, element in found.items()
            ]
        return LetterSatProfile(generators=list(generators.names), letters=letter_entries, regions=regions)

    @staticmethod
    def check_sat(sfa: Sfa) -> SatResult:
        table, letters = SfaService.propositionalize(sfa)
        guards = SfaService.letter_guards(sfa, table)
        witnesses = [AlgebraService.is_satisfiable(guard) for guard in guards]

        parikh = ParikhService.parikh_formula(table)
        pinned = [
            Eq(IntVar(name), Const(0)) for name, found in zip(parikh.letter_vars, witnesses) if found is None
        ]
        model = PresburgerService.pa_solve(conj(parikh.formula, *pinned))
        if model is None:
            logger.info(f"check_sat: UNSAT ({table.letter_count} letters, {len(pinned)} empty)")
            return SatResult(status=SatStatus.UNSAT)

        flow = ParikhService.flow_from_model(parikh, model)
        path = ParikhService.realize_path(table, flow)
        word = [witnesses[j].element for j in path]
        if not DecideService.verify_witness(sfa, None, word):
            logger.error(f"check_sat: witness {word} rejected")
            raise WitnessValidationError(f"Witness {word} is not accepted")

        logger.info(f"check_sat: SAT, witness of length {len(word)}")
        return SatResult(
            status=SatStatus.SAT,
            witness=word,
            diagnostics=Diagnostics(
                k=dict(zip(parikh.letter_vars, ParikhService.letter_counts(parikh, model))),
                flow=flow.flow,
            ),
        )

    @staticmethod
    def check_sat_card(sfa: Sfa, constraint: CardinalityConstraint) -> SatResult:
        generators = SfaService.generators(sfa)
        if len(generators) > settings.E_MAX:
            raise TooManyGenerators(len(generators), settings.E_MAX)
        table, letters = SfaService.propositionalize(sfa)
        set_vars = _canonical_names(generators)
        formula = _canonical(constraint, generators)

        oracle = RegionOracle(generators)
        region_witness = oracle.witnesses(_lettered_regions(letters, len(generators)))
        live = [beta for beta, element in region_witness.items() if element is not None]

        venn = QfbapaService.venn_expand(QfbapaService.rewrite_atoms(formula), live, set_vars)
        parikh = ParikhService.parikh_formula(table, prefix=_RHO)

        counters: Dict[Tuple[int, str], IntVar] = {
            (j, beta): IntVar(f"c.{j + 1}.{beta}")
            for j, letter in enumerate(letters)
            for beta in live
            if letter.holds(beta)
        }
        by_letter = [
            Eq(IntVar(name), total(c for (j, _), c in counters.items() if j == index))
            for index, name in enumerate(parikh.letter_vars)
        ]
        by_region = [
            Eq(IntVar(QfbapaService.region_var(beta)), total(c for (_, b), c in counters.items() if b == beta))
            for beta in live
        ]
        nonnegative = [ge(c, Const(0)) for c in counters.values()]

        model = PresburgerService.pa_solve(conj(venn, parikh.formula, *by_letter, *by_region, *nonnegative))
        p, a = QfbapaService.solve_profile(formula)
        bound = QfbapaService.sparsity_bound(p, a)
        if model is None:
            logger.info(f"check_sat_card: UNSAT ({len(live)} live regions)")
            return SatResult(status=SatStatus.UNSAT, diagnostics=Diagnostics(sparsity_bound=bound))

        flow = ParikhService.flow_from_model(parikh, model)
        path = ParikhService.realize_path(table, flow)
        remaining = {key: model.get(c.name, 0) for key, c in counters.items()}
        word = []
        for j in path:
            beta = next(b for b in live if remaining.get((j, b), 0) > 0)
            remaining[(j, beta)] -= 1
            word.append(region_witness[beta])

        if not DecideService.verify_witness(sfa, constraint, word):
            logger.error(f"check_sat_card: witness {word} rejected")
            raise WitnessValidationError(f"Witness {word} fails the automaton or the constraint")

        l_beta = {beta: model.get(QfbapaService.region_var(beta), 0) for beta in live}
        logger.info(f"check_sat_card: SAT, witness of length {len(word)}")
        return SatResult(
            status=SatStatus.SAT,
            witness=word,
            diagnostics=Diagnostics(
                l_beta=l_beta,
                k={name[len(_RHO):]: value for name, value in zip(parikh.letter_vars, ParikhService.letter_counts(parikh, model))},
                flow=flow.flow,
                regions_nonzero=sum(1 for count in l_beta.values() if count > 0),
                sparsity_bound=bound,
            ),
        )

    @staticmethod
    def prune_check(sfa: Sfa) -> SatResult:
        """Prune-and-reach with a witness along a shortest path of satisfiable guards."""
        graph = nx.DiGraph()
        graph.add_nodes_from(sfa.states)
        for t in sfa.transitions:
            if graph.has_edge(t.source, t.target):
                continue
            found = AlgebraService.is_satisfiable(t.guard)
            if found is not None:
                graph.add_edge(t.source, t.target, element=found.element)

        paths = nx.single_source_shortest_path(graph, sfa.initial)
        targets = [q for q in sfa.states if q in sfa.accepting and q in paths]
        if not targets:
            return SatResult(status=SatStatus.UNSAT)
        best = min(targets, key=lambda q: len(paths[q]))
        states = paths[best]
        word = [graph.edges[u, v]["element"] for u, v in zip(states, states[1:])]
        return SatResult(status=SatStatus.SAT, witness=word)

    @staticmethod
    def verify_witness(sfa: Sfa, constraint: Optional[CardinalityConstraint], word: Sequence[int]) -> bool:
        if not SfaService.accepts(sfa, word):
            return False
        if constraint is None:
            return True
        generators = SfaService.generators(sfa)
        table = SfaService.table_of(sfa, word)
        return DecideService._constraint_holds(constraint, generators, table)

    @staticmethod
    def _constraint_holds(constraint: CardinalityConstraint, generators: GeneratorSet, table: Sequence[str]) -> bool:
        set_vars = _canonical_names(generators)
        formula = _canonical(constraint, generators)
        regions: Dict[str, int] = {}
        for beta in table:
            regions[beta] = regions.get(beta, 0) + 1

        if variables(formula):
            # free integers are existential: pin the word's region counts and solve for them
            listed = sorted(regions)
            venn = QfbapaService.venn_expand(QfbapaService.rewrite_atoms(formula), listed, set_vars)
            pinned = [Eq(IntVar(QfbapaService.region_var(beta)), Const(regions[beta])) for beta in listed]
            return PresburgerService.pa_solve(conj(venn, *pinned)) is not None

        sets = {
            name: [n + 1 for n, beta in enumerate(table) if beta[i] == "1"] for i, name in enumerate(set_vars)
        }
        model = SetModel(set_vars=list(set_vars), universe=len(table), regions=regions, sets=sets)
        return QfbapaService.eval_bapa(formula, model)

    @staticmethod
    def brute_force_check(
        sfa: Sfa,
        constraint: Optional[CardinalityConstraint],
        domain: Sequence[int],
        max_len: int,
    ) -> SatResult:
        """
        First accepted word (by length, then lexicographically over `domain`)
        satisfying the constraint. UNSAT only means none exists within the bounds.
        """
        words = sum(len(domain) ** n for n in range(max_len + 1))
        if words > settings.BRUTE_MAX_WORDS:
            raise BoundExceeded(f"{words} candidate words exceed the limit of {settings.BRUTE_MAX_WORDS}")

        algebra = AlgebraService.get(sfa.algebra_id)
        generators = SfaService.generators(sfa)
        # elements with equal minterms are interchangeable; keep the first of each
        representatives: Dict[str, int] = {}
        for element in domain:
            representatives.setdefault(SfaService.minterm_of(algebra.check_element(element), generators), element)
        alphabet = [(beta, element) for element in domain for beta, rep in representatives.items() if rep == element]
        enabled = {
            element: [t for t in sfa.transitions if algebra.evaluate(t.guard, element)] for _, element in alphabet
        }

        verdicts: Dict[Tuple[str, ...], bool] = {}

        def admissible(table: Tuple[str, ...]) -> bool:
            if constraint is None:
                return True
            key = tuple(sorted(table))
            if key not in verdicts:
                verdicts[key] = DecideService._constraint_holds(constraint, generators, table)
            return verdicts[key]

        def search(states: frozenset, table: Tuple[str, ...], word: List[int], left: int) -> Optional[List[int]]:
            if left == 0:
                return list(word) if states & sfa.accepting and admissible(table) else None
            for beta, element in alphabet:
                following = frozenset(t.target for t in enabled[element] if t.source in states)
                if not following:
                    continue
                found = search(following, table + (beta,), word + [element], left - 1)
                if found is not None:
                    return found
            return None

        diagnostics = Diagnostics(brute_domain=list(domain), brute_max_len=max_len, complete=False)
        for length in range(max_len + 1):
            found = search(frozenset({sfa.initial}), (), [], length)
            if found is not None:
                if not DecideService.verify_witness(sfa, constraint, found):
                    raise WitnessValidationError(f"Brute-force witness {found} failed verification")
                logger.info(f"brute_force_check: SAT at length {length}")
                return SatResult(status=SatStatus.SAT, witness=found, diagnostics=diagnostics)
        logger.info(f"brute_force_check: no word up to length {max_len}")
        return SatResult(status=SatStatus.UNSAT, diagnostics=diagnostics)

    @staticmethod
    def check(sfa: Sfa, constraint: Optional[CardinalityConstraint] = None) -> SatResult:
        if constraint is None:
            return DecideService.check_sat(sfa)
        return DecideService.check_sat_card(sfa, constraint)
