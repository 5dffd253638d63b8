"""
Selftest Service

Oracle-agreement suites over seeded random instances: the decision procedures
against prune-and-reach and brute force, Parikh formulas against breadth-first
enumeration, and the QFBAPA solver against exhaustive set models.
"""

from typing import Iterator, List, Sequence, Tuple

from sfasat.core.logging import get_logger
from sfasat.models.bapa import all_regions, set_variables
from sfasat.models.presburger import TOP, Const, Eq, IntVar, conj
from sfasat.models.sfa import CardinalityConstraint
from sfasat.schemas.bapa import SetModel
from sfasat.schemas.result import SuiteReport
from sfasat.seed.factories import InstanceFactory
from sfasat.services.decide_service import DecideService
from sfasat.services.parikh_service import ParikhService
from sfasat.services.presburger_service import PresburgerService
from sfasat.services.qfbapa_service import QfbapaService
from sfasat.services.sfa_service import SfaService

logger = get_logger(__name__)

BRUTE_DOMAIN = tuple(range(-8, 9))


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Every tuple of `parts` non-negative integers adding up to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in compositions(total - head, parts - 1):
            yield (head,) + rest


def enumerate_set_models(set_vars: Sequence[str], max_universe: int) -> Iterator[SetModel]:
    """Set models over universes 0..max_universe, one per region-count vector."""
    regions = all_regions(len(set_vars))
    for universe in range(max_universe + 1):
        for counts in compositions(universe, len(regions)):
            sets = {name: [] for name in set_vars}
            index = 1
            for beta, count in zip(regions, counts):
                for name, bit in zip(set_vars, beta):
                    if bit == "1":
                        sets[name].extend(range(index, index + count))
                index += count
            yield SetModel(
                set_vars=list(set_vars),
                universe=universe,
                regions=dict(zip(regions, counts)),
                sets=sets,
            )


def count_vectors(letters: int, total: int) -> Iterator[Tuple[int, ...]]:
    for size in range(total + 1):
        yield from compositions(size, letters)


class SelftestService:
    """Service for the oracle-agreement suites"""

    @staticmethod
    def plain_agreement(
        count: int = 500, seed: int = 0, domain: Sequence[int] = BRUTE_DOMAIN, max_len: int = 4
    ) -> SuiteReport:
        factory = InstanceFactory(seed)
        report = SuiteReport(name="plain", instances=count)
        for i in range(count):
            sfa = factory.sfa()
            result = DecideService.check_sat(sfa)
            reachable = SfaService.prune_and_reach(sfa)
            if result.is_sat != reachable:
                report.failures.append(f"#{i}: check_sat={result.status.value} prune_and_reach={reachable}")
                continue
            if result.is_sat and not DecideService.verify_witness(sfa, None, result.witness):
                report.failures.append(f"#{i}: witness {result.witness} rejected")
            brute = DecideService.brute_force_check(sfa, None, domain, max_len)
            if brute.is_sat and not result.is_sat:
                report.failures.append(f"#{i}: brute force found {brute.witness}, check_sat says UNSAT")
        return report

    @staticmethod
    def cardinality_agreement(
        count: int = 200, seed: int = 1, domain: Sequence[int] = BRUTE_DOMAIN, max_len: int = 4
    ) -> SuiteReport:
        factory = InstanceFactory(seed)
        report = SuiteReport(name="cardinality", instances=count)
        for i in range(count):
            sfa = factory.sfa()
            constraint = factory.cardinality_constraint(len(SfaService.generators(sfa)))
            result = DecideService.check_sat_card(sfa, constraint)
            brute = DecideService.brute_force_check(sfa, constraint, domain, max_len)
            if brute.is_sat and not result.is_sat:
                report.failures.append(f"#{i}: brute force found {brute.witness} for {constraint.render()}")
            if (
                result.is_sat
                and len(result.witness) <= max_len
                and all(element in domain for element in result.witness)
                and not brute.is_sat
            ):
                report.failures.append(f"#{i}: witness {result.witness} missed by brute force")

            plain = DecideService.check_sat(sfa)
            trivial = DecideService.check_sat_card(sfa, CardinalityConstraint(formula=TOP))
            if plain.status != trivial.status:
                report.failures.append(f"#{i}: constraint `true` changes {plain.status.value}")
        return report

    @staticmethod
    def parikh_agreement(count: int = 100, seed: int = 2, length: int = 6) -> SuiteReport:
        factory = InstanceFactory(seed)
        report = SuiteReport(name="parikh", instances=count)
        for i in range(count):
            automaton = factory.table_automaton()
            members = ParikhService.parikh_members_upto(automaton, length)
            parikh = ParikhService.parikh_formula(automaton)
            for counts in count_vectors(automaton.letter_count, length):
                pinned = [Eq(IntVar(name), Const(c)) for name, c in zip(parikh.letter_vars, counts)]
                admitted = PresburgerService.pa_solve(conj(parikh.formula, *pinned)) is not None
                if admitted != (counts in members):
                    report.failures.append(f"#{i}: counts {counts} admitted={admitted}")
        return report

    @staticmethod
    def parikh_linearity(sizes: Sequence[int] = range(5, 51)) -> SuiteReport:
        report = SuiteReport(name="linearity", instances=len(sizes))
        for n in sizes:
            automaton = InstanceFactory.chain_automaton(n)
            nodes = ParikhService.parikh_formula(automaton).node_count
            if nodes > ParikhService.size_bound(automaton):
                report.failures.append(f"chain of {n}: {nodes} nodes")
        return report

    @staticmethod
    def qfbapa_agreement(count: int = 300, seed: int = 3, max_universe: int = 8) -> SuiteReport:
        factory = InstanceFactory(seed)
        report = SuiteReport(name="qfbapa", instances=count)
        for i in range(count):
            formula = factory.bapa_formula()
            set_vars = set_variables(formula)
            model = QfbapaService.qfbapa_solve(formula, set_vars)
            if model is not None and not QfbapaService.eval_bapa(formula, model):
                report.failures.append(f"#{i}: model fails {formula.render()}")
                continue
            enumerated = any(
                QfbapaService.eval_bapa(formula, candidate)
                for candidate in enumerate_set_models(set_vars, max_universe)
            )
            if enumerated and model is None:
                report.failures.append(f"#{i}: UNSAT but enumeration satisfies {formula.render()}")
            if model is not None:
                certificate = QfbapaService.qfbapa_certificate(formula, set_vars)
                if certificate is None or not QfbapaService.qfbapa_verify(formula, certificate):
                    report.failures.append(f"#{i}: no sparse certificate for {formula.render()}")
        return report

    @staticmethod
    def run_all(scale: float = 1.0, seed: int = 0) -> List[SuiteReport]:
        def scaled(n: int) -> int:
            return max(1, int(n * scale))

        reports = [
            SelftestService.plain_agreement(scaled(500), seed),
            SelftestService.cardinality_agreement(scaled(200), seed + 1),
            SelftestService.parikh_agreement(scaled(100), seed + 2),
            SelftestService.parikh_linearity(),
            SelftestService.qfbapa_agreement(scaled(300), seed + 3),
        ]
        for report in reports:
            if report.passed:
                logger.info(f"selftest {report.name}: {report.instances} instances agree")
            else:
                logger.error(f"selftest {report.name}: {len(report.failures)} failures")
        return reports


__all__ = ["SelftestService", "compositions", "enumerate_set_models", "count_vectors"]
