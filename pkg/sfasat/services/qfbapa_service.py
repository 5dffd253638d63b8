"""
QFBAPA Service

Set atoms are rewritten into cardinality constraints, every cardinality term
is expanded into a sum over Venn regions, and the resulting linear system is
handed to the Presburger backend. A solution lists a cardinality l_β for every
region; concrete sets follow by handing out consecutive indices region by
region in lexicographic β order.
"""

import math
from typing import Dict, List, Optional, Sequence, Tuple

from sfasat.core.config import settings
from sfasat.core.exceptions import MissingConcreteSets, MissingVariable, TooManySetVariables, UnsupportedTerm
from sfasat.core.logging import get_logger
from sfasat.models.bapa import (
    Card,
    EmptySet,
    SetComplement,
    SetEqual,
    SetExpr,
    SetIntersection,
    SetSubset,
    SetUnion,
    SetVar,
    Universe,
    all_regions,
    cardinality_terms,
    in_region,
    iter_bapa_nodes,
    set_variables,
)
from sfasat.models.presburger import (
    Add,
    And,
    Bottom,
    Const,
    Dvd,
    Eq,
    Exists,
    Formula,
    IntVar,
    Le,
    Not,
    Or,
    Scale,
    Top,
    conj,
    ge,
    total,
    variables,
)
from sfasat.schemas.bapa import SetModel, SparseCertificate
from sfasat.services.presburger_service import IntAssignment, PresburgerService

logger = get_logger(__name__)


def _subset(left: SetExpr, right: SetExpr) -> Formula:
    return Eq(Card(SetIntersection(left, SetComplement(right))), Const(0))


class QfbapaService:
    """Service for quantifier-free BAPA formulas"""

    @staticmethod
    def rewrite_atoms(formula: Formula) -> Formula:
        """Replace B1 = B2 and B1 ⊆ B2 by cardinality atoms."""
        if isinstance(formula, SetSubset):
            return _subset(formula.left, formula.right)
        if isinstance(formula, SetEqual):
            return And((_subset(formula.left, formula.right), _subset(formula.right, formula.left)))
        if isinstance(formula, (And, Or)):
            return type(formula)(tuple(QfbapaService.rewrite_atoms(arg) for arg in formula.args))
        if isinstance(formula, Not):
            return Not(QfbapaService.rewrite_atoms(formula.arg))
        if isinstance(formula, Exists):
            return Exists(formula.names, QfbapaService.rewrite_atoms(formula.body))
        return formula

    @staticmethod
    def region_var(beta: str, prefix: str = "") -> str:
        return f"{prefix}l.{beta}"

    @staticmethod
    def card_var(index: int, prefix: str = "") -> str:
        return f"{prefix}card.{index}"

    @staticmethod
    def venn_expand(
        formula: Formula,
        regions: Sequence[str],
        set_vars: Sequence[str],
        prefix: str = "",
    ) -> Formula:
        """
        Arithmetic form of a rewritten formula restricted to the listed regions:
        each |b_i| becomes a variable card.i defined as the sum of l_β over the
        listed β inside b_i, and every listed l_β is non-negative.
        """
        cards = cardinality_terms(formula)
        names = {card: QfbapaService.card_var(i, prefix) for i, card in enumerate(cards)}
        body = _replace_cards(formula, names)

        definitions = []
        for card in cards:
            inside = [IntVar(QfbapaService.region_var(beta, prefix)) for beta in regions if in_region(card.arg, beta, set_vars)]
            definitions.append(Eq(IntVar(names[card]), total(inside)))
        nonnegative = [ge(IntVar(QfbapaService.region_var(beta, prefix)), Const(0)) for beta in regions]
        return conj(body, *definitions, *nonnegative)

    @staticmethod
    def solve_profile(formula: Formula) -> Tuple[int, int]:
        """(p, a): number of cardinality terms after rewriting, largest absolute constant."""
        rewritten = QfbapaService.rewrite_atoms(formula)
        largest = 1
        for node in iter_bapa_nodes(rewritten):
            if isinstance(node, Const):
                largest = max(largest, abs(node.value))
            elif isinstance(node, Scale):
                largest = max(largest, abs(node.coef))
            elif isinstance(node, Dvd):
                largest = max(largest, abs(node.modulus))
        return len(cardinality_terms(rewritten)), largest

    @staticmethod
    def sparsity_bound(p: int, a: int) -> int:
        """Most non-zero regions any satisfiable instance needs: ceil(SCALE·d·log2(4·d·a)), d = p + 1."""
        d = p + 1
        return math.ceil(settings.SPARSITY_SCALE * d * math.log2(4 * d * max(a, 1)))

    @staticmethod
    def qfbapa_solve(formula: Formula, set_vars: Optional[Sequence[str]] = None) -> Optional[SetModel]:
        set_vars = tuple(set_vars) if set_vars is not None else set_variables(formula)
        if len(set_vars) > settings.E_MAX:
            raise TooManySetVariables(len(set_vars), settings.E_MAX)

        regions = all_regions(len(set_vars))
        rewritten = QfbapaService.rewrite_atoms(formula)
        expanded = QfbapaService.venn_expand(rewritten, regions, set_vars)
        assignment = PresburgerService.pa_solve(expanded)
        if assignment is None:
            logger.info(f"qfbapa_solve: UNSAT over {len(set_vars)} set variables")
            return None

        model = QfbapaService.model_from_assignment(formula, assignment, set_vars, regions)
        logger.info(f"qfbapa_solve: SAT with universe {model.universe}")
        return model

    @staticmethod
    def model_from_assignment(
        formula: Formula,
        assignment: IntAssignment,
        set_vars: Sequence[str],
        regions: Sequence[str],
        prefix: str = "",
    ) -> SetModel:
        counts = {beta: assignment.get(QfbapaService.region_var(beta, prefix), 0) for beta in regions}
        sets: Dict[str, List[int]] = {name: [] for name in set_vars}
        next_index = 1
        for beta in sorted(counts):
            members = range(next_index, next_index + counts[beta])
            next_index += counts[beta]
            for name, bit in zip(set_vars, beta):
                if bit == "1":
                    sets[name].extend(members)
        user_vars = [name for name in variables(formula) if name in assignment]
        return SetModel(
            set_vars=list(set_vars),
            universe=next_index - 1,
            regions=counts,
            integers={name: assignment[name] for name in user_vars},
            sets=sets,
        )

    @staticmethod
    def qfbapa_verify(formula: Formula, certificate: SparseCertificate) -> bool:
        """Accept iff the listed regions and assignment satisfy the restricted expansion."""
        set_vars = tuple(certificate.set_vars)
        p, a = QfbapaService.solve_profile(formula)
        if certificate.size > QfbapaService.sparsity_bound(p, a):
            return False
        if len(set(certificate.regions)) != certificate.size:
            return False
        for beta in certificate.regions:
            if len(beta) != len(set_vars) or any(bit not in "01" for bit in beta):
                return False
        try:
            expanded = QfbapaService.venn_expand(QfbapaService.rewrite_atoms(formula), certificate.regions, set_vars)
            return PresburgerService.pa_eval(expanded, certificate.assignment)
        except (MissingVariable, KeyError):
            return False

    @staticmethod
    def qfbapa_certificate(formula: Formula, set_vars: Optional[Sequence[str]] = None) -> Optional[SparseCertificate]:
        """A certificate for a satisfiable formula, its region support greedily made sparse."""
        set_vars = tuple(set_vars) if set_vars is not None else set_variables(formula)
        model = QfbapaService.qfbapa_solve(formula, set_vars)
        if model is None:
            return None

        rewritten = QfbapaService.rewrite_atoms(formula)
        support = [beta for beta in sorted(model.regions) if model.regions[beta] > 0]
        expanded = QfbapaService.venn_expand(rewritten, support, set_vars)
        assignment = PresburgerService.pa_solve(expanded)
        for beta in list(support):
            smaller = [other for other in support if other != beta]
            candidate = PresburgerService.pa_solve(QfbapaService.venn_expand(rewritten, smaller, set_vars))
            if candidate is not None:
                support, assignment = smaller, candidate

        expanded = QfbapaService.venn_expand(rewritten, support, set_vars)
        needed = set(variables(expanded))
        certificate = SparseCertificate(
            set_vars=list(set_vars),
            regions=support,
            assignment={name: value for name, value in assignment.items() if name in needed},
        )
        logger.debug(f"qfbapa_certificate: {certificate.size} regions")
        return certificate

    @staticmethod
    def eval_bapa(formula: Formula, model: SetModel) -> bool:
        if model.sets is None:
            raise MissingConcreteSets()
        universe = frozenset(range(1, model.universe + 1))
        sets = {name: frozenset(members) for name, members in model.sets.items()}
        return _holds(formula, universe, sets, model.integers)


def _replace_cards(node, names: Dict[Card, str]):
    if isinstance(node, Card):
        return IntVar(names[node])
    if isinstance(node, (And, Or, Add)):
        return type(node)(tuple(_replace_cards(arg, names) for arg in node.args))
    if isinstance(node, (Eq, Le)):
        return type(node)(_replace_cards(node.left, names), _replace_cards(node.right, names))
    if isinstance(node, Dvd):
        return Dvd(node.modulus, _replace_cards(node.term, names))
    if isinstance(node, Scale):
        return Scale(node.coef, _replace_cards(node.term, names))
    if isinstance(node, Not):
        return Not(_replace_cards(node.arg, names))
    if isinstance(node, Exists):
        return Exists(node.names, _replace_cards(node.body, names))
    if isinstance(node, (SetEqual, SetSubset)):
        raise UnsupportedTerm("Set atoms must be rewritten before Venn expansion")
    return node


def _set_value(expr: SetExpr, universe: frozenset, sets: Dict[str, frozenset]) -> frozenset:
    if isinstance(expr, SetVar):
        if expr.name not in sets:
            raise MissingVariable(expr.name)
        return sets[expr.name]
    if isinstance(expr, EmptySet):
        return frozenset()
    if isinstance(expr, Universe):
        return universe
    if isinstance(expr, SetUnion):
        return _set_value(expr.left, universe, sets) | _set_value(expr.right, universe, sets)
    if isinstance(expr, SetIntersection):
        return _set_value(expr.left, universe, sets) & _set_value(expr.right, universe, sets)
    return universe - _set_value(expr.arg, universe, sets)


def _term_value(term, universe, sets, integers) -> int:
    if isinstance(term, Const):
        return term.value
    if isinstance(term, IntVar):
        if term.name not in integers:
            raise MissingVariable(term.name)
        return integers[term.name]
    if isinstance(term, Add):
        return sum(_term_value(arg, universe, sets, integers) for arg in term.args)
    if isinstance(term, Scale):
        return term.coef * _term_value(term.term, universe, sets, integers)
    return len(_set_value(term.arg, universe, sets))


def _holds(formula, universe, sets, integers) -> bool:
    if isinstance(formula, Top):
        return True
    if isinstance(formula, Bottom):
        return False
    if isinstance(formula, Exists):
        return _holds(formula.body, universe, sets, integers)
    if isinstance(formula, Not):
        return not _holds(formula.arg, universe, sets, integers)
    if isinstance(formula, And):
        return all(_holds(arg, universe, sets, integers) for arg in formula.args)
    if isinstance(formula, Or):
        return any(_holds(arg, universe, sets, integers) for arg in formula.args)
    if isinstance(formula, SetEqual):
        return _set_value(formula.left, universe, sets) == _set_value(formula.right, universe, sets)
    if isinstance(formula, SetSubset):
        return _set_value(formula.left, universe, sets) <= _set_value(formula.right, universe, sets)
    if isinstance(formula, Eq):
        return _term_value(formula.left, universe, sets, integers) == _term_value(formula.right, universe, sets, integers)
    if isinstance(formula, Le):
        return _term_value(formula.left, universe, sets, integers) <= _term_value(formula.right, universe, sets, integers)
    value = _term_value(formula.term, universe, sets, integers)
    return value == 0 if formula.modulus == 0 else value % formula.modulus == 0
