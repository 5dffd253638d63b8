"""
Line-oriented automaton files.

    algebra lia            # or: algebra bv 6
    pred odd "x % 2 == 1"
    pred pos "x > 0"
    states q0 q1
    initial q0
    accepting q0
    trans q0 q1 (odd & pos)
    trans q1 q0 (odd & pos)
    cardinality "|odd & pos| = 2"

Each `pred` becomes one generator, in declaration order. Guards combine
predicate names with `&`, `|`, `!`, parentheses, `true` and `false`.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from pyparsing import (
    Group,
    Keyword,
    ParseBaseException,
    QuotedString,
    Regex,
    ZeroOrMore,
    python_style_comment,
)

from sfasat.core.exceptions import ParseError, SemanticError
from sfasat.models.predicate import NamedAtom, PAnd, PAtom, PFalse, PNot, POr, PredExpr, Predicate, PTrue
from sfasat.models.sfa import CardinalityConstraint, Sfa, Transition, generator_name
from sfasat.services.algebra_service import AlgebraService
from sfasat.services.sfa_service import SfaService
from sfasat.utils.bapa_parser import RESERVED, BapaParser
from sfasat.utils.predicate_parser import PredicateParser

_name = Regex(r"[A-Za-z_][A-Za-z0-9_]*")
_state = Regex(r"[A-Za-z0-9_]+")
_quoted = QuotedString('"', esc_char="\\")

_STATEMENT = (
    Group(Keyword("algebra") + (Keyword("lia") | Keyword("bv") + Regex(r"-?\d+")))
    | Group(Keyword("pred") + _name + _quoted)
    | Group(Keyword("states") + ZeroOrMore(_state))
    | Group(Keyword("initial") + _state)
    | Group(Keyword("accepting") + ZeroOrMore(_state))
    | Group(Keyword("trans") + _state + _state + Regex(r"[^#]+"))
    | Group(Keyword("cardinality") + _quoted)
)
_STATEMENT.ignore(python_style_comment)

# S<i> names the i-th generator inside cardinality constraints
_ALIAS = re.compile(r"S\d+")


@dataclass
class _Draft:
    algebra_id: Optional[str] = None
    predicates: Dict[str, NamedAtom] = field(default_factory=dict)
    states: List[str] = field(default_factory=list)
    initial: Optional[Tuple[str, int]] = None
    accepting: List[Tuple[str, int]] = field(default_factory=list)
    # source, target, guard text, line, column offset of the guard
    transitions: List[Tuple[str, str, str, int, int]] = field(default_factory=list)
    cardinality: Optional[Tuple[str, int, int]] = None


def parse_sfa_file(text: str) -> Tuple[Sfa, Optional[CardinalityConstraint]]:
    draft = _Draft()
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            tokens = _STATEMENT.parse_string(line, parse_all=True)[0]
        except ParseBaseException as e:
            raise ParseError(f"Cannot parse statement: {e.msg}", line=number, column=e.col) from e
        _apply(draft, list(tokens), number, line)
    return _finish(draft)


def _relocated(error: ParseError, line: int, offset: int) -> ParseError:
    """An error inside embedded text, located by line and column of the file."""
    column = None if error.column is None else offset + error.column
    return ParseError(error.message, line=line, column=column)


def _quoted_offset(text: str) -> int:
    return text.index('"') + 1


def _apply(draft: _Draft, tokens: List[str], line: int, text: str) -> None:
    keyword = tokens[0]
    if keyword == "algebra":
        if draft.algebra_id is not None:
            raise SemanticError("Algebra declared twice", line=line)
        width = int(tokens[2]) if len(tokens) > 2 else None
        try:
            draft.algebra_id = AlgebraService.declare(tokens[1], width).algebra_id
        except SemanticError as e:
            raise SemanticError(e.detail, line=line) from e
    elif keyword == "pred":
        if draft.algebra_id is None:
            raise SemanticError("Predicate declared before the algebra", line=line)
        name = tokens[1]
        if name in RESERVED or _ALIAS.fullmatch(name):
            raise SemanticError(f"Predicate name {name} is reserved in cardinality constraints", line=line)
        if name in draft.predicates:
            raise SemanticError(f"Predicate {name} declared twice", line=line)
        try:
            body = AlgebraService.parse_predicate(tokens[2], draft.algebra_id).body
        except ParseError as e:
            raise _relocated(e, line, _quoted_offset(text)) from e
        draft.predicates[name] = NamedAtom(name, body)
    elif keyword == "states":
        for state in tokens[1:]:
            if state in draft.states:
                raise SemanticError(f"State {state} declared twice", line=line)
            draft.states.append(state)
    elif keyword == "initial":
        if draft.initial is not None:
            raise SemanticError("Initial state declared twice", line=line)
        draft.initial = (tokens[1], line)
    elif keyword == "accepting":
        draft.accepting.extend((state, line) for state in tokens[1:])
    elif keyword == "trans":
        guard = tokens[3].strip()
        draft.transitions.append((tokens[1], tokens[2], guard, line, text.split("#", 1)[0].rfind(guard)))
    elif keyword == "cardinality":
        if draft.cardinality is not None:
            raise SemanticError("Cardinality constraint declared twice", line=line)
        draft.cardinality = (tokens[1], line, _quoted_offset(text))


def _finish(draft: _Draft) -> Tuple[Sfa, Optional[CardinalityConstraint]]:
    if draft.algebra_id is None:
        raise SemanticError("Missing algebra declaration")
    if draft.initial is None:
        raise SemanticError("Missing initial state")
    known = set(draft.states)

    def require(state: str, line: int) -> str:
        if state not in known:
            raise SemanticError(f"Unknown state {state}", line=line)
        return state

    initial = require(*draft.initial)
    accepting = [require(state, line) for state, line in draft.accepting]
    transitions = []
    for source, target, guard_text, line, offset in draft.transitions:
        require(source, line)
        require(target, line)
        try:
            body = PredicateParser.parse_guard(guard_text, draft.predicates)
        except ParseError as e:
            raise _relocated(e, line, offset) from e
        except SemanticError as e:
            raise SemanticError(e.detail, line=line) from e
        transitions.append(Transition(source, Predicate(draft.algebra_id, body), target))

    sfa = Sfa.build(
        draft.algebra_id,
        draft.states,
        initial,
        accepting,
        transitions,
        declared_generators=list(draft.predicates.values()),
    )

    constraint = None
    if draft.cardinality is not None:
        text, line, offset = draft.cardinality
        names = list(draft.predicates) + [f"S{i + 1}" for i in range(len(draft.predicates))]
        try:
            formula = BapaParser.parse(text, set_vars=names)
        except ParseError as e:
            raise _relocated(e, line, offset) from e
        constraint = CardinalityConstraint(formula=formula, text=text)
    return sfa, constraint


def render_guard(expr: PredExpr) -> str:
    if isinstance(expr, PTrue):
        return "true"
    if isinstance(expr, PFalse):
        return "false"
    if isinstance(expr, PAtom):
        return generator_name(expr.atom)
    if isinstance(expr, PNot):
        return f"!{_group(expr.arg)}"
    op = "&" if isinstance(expr, PAnd) else "|"
    return f"{_group(expr.left)} {op} {_group(expr.right)}"


def _group(expr: PredExpr) -> str:
    if isinstance(expr, (PAnd, POr)):
        return f"({render_guard(expr)})"
    return render_guard(expr)


def render_sfa_file(sfa: Sfa, constraint: Optional[CardinalityConstraint] = None) -> str:
    """Print an automaton in the file format; unnamed generators are named p1, p2, ..."""
    generators = SfaService.generators(sfa)
    names: Dict[object, str] = {}
    lines = []
    if sfa.algebra_id == "lia":
        lines.append("algebra lia")
    else:
        lines.append(f"algebra bv {sfa.algebra_id[2:]}")
    for i, atom in enumerate(generators.generators):
        if isinstance(atom, NamedAtom):
            names[atom] = atom.name
            body = atom.body.render()
        else:
            names[atom] = f"p{i + 1}"
            body = atom.render()
        escaped = body.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'pred {names[atom]} "{escaped}"')
    lines.append("states " + " ".join(sfa.states))
    lines.append(f"initial {sfa.initial}")
    lines.append("accepting " + " ".join(q for q in sfa.states if q in sfa.accepting))
    for t in sfa.transitions:
        lines.append(f"trans {t.source} {t.target} ({render_guard(_rename(t.guard.body, names))})")
    if constraint is not None:
        lines.append(f'cardinality "{constraint.render()}"')
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _rename(expr: PredExpr, names: Dict[object, str]) -> PredExpr:
    if isinstance(expr, PAtom):
        return PAtom(NamedAtom(names[expr.atom], PTrue()))
    if isinstance(expr, PNot):
        return PNot(_rename(expr.arg, names))
    if isinstance(expr, (PAnd, POr)):
        return type(expr)(_rename(expr.left, names), _rename(expr.right, names))
    return expr
