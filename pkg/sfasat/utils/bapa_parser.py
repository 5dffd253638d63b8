from typing import Dict, Optional, Sequence, Tuple

from pyparsing import (
    Forward,
    Keyword,
    Literal,
    OpAssoc,
    ParseBaseException,
    ParseFatalException,
    ParserElement,
    Regex,
    Suppress,
    infix_notation,
    one_of,
)

from sfasat.core.exceptions import ParseError
from sfasat.models.bapa import EMPTY, UNIVERSE, Card, SetComplement, SetEqual, SetIntersection, SetSubset, SetUnion, SetVar
from sfasat.models.presburger import BOTTOM, TOP, Add, And, Const, Dvd, Eq, Formula, IntVar, Le, Not, Or, Scale

ParserElement.enable_packrat()

RESERVED = {"U", "empty", "dvd", "sub", "true", "false"}

_ident = Regex(r"[A-Za-z_][A-Za-z0-9_]*")


def _chain(ctor):
    def action(tokens):
        items = tokens[0]
        result = items[0]
        for operand in items[2::2]:
            result = ctor(result, operand)
        return result

    return action


def _nary(ctor):
    def action(tokens):
        return ctor(tuple(tokens[0][0::2]))

    return action


def _scale(coef: int, term):
    if isinstance(term, Const):
        return Const(coef * term.value)
    return Scale(coef, term)


def _product(s, loc, tokens):
    items = tokens[0]
    result = items[0]
    for operand in items[2::2]:
        if isinstance(result, Const):
            result = _scale(result.value, operand)
        elif isinstance(operand, Const):
            result = _scale(operand.value, result)
        else:
            raise ParseFatalException(s, loc, "product of two non-constant terms")
    return result


def _sum(tokens):
    items = tokens[0]
    parts = [items[0]]
    for op, operand in zip(items[1::2], items[2::2]):
        parts.append(operand if op == "+" else _scale(-1, operand))
    return Add(tuple(parts))


def _comparison(tokens):
    left, op, right = tokens
    if op == "=":
        return Eq(left, right)
    if op == "!=":
        return Not(Eq(left, right))
    if op == "<=":
        return Le(left, right)
    if op == ">=":
        return Le(right, left)
    if op == "<":
        return Le(Add((left, Const(1))), right)
    return Le(Add((right, Const(1))), left)


def _build_grammar(set_vars: Optional[Tuple[str, ...]]) -> ParserElement:
    def is_set(name: str) -> bool:
        if set_vars is not None:
            return name in set_vars
        return name[:1].isupper()

    # sets
    set_name = (
        _ident.copy()
        .add_condition(lambda t: t[0] not in RESERVED and is_set(t[0]), message="expected a set variable")
        .set_parse_action(lambda t: SetVar(t[0]))
    )
    set_operand = (
        Keyword("U").set_parse_action(lambda: UNIVERSE)
        | Keyword("empty").set_parse_action(lambda: EMPTY)
        | set_name
    )
    set_expr = infix_notation(
        set_operand,
        [
            (Literal("~"), 1, OpAssoc.RIGHT, lambda t: SetComplement(t[0][1])),
            (Literal("&"), 2, OpAssoc.LEFT, _chain(SetIntersection)),
            (Literal("+"), 2, OpAssoc.LEFT, _chain(SetUnion)),
        ],
    )
    # outside cardinality bars a set atom takes single operands; compound sets go in parentheses
    set_primary = Forward()
    set_primary <<= (
        set_operand
        | (Suppress("~") + set_primary).set_parse_action(lambda t: SetComplement(t[0]))
        | (Suppress("(") + set_expr + Suppress(")"))
    )

    # integer terms
    int_name = (
        _ident.copy()
        .add_condition(lambda t: t[0] not in RESERVED and not is_set(t[0]), message="expected an integer variable")
        .set_parse_action(lambda t: IntVar(t[0]))
    )
    number = Regex(r"\d+").set_parse_action(lambda t: Const(int(t[0])))
    card = (Suppress("|") + set_expr + Suppress("|")).set_parse_action(lambda t: Card(t[0]))
    term = infix_notation(
        number | card | int_name,
        [
            (Literal("-"), 1, OpAssoc.RIGHT, lambda t: _scale(-1, t[0][1])),
            (Literal("*"), 2, OpAssoc.LEFT, _product),
            (one_of("+ -"), 2, OpAssoc.LEFT, _sum),
        ],
    )

    # atoms and formulas
    set_atom = (set_primary + (Literal("=") | Keyword("sub")) + set_primary).set_parse_action(
        lambda t: SetEqual(t[0], t[2]) if t[1] == "=" else SetSubset(t[0], t[2])
    )
    dvd_atom = (Regex(r"\d+") + Suppress(Keyword("dvd")) + term).set_parse_action(
        lambda t: Dvd(int(t[0]), t[1])
    )
    comparison = (term + one_of("<= >= != = < >") + term).set_parse_action(_comparison)
    constant = Keyword("true").set_parse_action(lambda: TOP) | Keyword("false").set_parse_action(lambda: BOTTOM)

    return infix_notation(
        constant | dvd_atom | set_atom | comparison,
        [
            (Literal("!"), 1, OpAssoc.RIGHT, lambda t: Not(t[0][1])),
            (Literal("&"), 2, OpAssoc.LEFT, _nary(And)),
            (Literal("|"), 2, OpAssoc.LEFT, _nary(Or)),
        ],
    )


class BapaParser:
    """Text front end for QFBAPA formulas."""

    _grammars: Dict[Optional[Tuple[str, ...]], ParserElement] = {}

    @staticmethod
    def parse(text: str, set_vars: Optional[Sequence[str]] = None) -> Formula:
        """
        Parse a formula. With `set_vars`, exactly those identifiers are set
        variables; without, identifiers with an uppercase initial are.
        """
        key = None if set_vars is None else tuple(set_vars)
        grammar = BapaParser._grammars.get(key)
        if grammar is None:
            grammar = BapaParser._grammars.setdefault(key, _build_grammar(key))
        try:
            return grammar.parse_string(text, parse_all=True)[0]
        except ParseBaseException as e:
            raise ParseError(f"Cannot parse {text!r}: {e.msg}", position=e.loc, column=e.col) from e
