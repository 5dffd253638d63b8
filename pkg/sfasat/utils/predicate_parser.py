from typing import Callable, Dict

from pyparsing import (
    Keyword,
    Literal,
    OpAssoc,
    Optional as Opt,
    ParseBaseException,
    ParseFatalException,
    ParserElement,
    Regex,
    Suppress,
    delimited_list,
    infix_notation,
    one_of,
)

from sfasat.core.exceptions import ParseError, SemanticError
from sfasat.models.predicate import (
    FALSE,
    TRUE,
    LinearAtom,
    MemberAtom,
    ModAtom,
    NamedAtom,
    PAnd,
    PAtom,
    PNot,
    POr,
    PredExpr,
)

ParserElement.enable_packrat()


def _fold(ctor: Callable[[PredExpr, PredExpr], PredExpr]):
    def action(tokens):
        items = tokens[0]
        result = items[0]
        for operand in items[2::2]:
            result = ctor(result, operand)
        return result

    return action


def _negate(tokens):
    return PNot(tokens[0][1])


def _boolean_grammar(operand: ParserElement, not_op: str, and_op: str, or_op: str) -> ParserElement:
    constant = Keyword("true").set_parse_action(lambda: TRUE) | Keyword("false").set_parse_action(
        lambda: FALSE
    )
    return infix_notation(
        constant | operand,
        [
            (Literal(not_op), 1, OpAssoc.RIGHT, _negate),
            (Literal(and_op), 2, OpAssoc.LEFT, _fold(PAnd)),
            (Literal(or_op), 2, OpAssoc.LEFT, _fold(POr)),
        ],
    )


# -------------------------------
# Integer algebra
# -------------------------------
_nat = Regex(r"\d+").set_parse_action(lambda t: int(t[0]))
_int = Regex(r"[+-]?\d+").set_parse_action(lambda t: int(t[0]))
_x = Regex(r"x(?![A-Za-z0-9_])")


def _build_mod(s, loc, tokens):
    modulus, residue = tokens[1], tokens[2]
    if modulus < 1:
        raise ParseFatalException(s, loc, "modulus must be at least 1")
    return PAtom(ModAtom(modulus, residue % modulus))


def _build_linear(tokens):
    offset = tokens.get("offset", 0)
    if tokens.get("sign") == "-":
        offset = -offset
    return PAtom(LinearAtom(tokens.get("coef", 1), offset, tokens["op"], tokens["bound"]))


_mod_atom = (_x + Suppress("%") + _nat + Suppress("==") + _int).set_parse_action(_build_mod)
_linear_atom = (
    Opt(_int("coef") + Opt(Suppress("*")))
    + _x
    + Opt(one_of("+ -")("sign") + _nat("offset"))
    + one_of("<= >= == != < >")("op")
    + _int("bound")
).set_parse_action(_build_linear)

INTEGER_GRAMMAR = _boolean_grammar(_mod_atom | _linear_atom, "!", "&&", "||")


# -------------------------------
# Bitvector algebra
# -------------------------------
def _member_grammar(width: int) -> ParserElement:
    def build(s, loc, tokens):
        values = sorted(set(tokens))
        for value in values:
            if value >= 1 << width:
                raise ParseFatalException(s, loc, f"value {value} does not fit in {width} bits")
        return PAtom(MemberAtom(tuple(values)))

    member = (Suppress(Keyword("in")) + Suppress("{") + delimited_list(_nat) + Suppress("}")).set_parse_action(build)
    return _boolean_grammar(member, "!", "&&", "||")


# -------------------------------
# Guards over declared predicate names
# -------------------------------
_name = Regex(r"[A-Za-z_][A-Za-z0-9_]*").set_parse_action(lambda t: PAtom(NamedAtom(t[0], TRUE)))

GUARD_GRAMMAR = _boolean_grammar(_name, "!", "&", "|")


class PredicateParser:
    """Text front end for element predicates and automaton guards."""

    _bitvector_grammars: Dict[int, ParserElement] = {}

    @staticmethod
    def parse_integer(text: str) -> PredExpr:
        return PredicateParser._run(INTEGER_GRAMMAR, text)

    @staticmethod
    def parse_bitvector(text: str, width: int) -> PredExpr:
        grammar = PredicateParser._bitvector_grammars.get(width)
        if grammar is None:
            grammar = PredicateParser._bitvector_grammars.setdefault(width, _member_grammar(width))
        return PredicateParser._run(grammar, text)

    @staticmethod
    def parse_guard(text: str, declared: Dict[str, NamedAtom]) -> PredExpr:
        """Parse a guard over declared predicate names, resolving each name."""
        return PredicateParser._resolve(PredicateParser._run(GUARD_GRAMMAR, text), declared)

    @staticmethod
    def _resolve(expr: PredExpr, declared: Dict[str, NamedAtom]) -> PredExpr:
        if isinstance(expr, PAtom):
            name = expr.atom.name
            if name not in declared:
                raise SemanticError(f"Unknown predicate {name}")
            return PAtom(declared[name])
        if isinstance(expr, PNot):
            return PNot(PredicateParser._resolve(expr.arg, declared))
        if isinstance(expr, (PAnd, POr)):
            return type(expr)(
                PredicateParser._resolve(expr.left, declared),
                PredicateParser._resolve(expr.right, declared),
            )
        return expr

    @staticmethod
    def _run(grammar: ParserElement, text: str) -> PredExpr:
        try:
            return grammar.parse_string(text, parse_all=True)[0]
        except ParseBaseException as e:
            raise ParseError(f"Cannot parse {text!r}: {e.msg}", position=e.loc, column=e.col) from e
