# Import the domain types so callers can use `from sfasat.models import ...`
from .predicate import Predicate, Witness, LinearAtom, ModAtom, MemberAtom, NamedAtom
from .sfa import Sfa, Transition, GeneratorSet, TableAutomaton, LetterTransition, CardinalityConstraint
from .presburger import Const, IntVar, Add, Scale, Eq, Le, Dvd, And, Or, Not, Exists, TOP, BOTTOM
from .bapa import SetVar, SetUnion, SetIntersection, SetComplement, Card, SetEqual, SetSubset, EMPTY, UNIVERSE

__all__ = [
    "Predicate",
    "Witness",
    "LinearAtom",
    "ModAtom",
    "MemberAtom",
    "NamedAtom",
    "Sfa",
    "Transition",
    "GeneratorSet",
    "TableAutomaton",
    "LetterTransition",
    "CardinalityConstraint",
    "Const",
    "IntVar",
    "Add",
    "Scale",
    "Eq",
    "Le",
    "Dvd",
    "And",
    "Or",
    "Not",
    "Exists",
    "TOP",
    "BOTTOM",
    "SetVar",
    "SetUnion",
    "SetIntersection",
    "SetComplement",
    "Card",
    "SetEqual",
    "SetSubset",
    "EMPTY",
    "UNIVERSE",
]
