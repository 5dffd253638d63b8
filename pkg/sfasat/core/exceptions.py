from typing import Optional


# -------------------------------
# Base Exception
# -------------------------------
class BaseSolverException(Exception):
    """Base solver exception with an error code and a process exit code."""

    exit_code: int = 2

    def __init__(self, detail: str, error_code: Optional[str] = None):
        super().__init__(detail)
        self.detail = detail
        self.error_code = error_code


# -------------------------------
# Input Exceptions
# -------------------------------
class ParseError(BaseSolverException):
    """Raised when predicate, formula or automaton text does not parse."""

    def __init__(
        self,
        detail: str = "Parse error",
        position: Optional[int] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.message = detail
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        elif position is not None:
            where.append(f"position {position}")
        if where:
            detail = f"{detail} ({', '.join(where)})"
        super().__init__(detail=detail, error_code="PARSE_ERROR")
        self.position = position
        self.line = line
        self.column = column


class SemanticError(BaseSolverException):
    """Raised when a parsed automaton refers to unknown names or bad parameters."""

    def __init__(self, detail: str = "Semantic error", line: Optional[int] = None):
        if line is not None:
            detail = f"{detail} (line {line})"
        super().__init__(detail=detail, error_code="SEMANTIC_ERROR")
        self.line = line


# -------------------------------
# Algebra Exceptions
# -------------------------------
class AlgebraMismatch(BaseSolverException):
    """Raised when predicates or elements of different algebras are combined."""

    def __init__(self, left: Optional[str] = None, right: Optional[str] = None):
        detail = "Algebra mismatch"
        if left and right:
            detail = f"Algebra mismatch: {left} vs {right}"
        super().__init__(detail=detail, error_code="ALGEBRA_MISMATCH")


class LengthMismatch(BaseSolverException):
    """Raised when a minterm does not match the generator count."""

    def __init__(self, expected: int, actual: int):
        super().__init__(
            detail=f"Expected a bitstring of length {expected}, got {actual}",
            error_code="LENGTH_MISMATCH",
        )


# -------------------------------
# Limit Exceptions
# -------------------------------
class BoundExceeded(BaseSolverException):
    """Raised when an enumeration oracle is asked for more than its guard allows."""

    def __init__(self, detail: str = "Enumeration bound exceeded"):
        super().__init__(detail=detail, error_code="BOUND_EXCEEDED")


class TooManySetVariables(BaseSolverException):
    """Raised when full Venn expansion would exceed E_MAX variables."""

    def __init__(self, count: int, limit: int, what: str = "set variables"):
        super().__init__(
            detail=f"{count} {what} exceed the expansion limit of {limit}",
            error_code="TOO_MANY_SET_VARIABLES",
        )
        self.count = count
        self.limit = limit


class TooManyGenerators(TooManySetVariables):
    """Raised when an automaton has more generators than E_MAX."""

    def __init__(self, count: int, limit: int):
        super().__init__(count, limit, what="generators")
        self.error_code = "TOO_MANY_GENERATORS"


class SolverLimitExceeded(BaseSolverException):
    """Raised when the arithmetic backend exceeds its branch or node limit."""

    def __init__(self, detail: str = "Solver limit exceeded"):
        super().__init__(detail=detail, error_code="SOLVER_LIMIT")


# -------------------------------
# Formula Exceptions
# -------------------------------
class UnsupportedTerm(BaseSolverException):
    """Raised when the arithmetic backend meets a set cardinality or set atom."""

    def __init__(self, detail: str = "Cardinality terms are not Presburger terms"):
        super().__init__(detail=detail, error_code="UNSUPPORTED_TERM")


class MissingVariable(BaseSolverException):
    """Raised when an assignment does not cover a formula variable."""

    def __init__(self, name: str):
        super().__init__(detail=f"No value for variable {name}", error_code="MISSING_VARIABLE")
        self.name = name


class MissingConcreteSets(BaseSolverException):
    """Raised when a set model without concrete sets is evaluated."""

    def __init__(self, detail: str = "Set model carries no concrete sets"):
        super().__init__(detail=detail, error_code="MISSING_CONCRETE_SETS")


# -------------------------------
# Pipeline Exceptions
# -------------------------------
class InvalidFlow(BaseSolverException):
    """Raised when a flow violates conservation or connectivity."""

    def __init__(self, detail: str = "Flow is not realizable as a path"):
        super().__init__(detail=detail, error_code="INVALID_FLOW")


class WitnessValidationError(BaseSolverException):
    """Raised when a constructed witness fails independent verification."""

    def __init__(self, detail: str = "Constructed witness failed verification"):
        super().__init__(detail=detail, error_code="WITNESS_INVALID")
