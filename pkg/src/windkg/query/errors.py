class QueryError(Exception):
    """Base class for query parsing and execution errors."""


class QuerySyntaxError(QueryError):
    """Malformed query text.

    ``position`` is the 0-based character offset of the offending token,
    ``line``/``column`` its 1-based location, ``expected`` a short hint.
    """

    def __init__(self, message: str, position: int, line: int, column: int, expected: str | None = None):
        hint = f"; expected {expected}" if expected else ""
        super().__init__(f"{message} at line {line}, column {column}{hint}")
        self.position = position
        self.line = line
        self.column = column
        self.expected = expected


class UnboundVariable(QueryError):
    pass


class MissingParameter(QueryError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "missing parameter"


class TypeMismatch(QueryError, TypeError):
    pass
