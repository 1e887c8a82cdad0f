from .ast import NodePattern, Param, PathPattern, Predicate, Query, RelPattern, ReturnItem, unparse
from .errors import MissingParameter, QueryError, QuerySyntaxError, TypeMismatch, UnboundVariable
from .executor import ResultTable, execute, match_bindings
from .parser import parse, tokenize

__all__ = [
    "MissingParameter",
    "NodePattern",
    "Param",
    "PathPattern",
    "Predicate",
    "Query",
    "QueryError",
    "QuerySyntaxError",
    "RelPattern",
    "ResultTable",
    "ReturnItem",
    "TypeMismatch",
    "UnboundVariable",
    "execute",
    "match_bindings",
    "parse",
    "tokenize",
    "unparse",
]
