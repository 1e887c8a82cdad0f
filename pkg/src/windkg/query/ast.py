"""Query syntax tree and its canonical text form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union

from ..graph.io import quote_string

OPERATORS = ("=", "<>", "<", "<=", ">", ">=")
DIRECTIONS = ("out", "in", "undirected")


@dataclass(frozen=True)
class Param:
    name: str


Value = Union[str, int, float, bool, Param]


@dataclass(frozen=True)
class NodePattern:
    variable: str | None = None
    label: str | None = None
    properties: tuple[tuple[str, Value], ...] = ()


@dataclass(frozen=True)
class RelPattern:
    type: str | None = None
    direction: str = "out"

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")


@dataclass(frozen=True)
class PathPattern:
    nodes: tuple[NodePattern, ...]
    rels: tuple[RelPattern, ...] = ()

    def __post_init__(self):
        if len(self.nodes) != len(self.rels) + 1:
            raise ValueError("a path alternates node and relationship patterns, starting and ending with a node")


@dataclass(frozen=True)
class Predicate:
    variable: str
    prop: str
    op: str
    value: Value


@dataclass(frozen=True)
class ReturnItem:
    variable: str
    prop: str | None = None

    @property
    def column(self) -> str:
        return self.variable if self.prop is None else f"{self.variable}.{self.prop}"


@dataclass(frozen=True)
class Query:
    paths: tuple[PathPattern, ...]
    where: tuple[Predicate, ...] = ()
    returns: tuple[ReturnItem, ...] | None = None  # None means RETURN *

    @property
    def return_star(self) -> bool:
        return self.returns is None

    def variables(self) -> list[str]:
        """Named node variables in order of first appearance."""
        seen: dict[str, None] = {}
        for path in self.paths:
            for node in path.nodes:
                if node.variable is not None:
                    seen.setdefault(node.variable)
        return list(seen)

    def parameters(self) -> set[str]:
        names = set()
        for path in self.paths:
            for node in path.nodes:
                names.update(v.name for _, v in node.properties if isinstance(v, Param))
        names.update(p.value.name for p in self.where if isinstance(p.value, Param))
        return names

    def columns(self) -> list[str]:
        if self.returns is None:
            return self.variables()
        return [item.column for item in self.returns]


def render_literal(value: Value) -> str:
    if isinstance(value, Param):
        return f"${value.name}"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return quote_string(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    raise TypeError(f"not a query literal: {value!r}")


def _render_node(node: NodePattern) -> str:
    text = node.variable or ""
    if node.label:
        text += f":{node.label}"
    if node.properties:
        body = ",".join(f"{key}:{render_literal(value)}" for key, value in node.properties)
        text += (" " if text else "") + "{" + body + "}"
    return f"({text})"


def _render_rel(rel: RelPattern) -> str:
    inner = f"[:{rel.type}]" if rel.type else "[]"
    if rel.direction == "out":
        return f"-{inner}->"
    if rel.direction == "in":
        return f"<-{inner}-"
    return f"-{inner}-"


def unparse(query: Query) -> str:
    parts = []
    for path in query.paths:
        text = _render_node(path.nodes[0])
        for rel, node in zip(path.rels, path.nodes[1:]):
            text += _render_rel(rel) + _render_node(node)
        parts.append(text)
    out = "MATCH " + ", ".join(parts)
    if query.where:
        preds = [f"{p.variable}.{p.prop} {p.op} {render_literal(p.value)}" for p in query.where]
        out += " WHERE " + " AND ".join(preds)
    if query.returns is None:
        out += " RETURN *"
    else:
        out += " RETURN " + ", ".join(item.column for item in query.returns)
    return out
