"""Pattern-matching executor.

Matching is depth-first backtracking. For every path the node pattern with the
fewest candidates (after label and inline-property filtering) is used as the
anchor and the path is expanded outwards from it in both directions. A
relationship may be bound at most once within one path match; nodes may repeat.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from ..graph.store import NodeRecord, PropertyGraph
from .ast import NodePattern, Param, PathPattern, Predicate, Query
from .errors import MissingParameter, TypeMismatch
from .parser import parse


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def column(self, name: str) -> list[Any]:
        return [row[name] for row in self.rows]


def _kind(value: Any) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "text"
    if isinstance(value, (list, tuple)):
        return "list"
    raise TypeMismatch(f"unsupported value {value!r}")


def values_equal(a: Any, b: Any) -> bool:
    """Equality used by inline property maps: different variants never match."""
    ka, kb = _kind(a), _kind(b)
    if ka != kb:
        return False
    if ka == "list":
        return tuple(a) == tuple(b)
    return a == b


def compare(op: str, left: Any, right: Any) -> bool:
    kl, kr = _kind(left), _kind(right)
    if kl != kr:
        raise TypeMismatch(f"cannot compare {kl} {left!r} with {kr} {right!r}")
    if op in ("=", "<>"):
        same = tuple(left) == tuple(right) if kl == "list" else left == right
        return same if op == "=" else not same
    if kl in ("boolean", "list"):
        raise TypeMismatch(f"operator {op} is not defined for {kl} values")
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    raise ValueError(f"unknown operator {op!r}")


def _resolve(value: Any, params: Mapping[str, Any]) -> Any:
    if isinstance(value, Param):
        if value.name not in params:
            raise MissingParameter(f"parameter ${value.name} was not supplied")
        return params[value.name]
    return value


def _node_matches(node: NodeRecord, label: str | None, constraints: list[tuple[str, Any]]) -> bool:
    if label is not None and label not in node.labels:
        return False
    for key, expected in constraints:
        if key not in node.properties or not values_equal(node.properties[key], expected):
            return False
    return True


class _Plan:
    """Per-execution data: slot names, resolved constraints, candidate sets."""

    def __init__(self, graph: PropertyGraph, query: Query, params: Mapping[str, Any]):
        self.graph = graph
        self.slots: list[list[str]] = []
        self.candidates: dict[tuple[int, int], set[int]] = {}
        anon = 0
        for pi, path in enumerate(query.paths):
            names = []
            for ni, pattern in enumerate(path.nodes):
                if pattern.variable is None:
                    names.append(f" anon{anon}")
                    anon += 1
                else:
                    names.append(pattern.variable)
                self.candidates[pi, ni] = self._filter(pattern, params)
            self.slots.append(names)
        self.where = [(p, _resolve(p.value, params)) for p in query.where]

    def _filter(self, pattern: NodePattern, params) -> set[int]:
        constraints = [(key, _resolve(value, params)) for key, value in pattern.properties]
        pool = (
            self.graph.nodes_with_label(pattern.label) if pattern.label is not None else self.graph.node_ids()
        )
        return {nid for nid in pool if _node_matches(self.graph.node(nid), pattern.label, constraints)}


def _steps(path: PathPattern, anchor: int) -> list[tuple[int, int, str | None, str]]:
    """Expansion order from the anchor: (from index, to index, type, traversal)."""
    steps = []
    for i in range(anchor, len(path.rels)):
        rel = path.rels[i]
        steps.append((i, i + 1, rel.type, rel.direction))
    flip = {"out": "in", "in": "out", "undirected": "undirected"}
    for i in range(anchor - 1, -1, -1):
        rel = path.rels[i]
        steps.append((i + 1, i, rel.type, flip[rel.direction]))
    return steps


def _match_path(plan: _Plan, pi: int, path: PathPattern, binding: dict[str, int]) -> Iterator[dict[str, int]]:
    graph = plan.graph
    names = plan.slots[pi]
    sizes = []
    for ni, name in enumerate(names):
        if name in binding:
            sizes.append(0 if binding[name] in plan.candidates[pi, ni] else -1)
        else:
            sizes.append(len(plan.candidates[pi, ni]))
    if -1 in sizes:
        return
    anchor = min(range(len(names)), key=lambda ni: (sizes[ni], ni))
    steps = _steps(path, anchor)

    if names[anchor] in binding:
        starts = [binding[names[anchor]]]
    else:
        starts = sorted(plan.candidates[pi, anchor])

    def extend(k: int, current: dict[str, int], used: set[int]) -> Iterator[dict[str, int]]:
        if k == len(steps):
            yield current
            return
        src, dst, rel_type, traversal = steps[k]
        here = current[names[src]]
        direction = "both" if traversal == "undirected" else traversal
        seen_rels = set()
        for rel_id, other in graph.neighbors(here, rel_type, direction):
            if rel_id in used:
                continue
            # a self-loop shows up twice under "both"; traversing it once is enough
            if (rel_id, other) in seen_rels:
                continue
            seen_rels.add((rel_id, other))
            if other not in plan.candidates[pi, dst]:
                continue
            name = names[dst]
            if name in current:
                if current[name] != other:
                    continue
                used.add(rel_id)
                yield from extend(k + 1, current, used)
                used.discard(rel_id)
            else:
                current[name] = other
                used.add(rel_id)
                yield from extend(k + 1, current, used)
                used.discard(rel_id)
                del current[name]

    for start in starts:
        fresh = names[anchor] not in binding
        if fresh:
            binding[names[anchor]] = start
        yield from extend(0, binding, set())
        if fresh:
            del binding[names[anchor]]


def _where_holds(graph: PropertyGraph, where: list[tuple[Predicate, Any]], binding: dict[str, int]) -> bool:
    for pred, right in where:
        props = graph.node(binding[pred.variable]).properties
        if pred.prop not in props:
            return False
        if not compare(pred.op, props[pred.prop], right):
            return False
    return True


def match_bindings(graph: PropertyGraph, query: Query, params: Mapping[str, Any] | None = None) -> list[tuple[int, ...]]:
    """Distinct bindings of the named variables, as sorted id tuples."""
    params = params or {}
    missing = query.parameters() - set(params)
    if missing:
        raise MissingParameter(f"parameter ${sorted(missing)[0]} was not supplied")
    plan = _Plan(graph, query, params)
    variables = query.variables()
    found: set[tuple[int, ...]] = set()

    def walk(pi: int, binding: dict[str, int]) -> None:
        if pi == len(query.paths):
            if _where_holds(graph, plan.where, binding):
                found.add(tuple(binding[v] for v in variables))
            return
        for extended in _match_path(plan, pi, query.paths[pi], binding):
            walk(pi + 1, extended)

    walk(0, {})
    return sorted(found)


def execute(graph: PropertyGraph, query: Query | str, params: Mapping[str, Any] | None = None) -> ResultTable:
    if isinstance(query, str):
        query = parse(query)
    variables = query.variables()
    position = {v: i for i, v in enumerate(variables)}
    bindings = match_bindings(graph, query, params)
    columns = query.columns()
    rows = []
    if query.returns is None:
        for ids in bindings:
            rows.append({v: graph.node(ids[i]) for i, v in enumerate(variables)})
    else:
        for ids in bindings:
            row = {}
            for item in query.returns:
                node = graph.node(ids[position[item.variable]])
                if item.prop is None:
                    row[item.column] = node
                else:
                    value = node.properties.get(item.prop)
                    row[item.column] = list(value) if isinstance(value, tuple) else value
            rows.append(row)
    return ResultTable(columns, rows)
