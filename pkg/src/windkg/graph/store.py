"""In-memory directed property graph.

Nodes carry one or more labels and a map of typed properties; relationships are
directed, typed, and may carry properties of their own. Ids are assigned from
monotonically increasing counters and are never reused. Iteration is always in
ascending id order so anything built on top of the store is reproducible.
"""

from __future__ import annotations

import bisect
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

LABEL_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
REL_TYPE_RE = re.compile(r"[A-Z][A-Z0-9_]*\Z")
PROPERTY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

DIRECTIONS = ("out", "in", "both")


class GraphError(Exception):
    """Base class for graph store errors."""


class EmptyLabels(GraphError, ValueError):
    pass


class InvalidIdentifier(GraphError, ValueError):
    pass


class InvalidProperty(GraphError, ValueError):
    pass


class UnknownNode(GraphError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown node"


class DuplicateId(GraphError, ValueError):
    pass


def check_property_value(value: Any) -> Any:
    """Validate a property value and return its stored form.

    Text lists are stored as tuples so records stay immutable once built.
    """
    if isinstance(value, bool) or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidProperty(f"real property values must be finite, got {value!r}")
        return value
    if isinstance(value, (list, tuple)):
        items = tuple(value)
        for item in items:
            if not isinstance(item, str) or not item:
                raise InvalidProperty(f"text list entries must be non-empty strings, got {item!r}")
        return items
    raise InvalidProperty(f"unsupported property value type {type(value).__name__}")


def check_properties(properties: Mapping[str, Any] | None) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in (properties or {}).items():
        if not isinstance(key, str) or not PROPERTY_RE.match(key):
            raise InvalidIdentifier(f"invalid property name {key!r}")
        out[key] = check_property_value(value)
    return out


@dataclass(frozen=True)
class NodeRecord:
    id: int
    labels: tuple[str, ...]
    properties: dict[str, Any] = field(default_factory=dict)

    def has_label(self, label: str) -> bool:
        return label in self.labels

    def get(self, key: str, default: Any = None) -> Any:
        return self.properties.get(key, default)


@dataclass(frozen=True)
class RelationshipRecord:
    id: int
    type: str
    start: int
    end: int
    properties: dict[str, Any] = field(default_factory=dict)

    def other(self, node_id: int) -> int:
        return self.end if node_id == self.start else self.start


class PropertyGraph:
    """Append-only property graph with per-node adjacency lists.

    Construction is single-writer; once built the graph is treated as
    immutable and may be shared between concurrent readers.
    """

    def __init__(self) -> None:
        self._nodes: dict[int, NodeRecord] = {}
        self._rels: dict[int, RelationshipRecord] = {}
        self._out: dict[int, list[int]] = {}
        self._in: dict[int, list[int]] = {}
        self._by_label: dict[str, list[int]] = {}
        self._next_node_id = 0
        self._next_rel_id = 0

    # -- construction -----------------------------------------------------

    def add_node(self, labels, properties: Mapping[str, Any] | None = None) -> int:
        node_id = self._next_node_id
        self._insert_node(node_id, labels, properties)
        return node_id

    def add_relationship(
        self, start: int, rel_type: str, end: int, properties: Mapping[str, Any] | None = None
    ) -> int:
        rel_id = self._next_rel_id
        self._insert_relationship(rel_id, rel_type, start, end, properties)
        return rel_id

    def _insert_node(self, node_id: int, labels, properties) -> None:
        if isinstance(labels, str):
            labels = [labels]
        labels = tuple(labels)
        if not labels:
            raise EmptyLabels("a node needs at least one label")
        for label in labels:
            if not isinstance(label, str) or not LABEL_RE.match(label):
                raise InvalidIdentifier(f"invalid label {label!r}")
        if not isinstance(node_id, int) or isinstance(node_id, bool) or node_id < 0:
            raise InvalidIdentifier(f"node id must be a non-negative integer, got {node_id!r}")
        if node_id in self._nodes:
            raise DuplicateId(f"duplicate node id {node_id}")
        props = check_properties(properties)
        self._nodes[node_id] = NodeRecord(node_id, labels, props)
        self._out[node_id] = []
        self._in[node_id] = []
        for label in dict.fromkeys(labels):
            self._by_label.setdefault(label, []).append(node_id)
        self._next_node_id = max(self._next_node_id, node_id + 1)

    def _insert_relationship(self, rel_id: int, rel_type: str, start: int, end: int, properties) -> None:
        if not isinstance(rel_type, str) or not REL_TYPE_RE.match(rel_type):
            raise InvalidIdentifier(f"invalid relationship type {rel_type!r}")
        for endpoint in (start, end):
            if endpoint not in self._nodes:
                raise UnknownNode(f"unknown node id {endpoint!r}")
        if not isinstance(rel_id, int) or isinstance(rel_id, bool) or rel_id < 0:
            raise InvalidIdentifier(f"relationship id must be a non-negative integer, got {rel_id!r}")
        if rel_id in self._rels:
            raise DuplicateId(f"duplicate relationship id {rel_id}")
        props = check_properties(properties)
        self._rels[rel_id] = RelationshipRecord(rel_id, rel_type, start, end, props)
        # loaded documents may insert out of id order
        bisect.insort(self._out[start], rel_id)
        bisect.insort(self._in[end], rel_id)
        self._next_rel_id = max(self._next_rel_id, rel_id + 1)

    # -- access -----------------------------------------------------------

    def node(self, node_id: int) -> NodeRecord:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNode(f"unknown node id {node_id!r}") from None

    def relationship(self, rel_id: int) -> RelationshipRecord:
        try:
            return self._rels[rel_id]
        except KeyError:
            raise GraphError(f"unknown relationship id {rel_id!r}") from None

    def has_node(self, node_id: int) -> bool:
        return node_id in self._nodes

    def nodes(self) -> Iterator[NodeRecord]:
        for node_id in sorted(self._nodes):
            yield self._nodes[node_id]

    def relationships(self) -> Iterator[RelationshipRecord]:
        for rel_id in sorted(self._rels):
            yield self._rels[rel_id]

    def node_ids(self) -> list[int]:
        return sorted(self._nodes)

    def nodes_with_label(self, label: str) -> list[int]:
        return sorted(self._by_label.get(label, ()))

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def relationship_count(self) -> int:
        return len(self._rels)

    def __len__(self) -> int:
        return len(self._nodes)

    def neighbors(
        self, node_id: int, rel_type: str | None = None, direction: str = "both"
    ) -> list[tuple[int, int]]:
        """Incident relationships of a node as ``(relationship id, other node id)``.

        A self-loop appears once per matching direction, so with
        ``direction="both"`` it is listed twice (once outgoing, once incoming).
        """
        if node_id not in self._nodes:
            raise UnknownNode(f"unknown node id {node_id!r}")
        if direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
        found: list[tuple[int, int]] = []
        if direction in ("out", "both"):
            for rel_id in self._out[node_id]:
                rel = self._rels[rel_id]
                if rel_type is None or rel.type == rel_type:
                    found.append((rel_id, rel.end))
        if direction in ("in", "both"):
            for rel_id in self._in[node_id]:
                rel = self._rels[rel_id]
                if rel_type is None or rel.type == rel_type:
                    found.append((rel_id, rel.start))
        if direction == "both":
            found.sort(key=lambda pair: pair[0])
        return found

    def out_relationships(self, node_id: int) -> list[int]:
        return list(self._out[node_id])

    def in_relationships(self, node_id: int) -> list[int]:
        return list(self._in[node_id])

    def degree(self, node_id: int) -> int:
        return len(self._out[node_id]) + len(self._in[node_id])

    # -- statistics -------------------------------------------------------

    def count_by_label(self, label: str) -> int:
        return len(self._by_label.get(label, ()))

    def count_by_type(self, rel_type: str) -> int:
        return sum(1 for rel in self._rels.values() if rel.type == rel_type)

    def label_counts(self) -> Counter:
        return Counter({label: len(ids) for label, ids in self._by_label.items()})

    def type_counts(self) -> Counter:
        return Counter(rel.type for rel in self._rels.values())

    # -- comparison -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PropertyGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._rels == other._rels

    def __repr__(self) -> str:
        return f"PropertyGraph(nodes={self.node_count}, relationships={self.relationship_count})"
