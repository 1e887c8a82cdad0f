"""Graph documents and CREATE-script export.

A graph document is a single JSON object::

    {
      "metadata": {"name": "...", "node_total": 2, "relationship_total": 1},
      "nodes": [{"identity": 0, "labels": ["System"], "properties": {...}}, ...],
      "relationships": [{"identity": 0, "type": "CONTAINS", "start": 0, "end": 1,
                         "properties": {}}, ...]
    }

Node records use the same keys as a Neo4j node dump. Integers and reals are
told apart by the JSON literal itself (a decimal point or exponent makes a real).
"""

from __future__ import annotations

import json
from typing import Any

from .store import GraphError, PropertyGraph


class ParseError(GraphError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class IntegrityError(GraphError, ValueError):
    pass


def graph_to_document(graph: PropertyGraph, name: str = "") -> dict[str, Any]:
    nodes = [
        {
            "identity": node.id,
            "labels": list(node.labels),
            "properties": _props_out(node.properties),
        }
        for node in graph.nodes()
    ]
    rels = [
        {
            "identity": rel.id,
            "type": rel.type,
            "start": rel.start,
            "end": rel.end,
            "properties": _props_out(rel.properties),
        }
        for rel in graph.relationships()
    ]
    return {
        "metadata": {"name": name, "node_total": len(nodes), "relationship_total": len(rels)},
        "nodes": nodes,
        "relationships": rels,
    }


def _props_out(props: dict[str, Any]) -> dict[str, Any]:
    return {key: list(value) if isinstance(value, tuple) else value for key, value in sorted(props.items())}


def save_graph(graph: PropertyGraph, name: str = "") -> str:
    """Serialize ``graph``; equal graphs give byte-identical text."""
    return json.dumps(graph_to_document(graph, name), indent=1, ensure_ascii=False) + "\n"


def document_to_graph(doc: Any) -> PropertyGraph:
    if not isinstance(doc, dict):
        raise IntegrityError("graph document must be a JSON object")
    nodes = doc.get("nodes", [])
    rels = doc.get("relationships", [])
    if not isinstance(nodes, list) or not isinstance(rels, list):
        raise IntegrityError("'nodes' and 'relationships' must be lists")
    meta = doc.get("metadata") or {}
    if meta.get("node_total") is not None and meta["node_total"] != len(nodes):
        raise IntegrityError(f"declared node_total {meta['node_total']} but document has {len(nodes)} nodes")
    if meta.get("relationship_total") is not None and meta["relationship_total"] != len(rels):
        raise IntegrityError(
            f"declared relationship_total {meta['relationship_total']} but document has {len(rels)} relationships"
        )

    graph = PropertyGraph()
    for rec in nodes:
        try:
            graph._insert_node(rec["identity"], rec["labels"], rec.get("properties") or {})
        except KeyError as exc:
            raise IntegrityError(f"node record missing key {exc}") from None
        except (TypeError, GraphError) as exc:
            raise IntegrityError(f"bad node record {rec.get('identity')!r}: {exc}") from None
    for rec in rels:
        try:
            graph._insert_relationship(
                rec["identity"], rec["type"], rec["start"], rec["end"], rec.get("properties") or {}
            )
        except KeyError as exc:
            raise IntegrityError(f"relationship record missing key {exc}") from None
        except (TypeError, GraphError) as exc:
            raise IntegrityError(f"bad relationship record {rec.get('identity')!r}: {exc}") from None
    return graph


def load_graph(text: str) -> PropertyGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return document_to_graph(doc)


def read_graph(path) -> PropertyGraph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


def write_graph(graph: PropertyGraph, path, name: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(save_graph(graph, name))


# -- CREATE script -----------------------------------------------------------


def quote_string(text: str) -> str:
    escaped = (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )
    return f'"{escaped}"'


def render_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return quote_string(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(render_value(item) for item in value) + "]"
    raise TypeError(f"cannot render {value!r}")


def _render_map(props: dict[str, Any]) -> str:
    if not props:
        return ""
    body = ", ".join(f"{key}: {render_value(value)}" for key, value in sorted(props.items()))
    return " {" + body + "}"


def export_create_script(graph: PropertyGraph) -> str:
    """One CREATE statement per node and per relationship, newline separated.

    Node variables are ``n<id>``; the statements form a single script, so the
    relationship statements can refer to them.
    """
    lines = []
    for node in graph.nodes():
        labels = "".join(f":{label}" for label in node.labels)
        lines.append(f"CREATE (n{node.id}{labels}{_render_map(node.properties)})")
    for rel in graph.relationships():
        lines.append(f"CREATE (n{rel.start})-[:{rel.type}{_render_map(rel.properties)}]->(n{rel.end})")
    return "\n".join(lines) + ("\n" if lines else "")
