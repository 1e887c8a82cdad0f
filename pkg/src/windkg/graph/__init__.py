from .io import (
    IntegrityError,
    ParseError,
    export_create_script,
    load_graph,
    read_graph,
    save_graph,
    write_graph,
)
from .store import (
    DuplicateId,
    EmptyLabels,
    GraphError,
    InvalidIdentifier,
    InvalidProperty,
    NodeRecord,
    PropertyGraph,
    RelationshipRecord,
    UnknownNode,
)

__all__ = [
    "DuplicateId",
    "EmptyLabels",
    "GraphError",
    "IntegrityError",
    "InvalidIdentifier",
    "InvalidProperty",
    "NodeRecord",
    "ParseError",
    "PropertyGraph",
    "RelationshipRecord",
    "UnknownNode",
    "export_create_script",
    "load_graph",
    "read_graph",
    "save_graph",
    "write_graph",
]
