"""Build the property graph described by a manifest."""

from __future__ import annotations

from ..graph.store import PropertyGraph
from .manifest import ManifestError, OntologyManifest, check_manifest, load_manifest


def build_ontology(manifest: OntologyManifest, check_cardinality: bool = True) -> PropertyGraph:
    """Nodes are created in manifest order, then relationships in manifest order.

    With ``check_cardinality`` the published category counts and the
    reference totals in the metadata are enforced; structural rules (fno,
    alarm numbers, keys, relationship types) always are.
    """
    check_manifest(manifest, check_cardinality)
    graph = PropertyGraph()
    ids: dict[str, int] = {}
    for entry in manifest.node_entries():
        labels = entry.get("labels") or [entry["label"]]
        ids[entry["key"]] = graph.add_node(labels, entry.get("properties") or {})
    for rel in manifest.relationships:
        graph.add_relationship(ids[rel.start], rel.type, ids[rel.end])

    if check_cardinality:
        ref = manifest.reference_totals()
        if ref is not None and (graph.node_count, graph.relationship_count) != ref:
            raise ManifestError("M5", "built graph does not match the reference totals")
    return graph


def build_bundled() -> PropertyGraph:
    return build_ontology(load_manifest())
