"""Ontology manifest loading and structural checks.

A manifest is a JSON object with one list of node entries per category and a
``relationships`` map from type to ``[start_key, end_key]`` pairs (or objects
with ``start``, ``end`` and an optional ``note``). Node entries look like
``{"key": "sub:Gearbox", "label": "Gearbox", "properties": {...}}``; keys are
manifest-local and never reach the graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

CATEGORIES = (
    "hubs",
    "subsystems",
    "components",
    "functional_groups",
    "features",
    "alarms",
    "fault_events",
    "preventive",
    "predictive",
    "corrective",
)

# category -> required count when cardinality checks are on
EXPECTED_COUNTS = {
    "subsystems": 11,
    "functional_groups": 14,
    "features": 102,
    "alarms": 26,
    "fault_events": 57,
    "preventive": 233,
    "predictive": 11,
    "corrective": 57,
}

NUMBERED_LABELS = {
    "alarms": "Alarm",
    "fault_events": "FaultEvent",
    "preventive": "PrevAct",
    "predictive": "PredAct",
    "corrective": "CorrAct",
}

CORE_TYPES = ("CONTAINS", "HAS", "TYPE", "RELATESTO", "CONSISTSOF", "FOR", "ACTION", "AFFECTS")


class ManifestError(ValueError):
    """A manifest violates a structural rule; ``rule`` names which one.

    Rules: M1 category cardinality, M2 fno permutation with one NoFault group,
    M3 alarm numbers, M4 keys and relationship endpoints, M5 reference totals,
    M6 relationship types.
    """

    def __init__(self, rule: str, message: str):
        super().__init__(f"[{rule}] {message}")
        self.rule = rule


@dataclass(frozen=True)
class RelationshipEntry:
    type: str
    start: str
    end: str
    note: str | None = None


@dataclass
class OntologyManifest:
    system: dict[str, Any]
    categories: dict[str, list[dict[str, Any]]] = field(default_factory=dict)
    relationships: list[RelationshipEntry] = field(default_factory=list)
    relationship_types: list[str] = field(default_factory=lambda: list(CORE_TYPES))
    metadata: dict[str, Any] = field(default_factory=dict)
    manifest_version: int = 1

    def entries(self, category: str) -> list[dict[str, Any]]:
        return self.categories.get(category, [])

    def node_entries(self) -> list[dict[str, Any]]:
        """System first, then every category in declaration order."""
        out = [self.system]
        for cat in CATEGORIES:
            out.extend(self.entries(cat))
        return out

    def reference_totals(self) -> tuple[int, int] | None:
        ref = self.metadata.get("reference_totals")
        if not ref:
            return None
        return int(ref["nodes"]), int(ref["relationships"])


def manifest_from_dict(doc: dict[str, Any]) -> OntologyManifest:
    if not isinstance(doc, dict) or "system" not in doc:
        raise ManifestError("M4", "manifest must be an object with a 'system' entry")
    categories = {cat: list(doc.get(cat) or []) for cat in CATEGORIES}
    rels = []
    for rtype, items in (doc.get("relationships") or {}).items():
        for item in items:
            if isinstance(item, dict):
                rels.append(RelationshipEntry(rtype, item["start"], item["end"], item.get("note")))
            else:
                start, end = item
                rels.append(RelationshipEntry(rtype, start, end))
    types = list(doc.get("relationship_types") or CORE_TYPES)
    return OntologyManifest(
        system=doc["system"],
        categories=categories,
        relationships=rels,
        relationship_types=types,
        metadata=dict(doc.get("metadata") or {}),
        manifest_version=int(doc.get("manifest_version", 1)),
    )


def load_manifest(path=None) -> OntologyManifest:
    """Read a manifest file; with no path, the bundled one."""
    if path is None:
        text = resources.files("windkg.data").joinpath("manifest.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError("M4", f"not valid JSON: {exc}") from None
    return manifest_from_dict(doc)


def check_manifest(manifest: OntologyManifest, check_cardinality: bool = True) -> None:
    """Raise ManifestError on the first violated rule."""
    if check_cardinality:
        for cat, expected in EXPECTED_COUNTS.items():
            got = len(manifest.entries(cat))
            if got != expected:
                raise ManifestError("M1", f"{cat}: expected {expected} entries, found {got}")
        for cat, prefix in NUMBERED_LABELS.items():
            labels = [e["label"] for e in manifest.entries(cat)]
            want = [f"{prefix}{i}" for i in range(1, len(labels) + 1)]
            if labels != want:
                raise ManifestError("M1", f"{cat}: labels must run {prefix}1..{prefix}{len(labels)} in order")

    groups = manifest.entries("functional_groups")
    if groups:
        fnos = [g["properties"].get("fno") for g in groups]
        if any(not isinstance(f, int) or isinstance(f, bool) for f in fnos):
            raise ManifestError("M2", "every functional group needs an integer fno")
        if sorted(fnos) != list(range(len(groups))):
            dupes = sorted({f for f in fnos if fnos.count(f) > 1})
            detail = f"duplicate fno {dupes}" if dupes else f"fno values {sorted(fnos)}"
            raise ManifestError("M2", f"fno values must be a permutation of 0..{len(groups) - 1}: {detail}")
        no_fault = [g for g in groups if g["label"] == "NoFault"]
        if len(no_fault) != 1:
            raise ManifestError("M2", f"expected exactly one NoFault group, found {len(no_fault)}")

    alarms = manifest.entries("alarms")
    numbers = [a["properties"].get("alarm_no") for a in alarms]
    if len(set(numbers)) != len(numbers):
        raise ManifestError("M3", "alarm_no values must be unique")
    for no in numbers:
        if not isinstance(no, str) or not no.isdigit() or not 901 <= int(no) <= 926:
            raise ManifestError("M3", f"alarm_no {no!r} outside '901'..'926'")

    keys = set()
    for entry in manifest.node_entries():
        key = entry.get("key")
        if not key or key in keys:
            raise ManifestError("M4", f"missing or duplicate node key {key!r}")
        if not entry.get("label"):
            raise ManifestError("M4", f"node {key!r} has no label")
        keys.add(key)
    declared = set(manifest.relationship_types)
    for rel in manifest.relationships:
        if rel.type not in declared:
            raise ManifestError("M6", f"relationship type {rel.type!r} is not declared")
        for end in (rel.start, rel.end):
            if end not in keys:
                raise ManifestError("M4", f"{rel.type} refers to unknown node key {end!r}")

    if check_cardinality:
        ref = manifest.reference_totals()
        if ref is not None:
            actual = (len(manifest.node_entries()), len(manifest.relationships))
            if actual != ref:
                raise ManifestError(
                    "M5", f"reference totals {ref[0]} nodes / {ref[1]} relationships, manifest gives {actual[0]} / {actual[1]}"
                )
