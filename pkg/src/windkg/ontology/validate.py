"""Consistency rules over a built ontology graph.

Node families are recognised by label: ``CorrActN``, ``PrevActN``,
``AlarmN``, ``FaultEventN``, ``Feature``, and functional groups are the TYPE
children of the ``FunctionalGroup`` hub.

R1  every CorrAct has a FOR edge to a fault event                (error)
R2  every PrevAct has a FOR edge                                 (error)
R3  every alarm RELATESTO at least one fault event               (error)
R4  a fault event targeted by FOR has no Feature RELATESTO it    (warning)
R5  isolated node                                                (warning)
R6  functional group fno missing or shared                       (error)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..graph.store import PropertyGraph

_FAMILY = {name: re.compile(rf"{name}\d+") for name in ("CorrAct", "PrevAct", "PredAct", "Alarm", "FaultEvent")}


@dataclass(frozen=True)
class Violation:
    severity: str  # "error" | "warning"
    rule: str
    node_ids: tuple[int, ...] = ()
    relationship_ids: tuple[int, ...] = ()
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "rule": self.rule,
            "node_ids": list(self.node_ids),
            "relationship_ids": list(self.relationship_ids),
            "message": self.message,
        }


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "error"]

    @property
    def warnings(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def __len__(self) -> int:
        return len(self.violations)

    def to_dict(self) -> dict:
        return {"violations": [v.to_dict() for v in self.violations]}


def family_of(labels: tuple[str, ...]) -> str | None:
    for label in labels:
        for name, pattern in _FAMILY.items():
            if pattern.fullmatch(label):
                return name
    return None


def functional_groups(graph: PropertyGraph) -> list[int]:
    """Ids of the TYPE children of every FunctionalGroup hub, ascending."""
    out = set()
    for hub in graph.nodes_with_label("FunctionalGroup"):
        out.update(other for _, other in graph.neighbors(hub, "TYPE", "out"))
    return sorted(out)


def validate_ontology(graph: PropertyGraph) -> ValidationReport:
    family = {node.id: family_of(node.labels) for node in graph.nodes()}
    report = ValidationReport()
    add = report.violations.append

    def targets(nid: int, rtype: str, direction: str = "out") -> list[tuple[int, int]]:
        return graph.neighbors(nid, rtype, direction)

    for node in graph.nodes():
        kind = family[node.id]
        name = node.labels[0]
        if kind == "CorrAct":
            if not any(family[o] == "FaultEvent" for _, o in targets(node.id, "FOR")):
                add(Violation("error", "R1", (node.id,), (), f"{name} has no FOR edge to a fault event"))
        elif kind == "PrevAct":
            if not targets(node.id, "FOR"):
                add(Violation("error", "R2", (node.id,), (), f"{name} has no FOR edge"))
        elif kind == "Alarm":
            if not any(family[o] == "FaultEvent" for _, o in targets(node.id, "RELATESTO")):
                add(Violation("error", "R3", (node.id,), (), f"{name} does not relate to any fault event"))
        elif kind == "FaultEvent":
            if targets(node.id, "FOR", "in"):
                feeders = [o for _, o in targets(node.id, "RELATESTO", "in") if graph.node(o).has_label("Feature")]
                if not feeders:
                    add(Violation("warning", "R4", (node.id,), (), f"{name} has actions but no related SCADA feature"))

    for node in graph.nodes():
        if graph.degree(node.id) == 0:
            add(Violation("warning", "R5", (node.id,), (), f"node {node.id} ({':'.join(node.labels)}) is isolated"))

    by_fno: dict[object, list[int]] = {}
    for gid in functional_groups(graph):
        fno = graph.node(gid).properties.get("fno")
        if not isinstance(fno, int) or isinstance(fno, bool):
            add(Violation("error", "R6", (gid,), (), f"functional group {gid} has no integer fno"))
            continue
        by_fno.setdefault(fno, []).append(gid)
    for fno, gids in sorted(by_fno.items()):
        if len(gids) > 1:
            add(Violation("error", "R6", tuple(gids), (), f"fno {fno} is shared by {len(gids)} functional groups"))
    return report
