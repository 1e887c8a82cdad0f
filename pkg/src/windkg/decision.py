"""Turn a predicted functional group and its feature attributions into a
maintenance report drawn from the knowledge graph.

Corrective actions come from two queries: one keyed on a SCADA feature name
and one keyed on the predicted group's ``fno``. Preventive and predictive
actions follow functional group -> RELATESTO -> sub-system <- FOR <- action.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .graph.store import NodeRecord, PropertyGraph
from .ontology.validate import functional_groups
from .query import execute
from .xai.explain import attribution_from_force_plot, export_force_plot_data, pie_document, rank_features, top_k_features
from .xai.shapley import Attribution, ShapleyExplainer

FEATURE_QUERY = "MATCH(n:Corrective)-[:ACTION]->(p)-[:FOR]->(q)-[:RELATESTO]-(r:Feature{name:$name}) RETURN p,q,r"
GROUP_QUERY = "MATCH(n:Corrective)-[:ACTION]->(p)-[:FOR]->(q)-[:AFFECTS]-(r{fno:$fno}) RETURN p,q,r"
PREVENTIVE_QUERY = (
    "MATCH (h:FunctionalGroup)-[:TYPE]->(g {fno:$fno})-[:RELATESTO]->(s)<-[:FOR]-(p)<-[:ACTION]-(n:Preventive) "
    "RETURN g, s, p"
)
PREDICTIVE_QUERY = (
    "MATCH (h:FunctionalGroup)-[:TYPE]->(g {fno:$fno})-[:RELATESTO]->(s)<-[:FOR]-(p)<-[:ACTION]-(n:Predictive) "
    "RETURN g, s, p"
)
FNO_RANGE = range(0, 14)


class InvalidGroup(ValueError):
    pass


@dataclass
class Provenance:
    matched_feature: str | None = None
    matched_fault_event: str | None = None
    matched_group: str | None = None
    matched_subsystem: str | None = None
    fallback_depth: int = 0
    feature_rank: int | None = None
    also_matched: list[str] = field(default_factory=list)


@dataclass
class ReportEntry:
    kind: str  # preventive | predictive | corrective
    source_node_id: int
    source_node_label: str
    details: str
    activities: list[str] = field(default_factory=list)
    periodicity: str | None = None
    image_urls: list[str] = field(default_factory=list)
    provenance: Provenance = field(default_factory=Provenance)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class PredictionInput:
    predicted_fno: int
    class_probability: float
    attribution: Attribution
    timestamp: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.class_probability <= 1.0:
            raise ValueError("class_probability must lie in [0, 1]")

    def to_dict(self) -> dict[str, Any]:
        return {
            "predicted_fno": self.predicted_fno,
            "class_probability": self.class_probability,
            "timestamp": self.timestamp,
            "attribution": export_force_plot_data(self.attribution),
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "PredictionInput":
        return cls(
            int(doc["predicted_fno"]),
            float(doc["class_probability"]),
            attribution_from_force_plot(doc["attribution"]),
            doc.get("timestamp"),
        )


@dataclass
class MaintenanceReport:
    summary: dict[str, Any]
    corrective: list[ReportEntry] = field(default_factory=list)
    preventive: list[ReportEntry] = field(default_factory=list)
    predictive: list[ReportEntry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    pie: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "summary": self.summary,
            "corrective": [e.to_dict() for e in self.corrective],
            "preventive": [e.to_dict() for e in self.preventive],
            "predictive": [e.to_dict() for e in self.predictive],
            "notes": list(self.notes),
            "pie": self.pie,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"

    def render_text(self) -> str:
        return render_report(self)


def _list(value) -> list[str]:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [str(value)]


def _group_node(graph: PropertyGraph, fno: int) -> NodeRecord:
    if isinstance(fno, bool) or not isinstance(fno, (int, np.integer)) or int(fno) not in FNO_RANGE:
        raise InvalidGroup(f"fno must be an integer in 0..13, got {fno!r}")
    for gid in functional_groups(graph):
        node = graph.node(gid)
        if node.properties.get("fno") == int(fno):
            return node
    raise InvalidGroup(f"no functional group with fno {fno} in the graph")


def _group_name(node: NodeRecord) -> str:
    return node.labels[0]


def _corrective_entry(p: NodeRecord, q: NodeRecord, **prov) -> ReportEntry:
    return ReportEntry(
        "corrective",
        p.id,
        p.labels[0],
        str(q.properties.get("details", q.labels[0])),
        _list(p.properties.get("activities")),
        None,
        _list(p.properties.get("image_url")),
        Provenance(matched_fault_event=q.properties.get("details"), **prov),
    )


def corrective_for_feature(graph: PropertyGraph, feature_name: str) -> list[ReportEntry]:
    """Corrective actions whose fault event relates to the named feature (none if unknown)."""
    table = execute(graph, FEATURE_QUERY, {"name": feature_name})
    return [_corrective_entry(row["p"], row["q"], matched_feature=feature_name) for row in table]


def corrective_for_group(graph: PropertyGraph, fno: int, notes: list[str] | None = None) -> list[ReportEntry]:
    group = _group_node(graph, fno)
    table = execute(graph, GROUP_QUERY, {"fno": int(fno)})
    entries = [_corrective_entry(row["p"], row["q"], matched_group=_group_name(group)) for row in table]
    if notes is not None and not entries:
        if group.has_label("NoFault"):
            notes.append("Normal operation predicted (NoFault); no corrective action is required.")
        else:
            notes.append(f"No corrective actions are linked to functional group {_group_name(group)} (fno {fno}).")
    return entries


def _scheduled_for_group(graph, fno, notes, query, kind) -> list[ReportEntry]:
    group = _group_node(graph, fno)
    if not graph.neighbors(group.id, "RELATESTO", "out"):
        if notes is not None:
            notes.append(
                f"Functional group {_group_name(group)} (fno {fno}) is not related to any sub-system; "
                f"no {kind} actions can be retrieved."
            )
        return []
    entries = []
    for row in execute(graph, query, {"fno": int(fno)}):
        p, s = row["p"], row["s"]
        entries.append(
            ReportEntry(
                kind,
                p.id,
                p.labels[0],
                str(p.properties.get("details", p.labels[0])),
                _list(p.properties.get("activities")),
                p.properties.get("gen_periodicity"),
                _list(p.properties.get("image_url")),
                Provenance(matched_group=_group_name(group), matched_subsystem=s.properties.get("name", s.labels[0])),
            )
        )
    if notes is not None and not entries:
        notes.append(f"No {kind} actions are linked to the sub-systems of {_group_name(group)} (fno {fno}).")
    return entries


def preventive_for_group(graph: PropertyGraph, fno: int, notes: list[str] | None = None) -> list[ReportEntry]:
    return _scheduled_for_group(graph, fno, notes, PREVENTIVE_QUERY, "preventive")


def predictive_for_group(graph: PropertyGraph, fno: int, notes: list[str] | None = None) -> list[ReportEntry]:
    return _scheduled_for_group(graph, fno, notes, PREDICTIVE_QUERY, "predictive")


def _affected_groups(graph: PropertyGraph, event_details: str) -> list[str]:
    out = []
    for node in graph.nodes():
        if node.properties.get("details") == event_details and any(lbl.startswith("FaultEvent") for lbl in node.labels):
            out.extend(graph.node(o).labels[0] for _, o in graph.neighbors(node.id, "AFFECTS", "out"))
    return sorted(set(out))


def generate_report(graph: PropertyGraph, prediction: PredictionInput, k: int = 10) -> MaintenanceReport:
    """Build the report for one prediction.

    Features are walked in descending |phi| order (zero-phi features are
    skipped). A feature with no linked corrective action is noted and the
    next-ranked feature is tried, until ``k`` features have produced actions.
    An entry's ``fallback_depth`` counts the action-less features ranked above
    the feature that produced it.
    """
    group = _group_node(graph, prediction.predicted_fno)
    attribution = prediction.attribution
    top = top_k_features(attribution, k)
    notes: list[str] = []
    summary = {
        "predicted_fno": int(prediction.predicted_fno),
        "functional_group": _group_name(group),
        "functional_group_name": group.properties.get("name"),
        "class_probability": prediction.class_probability,
        "timestamp": prediction.timestamp,
        "base_value": attribution.base_value,
        "prediction_value": attribution.prediction_value,
        "top_features": [{"feature": f.name, "phi": f.phi, "percent": f.percent} for f in top],
    }
    if top.degenerate:
        notes.append("All attributions are zero; feature percentages are reported as 0.")

    corrective: list[ReportEntry] = []
    by_node: dict[int, ReportEntry] = {}
    if group.has_label("NoFault"):
        notes.append("Normal operation predicted (NoFault); no corrective action is required.")
    else:
        covered = 0
        misses = 0
        for rank, i in enumerate(rank_features(attribution.phi, attribution.feature_names), start=1):
            if covered >= k:
                break
            if attribution.phi[i] == 0.0:
                break
            name = attribution.feature_names[i]
            entries = corrective_for_feature(graph, name)
            if not entries:
                misses += 1
                notes.append(
                    f"Feature {name} (rank {rank}) has no associated maintenance action; "
                    "using the next highest-priority feature."
                )
                continue
            covered += 1
            for entry in entries:
                known = by_node.get(entry.source_node_id)
                if known is not None:
                    if name not in known.provenance.also_matched:
                        known.provenance.also_matched.append(name)
                    continue
                entry.provenance.feature_rank = rank
                entry.provenance.fallback_depth = misses
                by_node[entry.source_node_id] = entry
                corrective.append(entry)
        for entry in corrective:
            others = [g for g in _affected_groups(graph, entry.details) if g != _group_name(group)]
            if others:
                notes.append(
                    f"{entry.source_node_label} ({entry.details}) addresses a fault event of functional group "
                    f"{', '.join(others)}, not the predicted {_group_name(group)}."
                )
        group_entries = corrective_for_group(graph, prediction.predicted_fno, notes)
        for entry in group_entries:
            known = by_node.get(entry.source_node_id)
            if known is not None:
                known.provenance.matched_group = entry.provenance.matched_group
                continue
            by_node[entry.source_node_id] = entry
            corrective.append(entry)

    preventive = preventive_for_group(graph, prediction.predicted_fno, notes)
    predictive = predictive_for_group(graph, prediction.predicted_fno, notes)
    return MaintenanceReport(summary, corrective, preventive, predictive, notes, pie_document(top))


def prediction_from_model(explainer: ShapleyExplainer, sample, timestamp: str | None = None) -> PredictionInput:
    """Predict one sample and attribute the predicted class's raw score."""
    attribution = explainer.explain(sample)
    return PredictionInput(attribution.target_class, float(attribution.class_probability), attribution, timestamp)


# -- text rendering ------------------------------------------------------------


def _wrap_activities(entry: ReportEntry, indent: str) -> list[str]:
    lines = []
    for act in entry.activities:
        first, *rest = act.splitlines() or [""]
        lines.append(f"{indent}- {first}")
        lines.extend(f"{indent}  {more}" for more in rest)
    lines.extend(f"{indent}image: {url}" for url in entry.image_urls)
    return lines


def render_report(report: MaintenanceReport) -> str:
    s = report.summary
    out = ["MAINTENANCE REPORT"]
    prob = s.get("class_probability")
    out.append(
        f"Predicted functional group: {s['functional_group_name']} ({s['functional_group']}, fno {s['predicted_fno']})"
        + (f", probability {prob:.2f}" if prob is not None else "")
    )
    if s.get("timestamp"):
        out.append(f"Timestamp: {s['timestamp']}")
    out.append("")
    out.append("Important features (share of top-k |phi|)")
    for n, item in enumerate(s["top_features"], start=1):
        out.append(f"  {n:>2}. {item['feature']:<32} phi={item['phi']:+.4f}  {item['percent']:6.2f}%")

    out.append("")
    out.append("Corrective actions")
    out.append("  Important feature | Relevant fault event | Action node")
    if not report.corrective:
        out.append("  (none)")
    for e in report.corrective:
        p = e.provenance
        feature = p.matched_feature or f"[group {p.matched_group}]"
        extra = f" (also: {', '.join(p.also_matched)})" if p.also_matched else ""
        fb = f" [fallback depth {p.fallback_depth}]" if p.fallback_depth else ""
        out.append(f"  {feature}{extra} | {e.details} | {e.source_node_label}{fb}")
        out.extend(_wrap_activities(e, "      "))

    for title, entries in (("Preventive actions", report.preventive), ("Predictive actions", report.predictive)):
        out.append("")
        out.append(title)
        out.append("  Sub-system | Action | Periodicity")
        if not entries:
            out.append("  (none)")
        for e in entries:
            out.append(f"  {e.provenance.matched_subsystem} | {e.details} | {e.periodicity or '-'} ({e.source_node_label})")
            out.extend(_wrap_activities(e, "      "))

    if report.notes:
        out.append("")
        out.append("Notes")
        out.extend(f"  - {note}" for note in report.notes)
    return "\n".join(out) + "\n"
