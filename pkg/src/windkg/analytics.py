"""PageRank influence scores over a property graph.

Scores use the non-normalized form ``p_i = (1 - d) + d * sum_j p_j / outdeg(j)``
with every score starting at 1, so a graph of N nodes has scores that sum to
roughly N rather than 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph.store import GraphError, PropertyGraph

ORIENTATIONS = ("natural", "reverse", "undirected")


class EmptyGraph(GraphError, ValueError):
    pass


@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.85
    max_iterations: int = 20
    tolerance: float = 1e-7
    orientation: str = "natural"

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie strictly between 0 and 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be one of {ORIENTATIONS}")


@dataclass
class ScoreMap:
    scores: dict[int, float]
    iterations_run: int
    converged: bool

    def __getitem__(self, node_id: int) -> float:
        return self.scores[node_id]

    def __len__(self) -> int:
        return len(self.scores)


def _edges(graph: PropertyGraph, orientation: str) -> tuple[np.ndarray, np.ndarray]:
    pairs = [(rel.start, rel.end) for rel in graph.relationships()]
    src = np.array([s for s, _ in pairs], dtype=np.int64)
    dst = np.array([e for _, e in pairs], dtype=np.int64)
    if orientation == "reverse":
        src, dst = dst, src
    elif orientation == "undirected":
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
    return src, dst


def pagerank(graph: PropertyGraph, config: PageRankConfig | None = None) -> ScoreMap:
    config = config or PageRankConfig()
    ids = graph.node_ids()
    if not ids:
        raise EmptyGraph("pagerank needs at least one node")
    index = {nid: i for i, nid in enumerate(ids)}
    n = len(ids)
    src, dst = _edges(graph, config.orientation)
    src = np.array([index[s] for s in src], dtype=np.int64)
    dst = np.array([index[e] for e in dst], dtype=np.int64)
    outdeg = np.bincount(src, minlength=n).astype(float)

    d = config.damping
    p = np.ones(n)
    converged = False
    iterations = 0
    for _ in range(config.max_iterations):
        share = p[src] / outdeg[src] if len(src) else np.zeros(0)
        incoming = np.bincount(dst, weights=share, minlength=n)
        new = (1.0 - d) + d * incoming
        delta = float(np.max(np.abs(new - p)))
        p = new
        iterations += 1
        if delta < config.tolerance:
            converged = True
            break
    return ScoreMap({nid: float(p[i]) for nid, i in index.items()}, iterations, converged)


def rank_by_label(scores: ScoreMap, graph: PropertyGraph, labels: list[str]) -> list[tuple[int, str, float]]:
    """(node id, matched label, score) for nodes carrying any of ``labels``.

    Ordered by descending score, then ascending id. The reported label is the
    first of the node's labels that appears in ``labels``.
    """
    if not labels:
        raise ValueError("labels must be non-empty")
    wanted = set(labels)
    out = []
    for node in graph.nodes():
        hit = next((label for label in node.labels if label in wanted), None)
        if hit is not None:
            out.append((node.id, hit, scores[node.id]))
    out.sort(key=lambda item: (-item[2], item[0]))
    return out


def subsystem_and_group_ids(graph: PropertyGraph) -> list[int]:
    """Sub-systems (CONTAINS/CONSISTSOF descendants of System roots, excluding
    generic ``Component`` parts) plus functional groups."""
    from .ontology.validate import functional_groups

    found = set()
    frontier = list(graph.nodes_with_label("System"))
    while frontier:
        nid = frontier.pop()
        for rtype in ("CONTAINS", "CONSISTSOF"):
            for _, child in graph.neighbors(nid, rtype, "out"):
                if child not in found:
                    found.add(child)
                    frontier.append(child)
    found = {nid for nid in found if not graph.node(nid).has_label("Component")}
    found.update(functional_groups(graph))
    return sorted(found)


def rank_nodes(scores: ScoreMap, graph: PropertyGraph, node_ids) -> list[tuple[int, str, float]]:
    """Like rank_by_label but over an explicit id set; label is the node's first label."""
    out = [(nid, graph.node(nid).labels[0], scores[nid]) for nid in node_ids]
    out.sort(key=lambda item: (-item[2], item[0]))
    return out


def plot_document(ranking: list[tuple[int, str, float]], graph: PropertyGraph) -> dict:
    """Bar-chart data: one bar per ranked node, labelled by its name when it has one."""
    bars = []
    for nid, label, score in ranking:
        name = graph.node(nid).properties.get("name", label)
        bars.append({"id": nid, "label": label, "name": name, "score": score})
    return {"kind": "pagerank", "bars": bars}
