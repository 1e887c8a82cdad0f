"""Command-line entry point.

Exit codes: 0 success, 1 domain error, 2 usage error (bad flags or missing
input files). Defaults for --graph, --phrases, --model, --out-dir and --seed
can come from a JSON file named by the WINDKG_CONFIG environment variable.
When no graph is given anywhere, the bundled ontology is built in memory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .analytics import PageRankConfig, pagerank, plot_document, rank_by_label, rank_nodes
from .decision import PredictionInput, generate_report, prediction_from_model
from .graph.io import ParseError, export_create_script, read_graph, write_graph
from .graph.store import GraphError, PropertyGraph
from .ontology import ManifestError, build_ontology, load_manifest, validate_ontology
from .phrases import PhraseError, load_registry
from .query import QueryError, execute
from .repl import Repl, format_table, parse_param_value
from .xai import ShapleyExplainer, TrainConfig, TreeEnsemble, export_force_plot_data, train
from .xai import synth
from .xai.boosting import split_indices

CONFIG_ENV = "WINDKG_CONFIG"


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    graph: str | None = None
    phrases: str | None = None
    model: str | None = None
    out_dir: str | None = None
    seed: int | None = None
    verbosity: int = 0

    @classmethod
    def from_env(cls) -> "CliConfig":
        path = os.environ.get(CONFIG_ENV)
        if not path:
            return cls()
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError(f"{CONFIG_ENV} points to an unreadable file: {exc}") from None
        except ValueError as exc:
            raise UsageError(f"{CONFIG_ENV} file {path} is not valid JSON: {exc}") from None
        known = {k: doc[k] for k in ("graph", "phrases", "model", "out_dir", "seed", "verbosity") if k in doc}
        return cls(**known)


def _existing(path: str | None, what: str) -> str | None:
    if path is not None and not Path(path).is_file():
        raise UsageError(f"{what} file not found: {path}")
    return path


def _load_graph(args) -> PropertyGraph:
    path = _existing(args.graph, "graph")
    if path is None:
        return build_ontology(load_manifest())
    return read_graph(path)


def _load_phrases(args):
    return load_registry(_existing(args.phrases, "phrase registry"))


def _load_dataset(path: str | None) -> synth.Dataset:
    if path is None:
        return synth.bundled_dataset()
    return synth.read_csv(_existing(path, "dataset"))


def _load_model(path: str | None) -> TreeEnsemble:
    if path is None:
        raise UsageError("--model is required (or set 'model' in the config file)")
    with open(_existing(path, "model"), encoding="utf-8") as fh:
        return TreeEnsemble.loads(fh.read())


def _write(path: str, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


# -- subcommands ---------------------------------------------------------------


def cmd_build(args) -> int:
    manifest = load_manifest(_existing(args.manifest, "manifest"))
    graph = build_ontology(manifest)
    write_graph(graph, args.out, manifest.metadata.get("name", ""))
    print(f"built {graph.node_count} nodes, {graph.relationship_count} relationships -> {args.out}")
    return 0


def cmd_validate(args) -> int:
    report = validate_ontology(_load_graph(args))
    for v in report.violations:
        print(f"{v.severity} {v.rule}: {v.message}")
    print(f"{len(report.errors)} errors, {len(report.warnings)} warnings")
    return 1 if report.errors else 0


def _parse_params(items: list[str]) -> dict[str, Any]:
    params = {}
    for item in items or []:
        name, eq, raw = item.partition("=")
        if not eq or not name:
            raise UsageError(f"--param expects name=value, got {item!r}")
        params[name] = parse_param_value(raw)
    return params


def cmd_query(args) -> int:
    graph = _load_graph(args)
    table = execute(graph, args.query, _parse_params(args.param))
    if args.json:
        rows = [{c: _jsonable(row[c]) for c in table.columns} for row in table.rows]
        print(_dump({"columns": table.columns, "rows": rows}), end="")
    else:
        print(format_table(table))
    return 0


def _jsonable(value):
    from .graph.store import NodeRecord

    if isinstance(value, NodeRecord):
        return {
            "identity": value.id,
            "labels": list(value.labels),
            "properties": {k: list(v) if isinstance(v, tuple) else v for k, v in sorted(value.properties.items())},
        }
    return value


def cmd_repl(args) -> int:
    Repl(_load_graph(args), _load_phrases(args)).run()
    return 0


def cmd_pagerank(args) -> int:
    graph = _load_graph(args)
    tolerance = 0.0 if args.tolerance is None else args.tolerance
    config = PageRankConfig(args.damping, args.iterations, tolerance, args.orientation)
    scores = pagerank(graph, config)
    if args.labels:
        ranking = rank_by_label(scores, graph, [s for s in args.labels.split(",") if s])
    else:
        ranking = rank_nodes(scores, graph, graph.node_ids())
    for nid, label, score in ranking:
        name = graph.node(nid).properties.get("name", "")
        print(f"{score:.6f}\t{nid}\t{label}\t{name}")
    if args.plot_out:
        doc = plot_document(ranking, graph)
        doc["config"] = {"damping": config.damping, "iterations": config.max_iterations,
                         "orientation": config.orientation, "iterations_run": scores.iterations_run}
        _write(args.plot_out, _dump(doc))
    return 0


def cmd_phrases(args) -> int:
    registry = _load_phrases(args)
    if args.action == "list":
        for pid, phrase in registry:
            kind = "dynamic" if phrase.dynamic else "static"
            print(f"{pid}\t{kind}\t{phrase.template}")
        return 0
    if not args.text:
        raise UsageError(f"phrases {args.action} needs the phrase text")
    graph = _load_graph(args)
    if args.action == "suggest":
        for s in registry.suggest(graph, args.text):
            print(f"{s.kind}\t{s.completion}")
        return 0
    print(format_table(registry.resolve_and_run(graph, args.text)))
    return 0


def cmd_synthesize(args) -> int:
    seed = synth.DEFAULT_SEED if args.seed is None else args.seed
    dataset = synth.generate(args.samples, seed)
    synth.write_csv(dataset, args.out)
    print(f"wrote {len(dataset)} samples x {len(dataset.feature_names)} features -> {args.out}")
    return 0


def cmd_train(args) -> int:
    dataset = _load_dataset(args.data)
    config = TrainConfig(rng_seed=0 if args.seed is None else args.seed)
    result = train(dataset.X, dataset.y, config, dataset.feature_names)
    _write(args.out, result.ensemble.dumps())
    print(_dump({k: v for k, v in result.metrics.items()}), end="")
    return 0


def _sample(args, dataset: synth.Dataset) -> tuple[np.ndarray, str]:
    if getattr(args, "scenario", None):
        label = {v.lower(): k for k, v in synth.CLASS_NAMES.items()}[args.scenario]
        return synth.scenario_sample(label), f"scenario {args.scenario}"
    if args.row is None:
        raise UsageError("give --row (or --scenario)")
    if not 0 <= args.row < len(dataset):
        raise UsageError(f"--row must be in 0..{len(dataset) - 1}")
    return dataset.X[args.row], f"row {args.row}"


def cmd_predict(args) -> int:
    model = _load_model(args.model)
    dataset = _load_dataset(args.data)
    x, where = _sample(args, dataset)
    probs = model.predict_proba(x)[0]
    pred = int(model.predict(x)[0])
    print(f"{where}: predicted class {pred}")
    for label, p in zip(model.classes, probs):
        print(f"  {label}\t{p:.6f}")
    return 0


def cmd_report(args) -> int:
    graph = _load_graph(args)
    model = _load_model(args.model)
    dataset = _load_dataset(args.data)
    x, where = _sample(args, dataset)
    seed = int(model.metadata.get("rng_seed", 0))
    fraction = float(model.metadata.get("train_fraction", 0.7))
    train_idx, _ = split_indices(len(dataset), fraction, seed)
    explainer = ShapleyExplainer(model, dataset.X[train_idx])
    prediction = prediction_from_model(explainer, x, timestamp=where)
    report = generate_report(graph, prediction, args.top_k)
    text = report.render_text()
    if args.out:
        out = Path(args.out)
        _write(str(out), text)
        _write(str(out.with_suffix(".report.json")), report.dumps())
        _write(str(out.with_suffix(".force.json")), _dump(export_force_plot_data(prediction.attribution)))
        _write(str(out.with_suffix(".pie.json")), _dump(report.pie))
        _write(str(out.with_suffix(".prediction.json")), _dump(prediction.to_dict()))
        print(f"report written to {out}")
    else:
        print(text, end="")
    return 0


def cmd_explain_input(args) -> int:
    """Report from a saved prediction-input document instead of a live model."""
    graph = _load_graph(args)
    with open(_existing(args.input, "prediction input"), encoding="utf-8") as fh:
        prediction = PredictionInput.from_dict(json.load(fh))
    print(generate_report(graph, prediction, args.top_k).render_text(), end="")
    return 0


def cmd_export(args) -> int:
    graph = _load_graph(args)
    if args.format != "create-script":
        raise UsageError(f"unknown export format {args.format!r}")
    _write(args.out, export_create_script(graph))
    print(f"wrote {graph.node_count + graph.relationship_count} statements -> {args.out}")
    return 0


# -- parser --------------------------------------------------------------------


def build_parser(config: CliConfig) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="windkg", description="Wind-turbine O&M knowledge graph toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_opt(p):
        p.add_argument("--graph", default=config.graph, help="graph document (default: bundled ontology)")

    def phrases_opt(p):
        p.add_argument("--phrases", default=config.phrases, help="phrase registry (default: bundled)")

    p = sub.add_parser("build", help="build the ontology graph from a manifest")
    p.add_argument("--manifest", default=None, help="manifest file (default: bundled)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="check ontology consistency rules")
    graph_opt(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", help="run a MATCH query")
    graph_opt(p)
    p.add_argument("query")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--json", action="store_true", help="print rows as JSON")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("repl", help="interactive shell")
    graph_opt(p)
    phrases_opt(p)
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("pagerank", help="PageRank influence scores")
    graph_opt(p)
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--tolerance", type=float, default=None, help="early-stop tolerance (default: run all iterations)")
    p.add_argument("--orientation", choices=["natural", "reverse", "undirected"], default="natural")
    p.add_argument("--labels", default=None, help="comma-separated labels to rank")
    p.add_argument("--plot-out", default=None, help="write bar-chart data here")
    p.set_defaults(func=cmd_pagerank)

    p = sub.add_parser("phrases", help="list, suggest or run search phrases")
    p.add_argument("action", choices=["list", "run", "suggest"])
    p.add_argument("text", nargs="?")
    graph_opt(p)
    phrases_opt(p)
    p.set_defaults(func=cmd_phrases)

    p = sub.add_parser("synthesize-data", help="write the planted-signature synthetic dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=config.seed)
    p.add_argument("--samples", type=int, default=synth.DEFAULT_SAMPLES)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("train", help="train the boosted-tree classifier")
    p.add_argument("--data", default=None, help="dataset CSV (default: bundled synthetic data)")
    p.add_argument("--out", default=config.model, required=config.model is None)
    p.add_argument("--seed", type=int, default=config.seed)
    p.set_defaults(func=cmd_train)

    scenario_names = sorted(v.lower() for v in synth.CLASS_NAMES.values())
    for name, func, hlp in (("predict", cmd_predict, "class probabilities for one sample"),
                            ("report", cmd_report, "maintenance report for one sample")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--model", default=config.model)
        p.add_argument("--data", default=None)
        p.add_argument("--row", type=int, default=None)
        p.add_argument("--scenario", choices=scenario_names, default=None,
                       help="use a noise-free synthetic scenario instead of a data row")
        if name == "report":
            graph_opt(p)
            p.add_argument("--top-k", type=int, default=10)
            default_out = str(Path(config.out_dir) / "report.txt") if config.out_dir else None
            p.add_argument("--out", default=default_out)
        p.set_defaults(func=func)

    p = sub.add_parser("report-input", help="maintenance report from a saved prediction document")
    graph_opt(p)
    p.add_argument("--input", required=True)
    p.add_argument("--top-k", type=int, default=10)
    p.set_defaults(func=cmd_explain_input)

    p = sub.add_parser("export", help="export the graph")
    graph_opt(p)
    p.add_argument("--format", default="create-script", choices=["create-script"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)
    return parser


DOMAIN_ERRORS = (GraphError, QueryError, ManifestError, PhraseError, ParseError, ValueError, KeyError, OSError)


def main(argv: list[str] | None = None) -> int:
    try:
        config = CliConfig.from_env()
    except UsageError as exc:
        print(f"windkg: {exc}", file=sys.stderr)
        return 2
    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"windkg {args.command}: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"windkg {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
