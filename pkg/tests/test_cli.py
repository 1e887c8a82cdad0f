import io
import json
from importlib import resources

import pytest

from windkg.cli import main
from windkg.graph import read_graph
from windkg.phrases import load_registry
from windkg.repl import Repl

GENERATOR_QUERY = "MATCH(n:Preventive)-[:ACTION]->(p)-[:FOR]->(q:Generator) RETURN n,p,q"


@pytest.fixture(scope="module")
def model_file(tmp_path_factory, trained):
    path = tmp_path_factory.mktemp("model") / "model.json"
    path.write_text(trained.ensemble.dumps())
    return str(path)


def test_query_lists_winding_heaters(capsys):
    assert main(["query", GENERATOR_QUERY]) == 0
    out = capsys.readouterr().out
    assert "PrevAct195" in out and "WINDING HEATERS" in out


def test_query_json_and_params(capsys):
    assert main(["query", "MATCH (g {fno: $f}) RETURN g.name", "--param", "f=8", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    # the gearbox functional group and the gearbox sub-system both carry fno 8
    assert doc["rows"] == [{"g.name": "Gearbox"}, {"g.name": "Gearbox"}]


def test_exit_codes(capsys, tmp_path):
    assert main(["query", "MATCH (n RETURN n"]) == 1
    assert "QuerySyntaxError" in capsys.readouterr().err
    assert main(["no-such-command"]) == 2
    assert main(["validate", "--graph", str(tmp_path / "missing.json")]) == 2
    assert main(["phrases", "run"]) == 2


def test_pagerank_on_cycle(capsys):
    cycle = resources.files("windkg.data").joinpath("cycle3.kg.json")
    with resources.as_file(cycle) as path:
        assert main(["pagerank", "--graph", str(path)]) == 0
    scores = [float(line.split("\t")[0]) for line in capsys.readouterr().out.splitlines()]
    assert scores == [1.0, 1.0, 1.0]


def test_pagerank_plot_file(tmp_path, capsys):
    out = tmp_path / "bars.json"
    assert main(["pagerank", "--labels", "Blades,Yaw", "--plot-out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["iterations_run"] == 20


def test_build_validate_export(tmp_path, capsys):
    graph = tmp_path / "kg.json"
    assert main(["build", "--out", str(graph)]) == 0
    assert read_graph(graph).node_count == 537
    assert main(["validate", "--graph", str(graph)]) == 0
    script = tmp_path / "kg.cypher"
    assert main(["export", "--graph", str(graph), "--out", str(script)]) == 0
    lines = script.read_text().splitlines()
    assert len(lines) == 537 + 1059
    assert lines[0].startswith("CREATE (n0:System")


def test_phrases_subcommands(capsys):
    assert main(["phrases", "list"]) == 0
    assert "Preventive actions for blades" in capsys.readouterr().out
    assert main(["phrases", "suggest", "Corrective actions for abnormal Pitch"]) == 0
    assert "Pitch Angle Mean Value" in capsys.readouterr().out
    assert main(["phrases", "run", "Preventive actions for blades"]) == 0
    assert main(["phrases", "run", "Corrective actions for abnormal"]) == 1


def test_report_gearbox(model_file, tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert main(["report", "--model", model_file, "--scenario", "gearbox", "--out", str(out)]) == 0
    assert "High temperature on the gearbox oil" in out.read_text()
    for suffix in (".report.json", ".force.json", ".pie.json", ".prediction.json"):
        assert out.with_suffix(suffix).is_file()
    capsys.readouterr()
    assert main(["report-input", "--input", str(out.with_suffix(".prediction.json"))]) == 0
    assert "High temperature on the gearbox oil" in capsys.readouterr().out


def test_predict_row(model_file, capsys):
    assert main(["predict", "--model", model_file, "--row", "0"]) == 0
    assert capsys.readouterr().out.strip()
    assert main(["predict", "--model", model_file, "--row", "999999"]) == 2


def test_synthesize_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["synthesize-data", "--out", str(a), "--seed", "4", "--samples", "50"]) == 0
    assert main(["synthesize-data", "--out", str(b), "--seed", "4", "--samples", "50"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_env(tmp_path, monkeypatch, capsys):
    cycle = resources.files("windkg.data").joinpath("cycle3.kg.json")
    with resources.as_file(cycle) as path:
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"graph": str(path)}))
        monkeypatch.setenv("WINDKG_CONFIG", str(cfg))
        assert main(["query", "MATCH (n) RETURN n"]) == 0
    assert "(3 rows)" in capsys.readouterr().out
    cfg.write_text("{not json")
    assert main(["query", "MATCH (n) RETURN n"]) == 2


def test_repl_handle_and_completions(kg):
    repl = Repl(kg, load_registry())
    assert "WINDING HEATERS" in repl.handle(GENERATOR_QUERY)
    assert repl.handle(":param f=8") == "$f = 8"
    assert "error" not in repl.handle("MATCH (g {fno: $f}) RETURN g")
    assert repl.handle("MATCH (n RETURN n").startswith("error:")
    assert "suggestions:" in repl.handle("Preventive actions for g")
    completions = repl.completions("Corrective actions for abnormal Pitch Angle M")
    assert completions == sorted(completions, key=lambda c: (c.casefold(), c))
    assert "Corrective actions for abnormal Pitch Angle Mean Value" in completions
    assert repl.completions(":pa") == [":param ", ":params"]


def test_repl_run_loop(kg):
    out = io.StringIO()
    Repl(kg, load_registry()).run(io.StringIO("Preventive actions for blades\n:quit\n"), out)
    assert "PrevAct1" in out.getvalue()
