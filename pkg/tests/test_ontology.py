import copy
from collections import Counter
import json
from pathlib import Path

import pytest

from windkg.graph import PropertyGraph
from windkg.ontology import (
    ManifestError,
    build_ontology,
    check_manifest,
    functional_groups,
    load_manifest,
    manifest_from_dict,
    validate_ontology,
)

from windkg.ontology.validate import family_of  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def manifest_doc():
    from importlib import resources

    return json.loads(resources.files("windkg.data").joinpath("manifest.json").read_text(encoding="utf-8"))


def test_bundled_counts(kg):
    assert kg.count_by_label("Feature") == 102
    families = Counter(family_of(n.labels) for n in kg.nodes())
    assert families["FaultEvent"] == 57
    assert (families["PrevAct"], families["PredAct"], families["CorrAct"]) == (233, 11, 57)
    assert families["Alarm"] == 26
    assert len(functional_groups(kg)) == 14
    system = kg.nodes_with_label("System")[0]
    assert len(kg.neighbors(system, "CONTAINS", "out")) == 11
    assert (kg.node_count, kg.relationship_count) == (537, 1059)


def test_relationship_types_are_declared(kg):
    declared = set(load_manifest().relationship_types)
    assert {rel.type for rel in kg.relationships()} <= declared


def test_fno_and_alarm_numbers(kg):
    fnos = sorted(kg.node(n).properties["fno"] for n in functional_groups(kg))
    assert fnos == list(range(14))
    alarm_nos = [n.properties["alarm_no"] for n in kg.nodes() if "alarm_no" in n.properties]
    assert len(alarm_nos) == len(set(alarm_nos)) == 26
    assert all("901" <= a <= "926" for a in alarm_nos)


def test_minimal_manifest_without_cardinality():
    m = manifest_from_dict({"system": {"key": "system", "label": "System", "properties": {"name": "T"}}})
    g = build_ontology(m, check_cardinality=False)
    assert g.node_count == 1 and g.relationship_count == 0
    with pytest.raises(ManifestError) as info:
        build_ontology(m)
    assert info.value.rule == "M1"


def test_duplicate_fno_rejected(manifest_doc):
    doc = copy.deepcopy(manifest_doc)
    groups = doc["functional_groups"]
    groups[2]["properties"]["fno"] = groups[3]["properties"]["fno"]
    with pytest.raises(ManifestError) as info:
        check_manifest(manifest_from_dict(doc))
    assert info.value.rule == "M2"
    assert "M2" in str(info.value)


def test_alarm_number_out_of_range(manifest_doc):
    doc = copy.deepcopy(manifest_doc)
    doc["alarms"][0]["properties"]["alarm_no"] = "999"
    with pytest.raises(ManifestError) as info:
        check_manifest(manifest_from_dict(doc))
    assert info.value.rule == "M3"


def test_undeclared_type_and_dangling_key(manifest_doc):
    doc = copy.deepcopy(manifest_doc)
    doc["relationships"]["BOGUS"] = [["system", "hub:scada"]]
    with pytest.raises(ManifestError):
        check_manifest(manifest_from_dict(doc))
    doc = copy.deepcopy(manifest_doc)
    doc["relationships"]["FOR"].append(["system", "nowhere"])
    with pytest.raises(ManifestError) as info:
        check_manifest(manifest_from_dict(doc))
    assert info.value.rule == "M4"


def test_build_is_deterministic():
    assert build_ontology(load_manifest()) == build_ontology(load_manifest())


def test_bundled_validation_matches_golden(kg):
    report = validate_ontology(kg)
    assert report.errors == []
    golden = json.loads((GOLDEN / "validation_bundled.json").read_text())
    assert report.to_dict() == golden


def test_empty_graph_empty_report():
    report = validate_ontology(PropertyGraph())
    assert len(report) == 0 and report.ok


def test_corract_without_for_is_one_r1():
    g = PropertyGraph()
    hub = g.add_node(["Corrective"])
    act = g.add_node(["CorrAct1"], {"activities": ["Replace"]})
    g.add_relationship(hub, "ACTION", act)
    report = validate_ontology(g)
    assert [(v.rule, tuple(v.node_ids)) for v in report.errors] == [("R1", (act,))]


def test_isolated_node_only_warns():
    g = PropertyGraph()
    g.add_node(["Feature"], {"name": "x"})
    report = validate_ontology(g)
    assert report.ok
    assert [v.rule for v in report.warnings] == ["R5"]


def test_removed_alarm_link_is_r3(manifest_doc):
    doc = copy.deepcopy(manifest_doc)
    doc["relationships"]["RELATESTO"] = [
        r for r in doc["relationships"]["RELATESTO"]
        if not (isinstance(r, list) and r[0] == "Alarm1") and not (isinstance(r, dict) and r["start"] == "Alarm1")
    ]
    g = build_ontology(manifest_from_dict(doc), check_cardinality=False)
    assert "R3" in {v.rule for v in validate_ontology(g).errors}
