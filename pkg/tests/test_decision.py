import numpy as np
import pytest

from windkg.decision import (
    FEATURE_QUERY,
    InvalidGroup,
    PredictionInput,
    corrective_for_feature,
    corrective_for_group,
    generate_report,
    predictive_for_group,
    prediction_from_model,
    preventive_for_group,
)
from windkg.query import execute
from windkg.xai import Attribution
from windkg.xai.synth import scenario_sample


def _prediction(fno, names, phi):
    attr = Attribution(np.array(phi, dtype=float), 0.0, float(sum(phi)), fno, names, np.zeros(len(names)))
    return PredictionInput(fno, 0.9, attr, "t0")


def test_gearbox_temperature_corrective_actions(kg):
    entries = corrective_for_feature(kg, "GearBoxTemperature_DegC_Mean")
    hit = [e for e in entries if e.details == "High temperature on the gearbox oil"]
    assert hit and hit[0].source_node_label == "CorrAct25"
    assert "Checking the adjustment of louvers" in hit[0].activities
    assert len(hit[0].image_urls) == 3


def test_feature_query_equivalence(kg):
    for feature in kg.nodes_with_label("Feature"):
        name = kg.node(feature).properties["name"]
        direct = {row["p"].id for row in execute(kg, FEATURE_QUERY, {"name": name})}
        assert {e.source_node_id for e in corrective_for_feature(kg, name)} == direct


def test_unknown_feature_and_pitch_max(kg):
    assert corrective_for_feature(kg, "NotAFeature") == []
    entries = corrective_for_feature(kg, "Pitch_Deg_Max")
    assert any(e.source_node_label == "CorrAct45" and e.details == "Blade Position Error" for e in entries)


def test_group_queries(kg):
    gearbox = corrective_for_group(kg, 8)
    assert gearbox and all(e.provenance.matched_group for e in gearbox)
    notes = []
    assert corrective_for_group(kg, 0, notes) == [] and notes
    with pytest.raises(InvalidGroup):
        corrective_for_group(kg, 99)
    prev = {(e.details, e.periodicity) for e in preventive_for_group(kg, 8)}
    assert ("Gearbox oil replacement", "48 months") in prev
    pitch = {(e.details, e.periodicity) for e in preventive_for_group(kg, 12)}
    assert ("Pitch re-tightening", "12 months") in pitch


def test_group_without_subsystem_notes(kg):
    notes = []
    assert preventive_for_group(kg, 11, notes) == [] and predictive_for_group(kg, 11, notes) == []
    assert notes


def test_nofault_report(kg):
    report = generate_report(kg, _prediction(0, ["a", "b"], [0.5, 0.1]))
    assert report.corrective == []
    assert any("Normal operation" in note for note in report.notes)


def test_report_determinism(kg, explainer):
    pred = prediction_from_model(explainer, scenario_sample(8), "fixed")
    assert generate_report(kg, pred).dumps() == generate_report(kg, pred).dumps()
    assert generate_report(kg, pred).render_text() == generate_report(kg, pred).render_text()


def test_prediction_document_round_trip(explainer):
    pred = prediction_from_model(explainer, scenario_sample(6), "t")
    back = PredictionInput.from_dict(pred.to_dict())
    assert back.predicted_fno == pred.predicted_fno == 6
    assert np.array_equal(back.attribution.phi, pred.attribution.phi)


def test_fallback_soundness(kg):
    names = ["Power_kW_Stdev", "Power_kW_Mean", "GearBoxTemperature_DegC_Mean", "Pitch_Deg_Max"]
    report = generate_report(kg, _prediction(8, names, [6.0, 5.0, 3.0, 1.0]), k=2)
    for entry in report.corrective:
        depth = entry.provenance.fallback_depth
        if depth:
            skipped = names[:depth]
            for name in skipped:
                assert corrective_for_feature(kg, name) == []
                assert any(name in note and "next highest-priority" in note for note in report.notes)
    depths = {e.provenance.matched_feature: e.provenance.fallback_depth
              for e in report.corrective if e.provenance.matched_feature}
    assert depths["GearBoxTemperature_DegC_Mean"] == 2


def test_entries_quote_graph_nodes(kg, explainer):
    report = generate_report(kg, prediction_from_model(explainer, scenario_sample(2)))
    for entry in report.corrective + report.preventive + report.predictive:
        node = kg.node(entry.source_node_id)
        assert entry.source_node_label in node.labels
    ids = [e.source_node_id for e in report.corrective]
    assert len(ids) == len(set(ids))


def test_zero_phi_stops_feature_walk(kg):
    report = generate_report(kg, _prediction(8, ["Pitch_Deg_Max", "GearBoxTemperature_DegC_Mean"], [0.0, 0.0]))
    assert all(e.provenance.matched_feature is None for e in report.corrective)
    assert report.pie["degenerate"]
