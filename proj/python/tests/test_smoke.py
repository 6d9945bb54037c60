import json
from pathlib import Path

import pytest

import mdcust

GOLDEN = Path(__file__).resolve().parents[2] / "tests" / "golden"

EXAMPLE_ELEMENTS = ["x1", "x2", "x3", "x4", "x5", "x6"]
EXAMPLE_EDGES = [
    ("e1", ["x1", "x2"], ["x3", "x4"]),
    ("e2", ["x2"], ["x5"]),
    ("e3", ["x4", "x5"], ["x6"]),
]


def golden(name):
    return (GOLDEN / name).read_text()


def test_adjacency_has_seven_triples():
    triples = mdcust.adjacency(EXAMPLE_ELEMENTS, EXAMPLE_EDGES)
    assert len(triples) == 7
    assert {
        "source": "x2",
        "target": "x5",
        "coinput": [],
        "cooutput": [],
        "path": ["e2"],
    } in triples


def test_closure_cell_x2_x6():
    result = mdcust.closure(EXAMPLE_ELEMENTS, EXAMPLE_EDGES)
    assert not result["truncated"]
    cell = [t for t in result["triples"] if (t["source"], t["target"]) == ("x2", "x6")]
    assert sorted(t["coinput"] for t in cell) == [["x1", "x5"], ["x4"]]
    assert mdcust.closure(EXAMPLE_ELEMENTS, EXAMPLE_EDGES, max_path_len=1)["truncated"]


def test_check_and_normalize():
    assert mdcust.check_model(golden("sec_model.json")) == []
    report = mdcust.check_model(golden("overlap_model.json"))
    assert [v["code"] for v in report] == ["OverlappingConcerns"]
    assert mdcust.normalize_model(golden("sec_model_literal.json")) == golden("sec_model.json")


def test_replay_matches_golden():
    result = mdcust.replay(golden("sec_model.json"), golden("sec_ops.json"))
    assert result["first_invalid"] is None
    assert result["customization"] == golden("sec_customization.json")
    assert result["decisions"][-1]["satisfied_edge"] == "eA"
    assert result["decisions"][-1]["recorded_supports"] == ["x1", "x2"]


def test_session_add_and_delete():
    s = mdcust.Session(golden("sec_model.json"), tenant="acme")
    assert s.add("x4", "SEC")["reason"] == "RequirementsUnsatisfied"
    s.add("x1", "SEC")
    s.add("x2", "SEC")
    assert s.add("x4", "SEC")["verdict"] == "valid"
    assert s.delete("x1")["reason"] == "RequiredByOthers"
    assert s.delete("x4")["removed_edges"] == ["eA"]
    assert s.selected == ["x1", "x2"]
    assert s.state_version == 4


def test_guidance_and_oracle():
    entries = mdcust.guidance(golden("example_model.json"), "example", target="x6")
    assert len(entries) == 5
    violations = mdcust.oracle_valid(golden("sec_model.json"), golden("sec_bad_customization.json"))
    assert [v["clause"] for v in violations] == ["edge-unsatisfied"]


def test_generate_is_deterministic():
    a = mdcust.generate_model(components=40, customization_points=4, seed=7)
    assert a == mdcust.generate_model(components=40, customization_points=4, seed=7)
    assert len(json.loads(a)["components"]) == 40
    assert mdcust.check_model(a) == []


def test_errors_raise():
    with pytest.raises(mdcust.Error):
        mdcust.normalize_model("{")
    with pytest.raises(mdcust.Error):
        mdcust.generate_model(components=2, dimensions=3)
