import json

import pytest

from qcorr.errors import UnknownTarget
from qcorr.verify import RECIPES, VerifyTarget, load_targets, report_json, run_verify


def test_targets_load_and_are_well_formed():
    targets = load_targets()
    ids = [t.id for t in targets]
    assert len(ids) == len(set(ids))
    for t in targets:
        assert t.computation["op"] in RECIPES
        assert t.tolerance > 0


def test_target_needs_positive_tolerance():
    with pytest.raises(ValueError):
        VerifyTarget("x", "", {"op": "measure"}, 0.0, 0.0, "")


def test_prefix_selection():
    report = run_verify(["ghz_alpha0"])
    assert [e["id"] for e in report] == [
        "ghz_alpha0_hsd", "ghz_alpha0_lemid", "ghz_alpha0_lmimd", "ghz_alpha0_qd",
    ]
    assert all(e["pass"] for e in report)


def test_unknown_target():
    with pytest.raises(UnknownTarget):
        run_verify(["no_such_target"])


def test_entry_fields_and_oracle():
    (entry,) = run_verify(["w_pure_qd"])
    assert {"id", "expected", "achieved", "delta", "tolerance", "pass", "oracle", "oracle_delta"} <= set(entry)
    assert entry["pass"] and "flag" not in entry
    assert entry["oracle"] >= entry["achieved"] - 1e-9


def test_list_valued_target():
    (entry,) = run_verify(["w_pure_eigenvalues"])
    assert isinstance(entry["achieved"], list) and entry["pass"]


def test_flag_when_oracle_contradicts_expected(tmp_path):
    d = {
        "id": "fake", "description": "", "expected": 0.9, "tolerance": 2e-4, "paper_anchor": "",
        "computation": {"op": "measure", "kind": "hsd", "state": {"kind": "w", "n": 3}, "n": 3,
                        "pair": [1, 2], "oracle_resolution": 91},
    }
    (entry,) = run_verify("all", table=[VerifyTarget(**d)])
    assert not entry["pass"] and entry["flag"] == "reference_oracle_disagree"


def test_report_json_roundtrip():
    report = run_verify(["ghz_pair_pure"])
    assert json.loads(report_json(report))[0]["id"] == report[0]["id"]
