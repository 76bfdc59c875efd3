import csv
import hashlib
import json

import numpy as np
import pytest

from povm_fisher.cli import main
from povm_fisher.frame import estimation_bounds, frame_spectrum
from povm_fisher.reporting import dumps
from povm_fisher.states import (
    bloch_state,
    build_projective,
    build_sic_qubit,
    maximally_mixed,
    povm_to_json,
    random_ic_povm,
    random_state,
    state_to_json,
)

FIG1_R = (0.3, 0.25, 0.4)


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "mixed": write(tmp_path / "mixed.json", state_to_json(maximally_mixed(2))),
        "fig1": write(tmp_path / "fig1.json", state_to_json(bloch_state(FIG1_R))),
        "sic": write(tmp_path / "sic.json", povm_to_json(build_sic_qubit())),
        "proj": write(tmp_path / "proj.json", povm_to_json(build_projective((0, 0, 1)))),
    }


def test_validate_ok(files, capsys):
    assert main(["validate", "--state", files["mixed"], "--povm", files["sic"]]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["state"]["valid"] and out["povm"]["is_ic"] and out["povm"]["ic_rank"] == 4


def test_validate_incomplete(tmp_path, files, capsys):
    doc = povm_to_json(build_sic_qubit())
    doc["effects"] = doc["effects"][:3]
    path = write(tmp_path / "bad.json", doc)
    assert main(["validate", "--state", files["mixed"], "--povm", path]) == 1
    out = json.loads(capsys.readouterr().out)
    assert [v["code"] for v in out["povm"]["violations"]] == ["CompletenessViolated"]


def test_validate_reports_indices(tmp_path, files, capsys):
    doc = povm_to_json([np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])])
    path = write(tmp_path / "neg.json", doc)
    assert main(["validate", "--state", files["mixed"], "--povm", path]) == 1
    out = json.loads(capsys.readouterr().out)
    assert {"code": "EffectNotPositive", "index": 1} in [
        {k: v[k] for k in ("code", "index")} for v in out["povm"]["violations"] if "index" in v
    ]


def test_validate_malformed_json(tmp_path, files):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["validate", "--state", str(path), "--povm", files["sic"]]) == 2
    assert main(["validate", "--state", str(tmp_path / "missing.json"), "--povm", files["sic"]]) == 2


def test_analyze_sic_maximally_mixed(tmp_path, files):
    out = tmp_path / "report.json"
    assert main(["analyze", "--state", files["mixed"], "--povm", files["sic"], "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["fisher_symmetric"] is True
    assert report["bounds"]["lambda_min"] == pytest.approx(1 / 3)
    assert report["bounds"]["lambda_second"] == pytest.approx(1 / 3)
    assert report["spectrum"]["degenerate_extremes"]["best_multiplicity"] == 3
    assert any("DegenerateExtremes" in w for w in report["warnings"])
    digest = hashlib.sha256(open(files["mixed"], "rb").read()).hexdigest()
    assert report["inputs"]["state_sha256"] == digest


def test_analyze_fig1_matches_library(tmp_path, files):
    out = tmp_path / "report.json"
    assert main(["analyze", "--state", files["fig1"], "--povm", files["sic"], "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["fisher_symmetric"] is False
    spec = frame_spectrum(build_sic_qubit(), bloch_state(FIG1_R))
    bounds = estimation_bounds(spec)
    # 17 significant digits round-trip exactly
    assert report["bounds"]["lambda_min"] == bounds.lower
    assert report["bounds"]["lambda_second"] == bounds.upper
    assert report["spectrum"]["lambda_second"] == report["bounds"]["lambda_second"]
    assert report["spectrum"]["eigenvalues"] == spec.eigenvalues.tolist()
    assert bounds.lower < bounds.upper


def test_analyze_non_ic(files, capsys):
    assert main(["analyze", "--state", files["mixed"], "--povm", files["proj"]]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["bounds"] is None
    assert any(w.startswith("NotInformationallyComplete") for w in report["warnings"])
    np.testing.assert_allclose(report["spectrum"]["eigenvalues"], [1, 1, 0, 0], atol=1e-10)


def test_analyze_rank_deficient(tmp_path, files):
    path = write(tmp_path / "pure.json", state_to_json(np.diag([1.0, 0.0])))
    assert main(["analyze", "--state", path, "--povm", files["sic"]]) == 1


def test_scan_fig1(tmp_path, files):
    csv_path = tmp_path / "scan.csv"
    assert main(["scan", "--state", files["fig1"], "--povm", files["sic"], "--grid", "10000", "--out", str(csv_path)]) == 0
    side = json.loads(csv_path.with_suffix(".json").read_text())
    ref = side["spectral_reference"]
    assert ref["best_angular_error_deg"] <= 2 and ref["worst_angular_error_deg"] <= 2
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == ["nx", "ny", "nz", "ratio"] and len(rows) == 10_001


def test_scan_minimum_grid(tmp_path, files):
    csv_path = tmp_path / "scan.csv"
    assert main(["scan", "--state", files["fig1"], "--povm", files["sic"], "--grid", "12", "--out", str(csv_path)]) == 0
    assert len(csv_path.read_text().splitlines()) == 13
    assert main(["scan", "--state", files["fig1"], "--povm", files["sic"], "--grid", "11", "--out", str(csv_path)]) == 1


def test_scan_d3_deterministic(tmp_path):
    state = write(tmp_path / "s3.json", state_to_json(random_state(3, 11)))
    povm = write(tmp_path / "p3.json", povm_to_json(random_ic_povm(3, 10, 11)))
    digests = []
    for k in range(2):
        csv_path = tmp_path / f"scan{k}.csv"
        args = ["scan", "--state", state, "--povm", povm, "--samples", "1000", "--seed", "7", "--out", str(csv_path)]
        assert main(args) == 0
        digests.append(hashlib.sha256(csv_path.read_bytes()).hexdigest())
        assert csv_path.with_suffix(".json").read_text() == (tmp_path / "scan0.json").read_text()
    assert digests[0] == digests[1]
    header = (tmp_path / "scan0.csv").read_text().splitlines()[0]
    assert header == ",".join([f"coord_{i}" for i in range(1, 9)] + ["ratio"])


def test_fig1_bundle(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["fig1", "--out", str(a)]) == 0
    assert main(["fig1", "--out", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert json.loads((a / "report_maximally_mixed.json").read_text())["fisher_symmetric"] is True
    report = json.loads((a / "report_fig1.json").read_text())
    assert report["fisher_symmetric"] is False and report["notes"]
    cmp = json.loads((a / "comparison.json").read_text())
    assert cmp["best_angular_error_deg"] <= 2 and cmp["worst_angular_error_deg"] <= 2
    assert "Bloch vector" in cmp["provenance"]


def test_log_level_env(monkeypatch, files, capsys):
    monkeypatch.setenv("POVM_FISHER_LOG", "error")
    assert main(["analyze", "--state", files["mixed"], "--povm", files["proj"]]) == 0
    assert capsys.readouterr().err == ""
    monkeypatch.setenv("POVM_FISHER_LOG", "warn")
    assert main(["analyze", "--state", files["mixed"], "--povm", files["proj"]]) == 0
    assert "NotInformationallyComplete" in capsys.readouterr().err


def test_short_flags_rejected(files):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--sta", files["mixed"], "--povm", files["sic"]])
    assert exc.value.code == 2


def test_dumps_seventeen_digits():
    text = dumps({"x": 0.1, "n": 3, "ok": True, "inf": float("inf"), "v": np.array([1.0, 2.5])})
    assert '"x": 0.10000000000000001' in text
    assert '"v": [1.0, 2.5]' in text and '"inf": "Infinity"' in text
    assert json.loads(text)["x"] == 0.1
