import json
import os

import pytest
from click.testing import CliRunner

from banachlab import FiniteVector
from banachlab.cli import main
from banachlab.lab import (CSV_HEADER, EXIT_OK, EXIT_PARSE, EXIT_UNKNOWN_OPERATION,
                           EXIT_VIOLATION, ExperimentManifest, ManifestError, ScanRecord,
                           emit_report, records_from_json, run_experiment)

ONES4 = FiniteVector.ones([1, 2, 3, 4]).to_json()


def manifest(op, params, seed=0, **kw):
    return ExperimentManifest("t", op, params, seed, **kw)


def test_manifest_round_trip():
    m = manifest("norm", {"space": {"type": "lp", "p": 2}}, 3, output="x.csv")
    assert ExperimentManifest.from_json(json.dumps(m.to_json())) == m


def test_manifest_rejects_unknown_and_missing_keys():
    with pytest.raises(ManifestError):
        ExperimentManifest.from_json({"name": "a", "operation": "norm", "seed": 1, "colour": 2})
    with pytest.raises(ManifestError):
        ExperimentManifest.from_json({"name": "a", "operation": "norm"})
    with pytest.raises(ManifestError):
        ExperimentManifest.from_json({"name": "a", "operation": "norm", "seed": 1.5})
    with pytest.raises(ManifestError):
        ExperimentManifest.from_json("{not json")


def test_tsirelson_norm_manifest():
    out = run_experiment(manifest("tsirelson.norm", {"v": ONES4}))
    assert out.status == EXIT_OK
    assert out.records[0].values["norm"] == pytest.approx(1.5)


def test_unknown_operation():
    out = run_experiment(manifest("frobnicate", {}))
    assert out.status == EXIT_UNKNOWN_OPERATION and out.records == []


def test_bad_parameters():
    out = run_experiment(manifest("norm", {"space": {"type": "lp", "p": 0.5}, "v": ONES4}))
    assert out.status == EXIT_PARSE


def test_violation_status():
    # lemma16 lower check with the literal bound fails for r = 2
    params = {"space": {"type": "lp", "p": 2}, "p": 2, "direction": "lower",
              "x": FiniteVector.from_array([0.6, 0.8]).to_json(), "delta": 0.2, "samples": 400}
    out = run_experiment(manifest("verify.lemma16", params, 3))
    assert out.status == EXIT_VIOLATION and out.records[0].violations > 0


def test_determinism_excluding_wall_time():
    m = manifest("scan.modulus", {"map": {"from": {"type": "lp", "p": 1}, "to": {"type": "lp", "p": 2}},
                                  "scales": [0.01, 0.1], "samples": 50}, 11)
    a = emit_report(run_experiment(m).records, "csv", timing=False)
    b = emit_report(run_experiment(m).records, "csv", timing=False)
    assert a == b


def test_emit_report_shapes():
    rec = ScanRecord("e", {"a": 1}, {"v": 0.5}, 0, 7, 0.1)
    lines = emit_report([rec], "csv").splitlines()
    assert len(lines) == 2 and lines[0] == ",".join(CSV_HEADER)
    many = [ScanRecord("e", {"k": k}, {"v": k / 3}, 0, 7) for k in range(100)]
    back = records_from_json(emit_report(many, "json"))
    assert [r.parameters["k"] for r in back] == list(range(100))
    assert emit_report(back, "json") == emit_report(many, "json")
    with pytest.raises(ValueError):
        emit_report([], "csv")


def test_cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("LAB_CACHE_DIR", str(tmp_path))
    first = run_experiment(manifest("tsirelson.norm", {"v": ONES4}))
    files = [f for _, _, fs in os.walk(tmp_path) for f in fs]
    assert len(files) == 1
    second = run_experiment(manifest("tsirelson.norm", {"v": ONES4}))
    assert first.records[0].values == second.records[0].values


def test_csv_output_appends(tmp_path):
    path = str(tmp_path / "out.csv")
    m = manifest("norm", {"space": {"type": "lp", "p": 2}, "v": ONES4}, output=path)
    run_experiment(m)
    run_experiment(m)
    lines = open(path).read().splitlines()
    assert len(lines) == 3 and lines[0] == ",".join(CSV_HEADER)


def test_cli_commands(tmp_path):
    runner = CliRunner()
    r = runner.invoke(main, ["norm", "--space", '{"type": "lp", "p": 2}',
                             "--v", '[{"i": 1, "v": 3}, {"i": 2, "v": 4}]'])
    assert r.exit_code == 0 and json.loads(r.output)[0]["values"]["norm"] == 5.0
    r = runner.invoke(main, ["tsirelson", "norm", "--v", json.dumps(ONES4), "--format", "csv"])
    assert r.exit_code == 0 and r.output.startswith("experiment,")
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"name": "x", "operation": "nope", "seed": 1}))
    assert runner.invoke(main, ["run", str(path)]).exit_code == EXIT_UNKNOWN_OPERATION
    path.write_text("{broken")
    assert runner.invoke(main, ["run", str(path)]).exit_code == EXIT_PARSE
    r = runner.invoke(main, ["mazur", "solve", "--space", '{"type": "lp", "p": 3}',
                             "--b", '[{"i": 1, "v": 0.5}, {"i": 2, "v": 0.25}, {"i": 3, "v": 0.25}]'])
    assert r.exit_code == 0
