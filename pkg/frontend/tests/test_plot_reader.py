"""Sweep-directory reader: schema validation and series completeness."""

import json

import pytest
from plot_fixtures import make_sweep, series_rows, write_csv

from nmq_plot import MissingSeries, SchemaMismatch, load_bundle, run_label

FIG2_COLS = ("t", "heat_current", "fidelity")


def test_load_bundle_happy_path(tmp_path):
    make_sweep(tmp_path)
    bundle = load_bundle(tmp_path, FIG2_COLS)
    assert bundle.scenario == "demo"
    assert bundle.total_time == 2.0
    assert [r.label for r in bundle.runs] == [
        r"$\gamma = 0.5$", r"$\gamma = 1$", r"$\gamma = 1.5$"]
    assert bundle.units_note == r"$\hbar = 1$, $J = -1$"
    assert all(r.baseline is None for r in bundle.runs)
    assert bundle.runs[0].data["t"][-1] == pytest.approx(2.0)


def test_load_bundle_with_baselines(tmp_path):
    make_sweep(tmp_path, with_baseline=True)
    bundle = load_bundle(tmp_path, FIG2_COLS, need_baseline=True)
    assert all(r.baseline is not None for r in bundle.runs)
    assert bundle.runs[0].baseline["fidelity"][-1] < \
        bundle.runs[0].data["fidelity"][-1]


def test_missing_manifest(tmp_path):
    with pytest.raises(MissingSeries):
        load_bundle(tmp_path, FIG2_COLS)


def test_malformed_manifest(tmp_path):
    (tmp_path / "manifest.json").write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaMismatch):
        load_bundle(tmp_path, FIG2_COLS)


def _rewrite_manifest(tmp_path, mutate):
    path = tmp_path / "manifest.json"
    manifest = json.loads(path.read_text(encoding="utf-8"))
    mutate(manifest)
    path.write_text(json.dumps(manifest), encoding="utf-8")


def test_manifest_missing_key(tmp_path):
    make_sweep(tmp_path)
    _rewrite_manifest(tmp_path, lambda m: m.pop("runs"))
    with pytest.raises(SchemaMismatch):
        load_bundle(tmp_path, FIG2_COLS)


def test_empty_sweep_is_missing_series(tmp_path):
    make_sweep(tmp_path)
    _rewrite_manifest(tmp_path, lambda m: m.update(runs=[]))
    with pytest.raises(MissingSeries):
        load_bundle(tmp_path, FIG2_COLS)


def test_failed_run_is_missing_series(tmp_path):
    make_sweep(tmp_path)

    def mutate(m):
        m["runs"][1]["error"] = {"type": "TraceDrift", "message": "boom"}

    _rewrite_manifest(tmp_path, mutate)
    with pytest.raises(MissingSeries, match="TraceDrift"):
        load_bundle(tmp_path, FIG2_COLS)


def test_deleted_csv_is_missing_series(tmp_path):
    manifest = make_sweep(tmp_path)
    (tmp_path / manifest["runs"][0]["csv"]).unlink()
    with pytest.raises(MissingSeries):
        load_bundle(tmp_path, FIG2_COLS)


def test_missing_column_is_schema_mismatch(tmp_path):
    manifest = make_sweep(tmp_path)
    target = tmp_path / manifest["runs"][0]["csv"]
    lines = target.read_text(encoding="utf-8").splitlines()
    trimmed = [",".join(line.split(",")[:2]) for line in lines]
    target.write_text("\n".join(trimmed) + "\n", encoding="utf-8")
    with pytest.raises(SchemaMismatch, match="fidelity"):
        load_bundle(tmp_path, FIG2_COLS)


def test_short_csv_is_schema_mismatch(tmp_path):
    manifest = make_sweep(tmp_path)
    write_csv(tmp_path / manifest["runs"][0]["csv"],
              series_rows(0, 2.0, n=2)[:1])
    with pytest.raises(SchemaMismatch):
        load_bundle(tmp_path, FIG2_COLS)


def test_absent_baseline_is_missing_series(tmp_path):
    make_sweep(tmp_path, with_baseline=False)
    with pytest.raises(MissingSeries, match="baseline"):
        load_bundle(tmp_path, FIG2_COLS, need_baseline=True)


def test_run_label():
    assert run_label(None, None) == "run"
    assert run_label("temperature", 30.0) == "$T = 30$"
    assert run_label("coupling_strength", 0.01) == r"$\Gamma = 0.01$"
