"""Load one sweep directory: manifest.json plus the per-run CSV files.

This package talks to the simulator only through its published artifacts.
A sweep directory contains manifest.json and one CSV per run (plus one
`*_nocontrol.csv` baseline per run when the scenario was pulsed).  Every
series a figure needs must actually exist: a failed run, a missing file,
or an empty sweep raises MissingSeries, while structural problems (bad
JSON, absent manifest keys, missing CSV columns) raise SchemaMismatch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MissingSeries, SchemaMismatch

# symbols for the sweepable bath parameters, used in legend labels
PARAMETER_SYMBOLS = {
    "coupling_strength": r"\Gamma",
    "characteristic_frequency": r"\gamma",
    "temperature": r"T",
}

_MANIFEST_KEYS = ("scenario", "chain", "sweep", "runs")
_CHAIN_KEYS = ("total_time", "coupling")


@dataclass(frozen=True)
class RunSeries:
    """One run's curves: the CSV table and an optional uncontrolled twin."""

    label: str
    parameter: str | None
    value: float | None
    data: np.ndarray
    baseline: np.ndarray | None = None


@dataclass(frozen=True)
class SweepBundle:
    """Everything a figure needs from one sweep directory."""

    scenario: str
    total_time: float
    coupling: float
    runs: list[RunSeries]

    @property
    def units_note(self) -> str:
        return rf"$\hbar = 1$, $J = {self.coupling:g}$"


def run_label(parameter: str | None, value: float | None) -> str:
    if parameter is None or value is None:
        return "run"
    symbol = PARAMETER_SYMBOLS.get(parameter, parameter)
    return rf"${symbol} = {value:g}$"


def _load_csv(path: Path, columns: tuple[str, ...]) -> np.ndarray:
    if not path.is_file():
        raise MissingSeries(f"series file {path.name} is missing from {path.parent}")
    data = np.genfromtxt(path, delimiter=",", names=True)
    names = data.dtype.names or ()
    absent = [c for c in columns if c not in names]
    if absent:
        raise SchemaMismatch(
            f"{path.name} lacks required column(s) {', '.join(absent)}; "
            f"header has {', '.join(names)}")
    if data.ndim == 0 or data.shape[0] < 2:
        raise SchemaMismatch(f"{path.name} holds fewer than two samples")
    return data


def load_bundle(in_dir: str | Path, columns: tuple[str, ...],
                need_baseline: bool = False) -> SweepBundle:
    """Read manifest.json and every run CSV, validating as we go."""
    in_dir = Path(in_dir)
    manifest_path = in_dir / "manifest.json"
    if not manifest_path.is_file():
        raise MissingSeries(f"no manifest.json in {in_dir}: nothing to plot")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaMismatch(f"cannot parse {manifest_path}: {exc}") from None

    for key in _MANIFEST_KEYS:
        if key not in manifest:
            raise SchemaMismatch(f"manifest lacks required key {key!r}")
    chain = manifest["chain"]
    if not isinstance(chain, dict) or any(k not in chain for k in _CHAIN_KEYS):
        raise SchemaMismatch("manifest chain section lacks total_time/coupling")

    entries = manifest["runs"]
    if not entries:
        raise MissingSeries("manifest lists no runs: nothing to plot")

    runs = []
    for entry in entries:
        label = run_label(entry.get("parameter"), entry.get("value"))
        if entry.get("error") is not None:
            err = entry["error"]
            raise MissingSeries(
                f"run {entry.get('label', '?')} failed "
                f"({err.get('type')}: {err.get('message')}); its series "
                "cannot be plotted")
        if not entry.get("csv"):
            raise MissingSeries(f"run {entry.get('label', '?')} names no CSV file")
        data = _load_csv(in_dir / entry["csv"], columns)
        baseline = None
        if need_baseline:
            if not entry.get("baseline_csv"):
                raise MissingSeries(
                    f"run {entry.get('label', '?')} has no uncontrolled "
                    "baseline series, which this figure must plot")
            baseline = _load_csv(in_dir / entry["baseline_csv"], columns)
        runs.append(RunSeries(label=label, parameter=entry.get("parameter"),
                              value=entry.get("value"), data=data,
                              baseline=baseline))

    return SweepBundle(
        scenario=str(manifest["scenario"]),
        total_time=float(chain["total_time"]),
        coupling=float(chain["coupling"]),
        runs=runs,
    )
