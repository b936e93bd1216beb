"""Synthetic sweep directories shaped like `nmq run` output."""

import json
import math
from pathlib import Path

CSV_COLUMNS = ("t", "heat_current", "energy_current", "power",
               "fidelity", "trace_error", "min_eig")


def write_csv(path: Path, rows):
    lines = [",".join(CSV_COLUMNS)]
    lines += [",".join(repr(float(v)) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def series_rows(index: int, total_time: float, n: int = 21, damp: float = 1.0):
    rows = []
    for k in range(n):
        t = total_time * k / (n - 1)
        heat = damp * (index + 1) * math.sin(math.pi * t / total_time) ** 2
        power = 0.1 * (index + 1) * math.cos(2.0 * math.pi * t / total_time)
        fidelity = 1.0 - damp * 0.08 * (index + 1) * t / total_time
        rows.append((t, heat, heat + power, power, fidelity, 0.0, 0.0))
    return rows


def make_sweep(root: Path, with_baseline: bool = False, n_runs: int = 3,
               total_time: float = 2.0, scenario: str = "demo"):
    """Create manifest.json plus n_runs CSVs (and optional baselines)."""
    root.mkdir(parents=True, exist_ok=True)
    values = [0.5 * (i + 1) for i in range(n_runs)]
    runs = []
    for i, value in enumerate(values):
        name = f"{scenario}_characteristic_frequency_{value!r}.csv"
        write_csv(root / name, series_rows(i, total_time))
        entry = {
            "label": f"characteristic_frequency_{value!r}",
            "parameter": "characteristic_frequency",
            "value": value,
            "csv": name,
            "error": None,
        }
        if with_baseline:
            base = name.replace(".csv", "_nocontrol.csv")
            write_csv(root / base, series_rows(i, total_time, damp=1.5))
            entry["baseline_csv"] = base
        runs.append(entry)
    manifest = {
        "scenario": scenario,
        "chain": {"n_sites": 5, "total_time": total_time, "coupling": -1.0},
        "sweep": {"parameter": "characteristic_frequency", "values": values,
                  "provenance": {}},
        "runs": runs,
    }
    (root / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest
