"""Scenario engine: resolve configs, run sweeps, write CSV + manifest.

A scenario is one figure-style protocol: a chain, a bath channel, three
bath parameters of which at most one carries a sweep list, an optional
pulse, and integrator settings.  Five presets (fig2a, fig2b, fig2c,
fig3, fig4) ship with the package; `custom` builds everything from the
config file.  Each sweep value becomes one simulation and one CSV; a
JSON manifest with the full resolved parameter set, per-run invariant
outcomes, and wall times is written last.

Config files are flat INI text (key = value under [section] headers)
with exhaustive key validation: unknown sections or keys are errors.
CLI flags override config values, which override preset values.
"""

from __future__ import annotations

import json
import math
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from configparser import ConfigParser
from configparser import Error as IniError
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

import numpy as np

from . import model
from .bath import BathSpec, CHANNEL_SIGMA_MINUS
from .control import (
    NO_CONTROL,
    PAPER_COMPAT_TOL,
    PULSE_NONE,
    PULSE_SINE,
    ZERO_TOL,
    ControlSpec,
    PulseCondition,
    condition_residual,
)
from .dynamics import (
    MODE_FULL,
    MODE_SECTOR,
    IntegratorConfig,
    closed_evolve,
    evolve,
    lindblad_evolve,
    resolve_steps,
    simulation_space,
)
from .errors import ConfigInvalid, InvariantViolation, NmqError
from .hilbert import HilbertSpec
from .model import ChainSpec
from .thermo import ThermoRecord, ThermoSampler, first_law_report

ENGINE_NONMARKOV = "nonmarkov"
ENGINE_LINDBLAD = "lindblad"
ENGINE_CLOSED = "closed"
ENGINES = (ENGINE_NONMARKOV, ENGINE_LINDBLAD, ENGINE_CLOSED)

SCENARIOS = ("fig2a", "fig2b", "fig2c", "fig3", "fig4", "custom")

# Bath parameters that accept a comma-separated sweep list.
SWEEPABLE = ("coupling_strength", "characteristic_frequency", "temperature")

CSV_COLUMNS = ("t", "heat_current", "energy_current", "power",
               "fidelity", "trace_error", "min_eig")

PROV_PAPER = "paper"
PROV_DEFAULT = "repo default, not paper-verified"
PROV_CONFIG = "config"

# Sweep values that are anchored in the source text; everything else a
# preset sweeps is a repo default.
_ANCHORED = {
    "coupling_strength": (0.01,),
    "characteristic_frequency": (0.5, 10.0),
    "temperature": (30.0, 50.0),
}

_KNOWN_KEYS = {
    "scenario": ("name", "engine", "mode", "paper_compat"),
    "chain": ("n_sites", "total_time", "coupling", "cut_bond"),
    "bath": ("channel", "coupling_strength", "characteristic_frequency",
             "temperature"),
    "control": ("kind", "intensity", "a", "b", "half_period", "gap_rescaled"),
    "integrator": ("dt", "record_every"),
    "output": ("dir",),
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved scenario: everything a run needs, no hidden state.

    The three bath parameters are tuples; a tuple longer than one is a
    sweep.  All runs are deterministic (fixed-step integrator, no RNG).
    """

    scenario: str
    chain: ChainSpec
    channel: str
    coupling_strength: tuple[float, ...]
    characteristic_frequency: tuple[float, ...]
    temperature: tuple[float, ...]
    control: ControlSpec = NO_CONTROL
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    out_dir: str = "."
    engine: str = ENGINE_NONMARKOV
    mode: str = MODE_SECTOR
    paper_compat: bool = False
    provenance: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name in SWEEPABLE:
            vals = tuple(float(v) for v in getattr(self, name))
            if not vals:
                raise ConfigInvalid(f"{name} needs at least one value")
            object.__setattr__(self, name, vals)
        if self.scenario not in SCENARIOS:
            raise ConfigInvalid(f"unknown scenario {self.scenario!r}")
        if self.engine not in ENGINES:
            raise ConfigInvalid(f"unknown engine {self.engine!r}")
        if self.mode not in (MODE_SECTOR, MODE_FULL):
            raise ConfigInvalid(f"unknown mode {self.mode!r}")

    @property
    def sweep_parameter(self) -> str | None:
        multi = [name for name in SWEEPABLE if len(getattr(self, name)) > 1]
        if len(multi) > 1:
            raise ConfigInvalid(
                "at most one bath parameter may sweep, got "
                + " and ".join(multi))
        return multi[0] if multi else None


@dataclass(frozen=True)
class RunPlan:
    """One sweep member: label used in filenames plus its bath."""

    label: str
    parameter: str | None
    value: float | None
    bath: BathSpec


@dataclass
class RunResult:
    plan: RunPlan
    records: list[ThermoRecord] = field(default_factory=list)
    baseline: list[ThermoRecord] | None = None
    wall_time: float = 0.0
    error: NmqError | None = None


def run_plans(cfg: ScenarioConfig) -> list[RunPlan]:
    param = cfg.sweep_parameter
    fixed = {name: getattr(cfg, name)[0] for name in SWEEPABLE}

    def bath_for(**overrides) -> BathSpec:
        vals = {**fixed, **overrides}
        return BathSpec.uniform(cfg.chain.n_sites, vals["coupling_strength"],
                                vals["characteristic_frequency"],
                                vals["temperature"], cfg.channel)

    if param is None:
        return [RunPlan("run", None, None, bath_for())]
    return [RunPlan(f"{param}_{value!r}", param, value, bath_for(**{param: value}))
            for value in getattr(cfg, param)]


def presets(name: str) -> ScenarioConfig:
    """Repo presets for the five figure protocols (out_dir left generic)."""
    ring5 = ChainSpec(5, 10.0)
    table = {
        "fig2a": dict(chain=ring5, channel="sigma_minus",
                      coupling_strength=(0.002, 0.005, 0.01),
                      characteristic_frequency=(0.5,), temperature=(50.0,)),
        "fig2b": dict(chain=ring5, channel="sigma_minus",
                      coupling_strength=(0.01,),
                      characteristic_frequency=(0.5, 2.0, 10.0),
                      temperature=(30.0,)),
        "fig2c": dict(chain=ring5, channel="sigma_minus",
                      coupling_strength=(0.01,),
                      characteristic_frequency=(10.0,),
                      temperature=(10.0, 30.0, 50.0)),
        "fig3": dict(chain=ChainSpec(5, 20.0), channel="sigma_minus",
                     coupling_strength=(0.01,),
                     characteristic_frequency=(0.5, 2.0, 10.0),
                     temperature=(50.0,)),
        "fig4": dict(chain=ChainSpec(10, math.pi / 3), channel="sigma_z",
                     coupling_strength=(0.01,),
                     characteristic_frequency=(0.5, 2.0, 10.0),
                     temperature=(50.0,),
                     control=ControlSpec(PULSE_SINE, intensity=2.405 * 30,
                                         a=1.0, b=0.0,
                                         half_period=math.pi / 30,
                                         gap_rescaled=True),
                     integrator=IntegratorConfig(dt=math.pi / 6000),
                     paper_compat=True),
    }
    if name not in table:
        raise ConfigInvalid(f"no preset named {name!r}")
    return ScenarioConfig(scenario=name, **table[name])


def _parse_bool(text: str, what: str) -> bool:
    val = text.strip().lower()
    if val in ("1", "true", "yes", "on"):
        return True
    if val in ("0", "false", "no", "off"):
        return False
    raise ConfigInvalid(f"{what}: expected a boolean, got {text!r}")


def _parse_float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigInvalid(f"{what}: expected a number, got {text!r}") from None


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigInvalid(f"{what}: expected an integer, got {text!r}") from None


def _parse_floats(text: str, what: str) -> tuple[float, ...]:
    toks = [tok.strip() for tok in text.split(",") if tok.strip()]
    if not toks:
        raise ConfigInvalid(f"{what}: expected one or more numbers")
    return tuple(_parse_float(tok, what) for tok in toks)


def parse_config_file(path: str | Path) -> dict[str, dict[str, str]]:
    """Read an INI config and reject unknown sections or keys."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from None
    parser = ConfigParser(delimiters=("=",), inline_comment_prefixes=("#",),
                          interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(path))
    except IniError as exc:
        raise ConfigInvalid(f"malformed config: {exc}") from None
    data: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigInvalid(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN_KEYS[section]:
                raise ConfigInvalid(
                    f"unknown key {key!r} in [{section}] "
                    f"(known: {', '.join(_KNOWN_KEYS[section])})")
        data[section] = dict(parser[section])
    return data


def build_config(config_path: str | Path | None,
                 scenario: str | None = None,
                 out: str | None = None,
                 dt: float | None = None,
                 mode: str | None = None,
                 engine: str | None = None,
                 paper_compat: bool | None = None) -> ScenarioConfig:
    """Resolve CLI flags + config file + preset into a ScenarioConfig.

    Precedence: CLI flag > config key > preset value > global default.
    """
    data = parse_config_file(config_path) if config_path is not None else {}
    sc = data.get("scenario", {})
    name = scenario or sc.get("name")
    if name is None:
        raise ConfigInvalid("no scenario selected: pass --scenario or set "
                            "[scenario] name")
    if name not in SCENARIOS:
        raise ConfigInvalid(f"unknown scenario {name!r}, expected one of "
                            + "|".join(SCENARIOS))

    base = presets(name) if name != "custom" else None

    def pick(section: str, key: str, parse, fallback):
        raw = data.get(section, {}).get(key)
        return parse(raw, f"[{section}] {key}") if raw is not None else fallback

    ch = data.get("chain", {})
    if base is None and not {"n_sites", "total_time"} <= set(ch):
        raise ConfigInvalid("custom scenario needs [chain] n_sites and total_time")
    chain = ChainSpec(
        n_sites=pick("chain", "n_sites", _parse_int,
                     base.chain.n_sites if base else None),
        total_time=pick("chain", "total_time", _parse_float,
                        base.chain.total_time if base else None),
        coupling=pick("chain", "coupling", _parse_float,
                      base.chain.coupling if base else -1.0),
        cut_bond=pick("chain", "cut_bond", _parse_int,
                      base.chain.cut_bond if base else None),
    )

    bath_file = data.get("bath", {})
    channel = bath_file.get("channel",
                            base.channel if base else CHANNEL_SIGMA_MINUS)
    sweeps = {}
    from_file = set()
    defaults = {"coupling_strength": (0.0,),
                "characteristic_frequency": (1.0,),
                "temperature": (0.0,)}
    for key in SWEEPABLE:
        if key in bath_file:
            sweeps[key] = _parse_floats(bath_file[key], f"[bath] {key}")
            from_file.add(key)
        else:
            sweeps[key] = getattr(base, key) if base else defaults[key]

    ctrl_file = data.get("control", {})
    ctrl_base = base.control if base else NO_CONTROL
    control = ControlSpec(
        kind=ctrl_file.get("kind", ctrl_base.kind),
        intensity=pick("control", "intensity", _parse_float, ctrl_base.intensity),
        a=pick("control", "a", _parse_float, ctrl_base.a),
        b=pick("control", "b", _parse_float, ctrl_base.b),
        half_period=pick("control", "half_period", _parse_float,
                         ctrl_base.half_period),
        gap_rescaled=pick("control", "gap_rescaled", _parse_bool,
                          ctrl_base.gap_rescaled),
    )

    integrator = IntegratorConfig(
        dt=dt if dt is not None else pick(
            "integrator", "dt", _parse_float,
            base.integrator.dt if base else 1e-3),
        record_every=pick("integrator", "record_every", _parse_int,
                          base.integrator.record_every if base else 1),
    )

    cfg = ScenarioConfig(
        scenario=name,
        chain=chain,
        channel=channel,
        coupling_strength=sweeps["coupling_strength"],
        characteristic_frequency=sweeps["characteristic_frequency"],
        temperature=sweeps["temperature"],
        control=control,
        integrator=integrator,
        out_dir=out or data.get("output", {}).get("dir", f"{name}_out"),
        engine=engine or sc.get("engine", base.engine if base else ENGINE_NONMARKOV),
        mode=mode or sc.get("mode", base.mode if base else MODE_SECTOR),
        paper_compat=(paper_compat if paper_compat is not None else pick(
            "scenario", "paper_compat", _parse_bool,
            base.paper_compat if base else False)),
    )

    param = cfg.sweep_parameter
    provenance = {}
    if param is not None:
        for value in getattr(cfg, param):
            if param in from_file or name == "custom":
                provenance[repr(value)] = PROV_CONFIG
            elif value in _ANCHORED[param]:
                provenance[repr(value)] = PROV_PAPER
            else:
                provenance[repr(value)] = PROV_DEFAULT
    return replace(cfg, provenance=provenance)


def validate_config(cfg: ScenarioConfig) -> PulseCondition | None:
    """Pre-run checks: sweep shape, step grid, pulse condition, gap scan.

    Returns the pulse classification when a pulse is configured.
    """
    run_plans(cfg)  # constructs every BathSpec, validating parameter ranges
    n_steps, _ = resolve_steps(cfg.chain.total_time, cfg.integrator.dt)
    if n_steps % cfg.integrator.record_every:
        raise ConfigInvalid(
            f"record_every={cfg.integrator.record_every} does not divide "
            f"the {n_steps}-step grid")
    if cfg.control.kind == PULSE_NONE:
        return None
    if cfg.control.kind != PULSE_SINE:
        raise ConfigInvalid(f"unknown control kind {cfg.control.kind!r}")
    ratio = cfg.chain.total_time / cfg.control.half_period
    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, abs(ratio)):
        raise ConfigInvalid(
            f"half_period must divide total_time; S/tau = {ratio!r}")
    cond = condition_residual(cfg.control)
    tol = PAPER_COMPAT_TOL if cfg.paper_compat else ZERO_TOL
    if cond.jn_abs >= tol:
        raise ConfigInvalid(
            f"pulse violates the zero-area condition: |J_{cond.n}({cond.z:g})|"
            f" = {cond.jn_abs:.3e} >= {tol:g}"
            + ("" if cfg.paper_compat else " (try --paper-compat or a Bessel zero)"))
    if cfg.control.gap_rescaled:
        for t in np.linspace(0.0, cfg.chain.total_time, 1000):
            model.energy_gap_E21(cfg.chain, float(t))
    return cond


def _closed_space(cfg: ScenarioConfig) -> HilbertSpec:
    if cfg.mode == MODE_FULL:
        return HilbertSpec.full(cfg.chain.n_sites)
    return HilbertSpec.sector(cfg.chain.n_sites, (1,))


def _simulate(cfg: ScenarioConfig, bath: BathSpec, ctrl: ControlSpec,
              engine: str | None = None) -> list[ThermoRecord]:
    """One simulation, returning thermodynamic records."""
    engine = engine or cfg.engine
    if engine == ENGINE_CLOSED:
        space = _closed_space(cfg)
        sampler = ThermoSampler(cfg.chain, ctrl, space)
        closed_evolve(None, cfg.chain, ctrl, cfg.integrator,
                      observer=sampler.on_closed, space=space)
        return sampler.records
    space = simulation_space(cfg.channel, cfg.chain.n_sites, cfg.mode)
    sampler = ThermoSampler(cfg.chain, ctrl, space)
    if engine == ENGINE_NONMARKOV:
        evolve(None, cfg.chain, bath, ctrl, cfg.integrator,
               observer=sampler.on_nonmarkov, mode=cfg.mode,
               keep_trajectory=False)
    elif engine == ENGINE_LINDBLAD:
        lindblad_evolve(None, cfg.chain, bath, ctrl, cfg.integrator,
                        observer=sampler.on_lindblad, mode=cfg.mode)
    else:
        raise ConfigInvalid(f"unknown engine {engine!r}")
    return sampler.records


def _execute_run(cfg: ScenarioConfig, plan: RunPlan) -> RunResult:
    result = RunResult(plan)
    start = time.perf_counter()
    try:
        result.records = _simulate(cfg, plan.bath, cfg.control)
        if cfg.control.kind != PULSE_NONE:
            result.baseline = _simulate(cfg, plan.bath, NO_CONTROL)
    except NmqError as exc:
        result.error = exc
    result.wall_time = time.perf_counter() - start
    return result


def _write_csv(path: Path, records: list[ThermoRecord]) -> None:
    with_eig = records[0].min_eig is not None if records else False
    columns = CSV_COLUMNS if with_eig else CSV_COLUMNS[:-1]
    lines = [",".join(columns)]
    for rec in records:
        row = [rec.t, rec.heat_current, rec.energy_current, rec.power,
               rec.fidelity, rec.trace_error]
        if with_eig:
            row.append(rec.min_eig)
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _git_commit() -> str:
    try:
        proc = subprocess.run(["git", "rev-parse", "HEAD"],
                              cwd=Path(__file__).resolve().parent,
                              capture_output=True, text=True, timeout=10)
    except OSError:
        return "unknown"
    return proc.stdout.strip() if proc.returncode == 0 else "unknown"


def _package_version() -> str:
    from . import __version__
    return __version__


def _run_entry(cfg: ScenarioConfig, result: RunResult) -> dict:
    plan = result.plan
    entry: dict = {
        "label": plan.label,
        "parameter": plan.parameter,
        "value": plan.value,
        "wall_time_s": result.wall_time,
        "csv": None,
        "error": None,
    }
    if result.error is not None:
        entry["error"] = {"type": type(result.error).__name__,
                          "message": str(result.error)}
        return entry
    recs = result.records
    law = first_law_report(recs)
    entry.update({
        "csv": f"{cfg.scenario}_{plan.label}.csv",
        "rows": len(recs),
        "final_fidelity": recs[-1].fidelity,
        "max_heat_current": max(abs(r.heat_current) for r in recs),
        "max_trace_error": max(r.trace_error for r in recs),
        "min_eigenvalue": (min(r.min_eig for r in recs)
                           if recs[0].min_eig is not None else None),
        "first_law": law,
    })
    if result.baseline is not None:
        entry["baseline_csv"] = f"{cfg.scenario}_{plan.label}_nocontrol.csv"
        entry["baseline_final_fidelity"] = result.baseline[-1].fidelity
        entry["control_improves_fidelity"] = (
            recs[-1].fidelity > result.baseline[-1].fidelity)
    return entry


def _build_manifest(cfg: ScenarioConfig, cond: PulseCondition | None,
                    results: list[RunResult], wall: float) -> dict:
    n_steps, dt_res = resolve_steps(cfg.chain.total_time, cfg.integrator.dt)
    control: dict = {
        "kind": cfg.control.kind,
        "intensity": cfg.control.intensity,
        "a": cfg.control.a,
        "b": cfg.control.b,
        "half_period": cfg.control.half_period,
        "gap_rescaled": cfg.control.gap_rescaled,
    }
    if cond is not None:
        control["classification"] = {
            "n": cond.n,
            "z": cond.z,
            "abs_residual": abs(cond.residual),
            "jn_abs": cond.jn_abs,
            "is_valid_strict": cond.is_valid,
            "zero_tol_used": PAPER_COMPAT_TOL if cfg.paper_compat else ZERO_TOL,
        }
    runs = [_run_entry(cfg, res) for res in results]
    ok = all(r["error"] is None and r.get("first_law", {}).get("ok", False)
             for r in runs)
    return {
        "package_version": _package_version(),
        "git_commit": _git_commit(),
        "scenario": cfg.scenario,
        "engine": cfg.engine,
        "mode": cfg.mode,
        "paper_compat": cfg.paper_compat,
        "chain": {
            "n_sites": cfg.chain.n_sites,
            "total_time": cfg.chain.total_time,
            "coupling": cfg.chain.coupling,
            "cut_bond": cfg.chain.cut_bond,
            "drive_omega": cfg.chain.omega,
        },
        "bath": {
            "channel": cfg.channel,
            "coupling_strength": list(cfg.coupling_strength),
            "characteristic_frequency": list(cfg.characteristic_frequency),
            "temperature": list(cfg.temperature),
        },
        "control": control,
        "integrator": {
            "method": cfg.integrator.method,
            "dt_requested": cfg.integrator.dt,
            "dt_resolved": dt_res,
            "n_steps": n_steps,
            "record_every": cfg.integrator.record_every,
            "diagnostics": cfg.integrator.diagnostics,
        },
        "sweep": {
            "parameter": cfg.sweep_parameter,
            "values": (list(getattr(cfg, cfg.sweep_parameter))
                       if cfg.sweep_parameter else []),
            "provenance": dict(cfg.provenance),
        },
        "runs": runs,
        "all_invariants_ok": ok,
        "wall_time_s": wall,
    }


def run_scenario(cfg: ScenarioConfig) -> dict:
    """Execute every sweep member, write one CSV each plus manifest.json.

    Raises after the manifest is on disk if any run failed or any
    monitored invariant did not hold, so the CLI exits nonzero while the
    artifacts still carry the machine-readable error records.
    """
    cond = validate_config(cfg)
    plans = run_plans(cfg)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=min(4, len(plans))) as pool:
        futures = [pool.submit(_execute_run, cfg, plan) for plan in plans]
        results = [f.result() for f in futures]

    for res in results:
        if res.error is not None:
            continue
        _write_csv(out_dir / f"{cfg.scenario}_{res.plan.label}.csv", res.records)
        if res.baseline is not None:
            _write_csv(out_dir / f"{cfg.scenario}_{res.plan.label}_nocontrol.csv",
                       res.baseline)
    manifest = _build_manifest(cfg, cond, results,
                               time.perf_counter() - start)
    with open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")

    for res in results:
        if res.error is not None:
            raise res.error
    bad_law = [r["label"] for r in manifest["runs"] if not r["first_law"]["ok"]]
    if bad_law:
        raise InvariantViolation(
            "first-law balance failed for " + ", ".join(bad_law))
    return manifest


def _l2(x: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.square(x))))


def compare_baseline(cfg: ScenarioConfig) -> list[dict]:
    """Cross-engine, with/without-control comparison table.

    Rows carry endpoint fidelity and the L2 distances of the energy
    current to the heat current and to the power.  The closed engine
    joins only when every coupling strength is zero, where all engines
    must coincide.
    """
    validate_config(cfg)
    engines = [ENGINE_NONMARKOV, ENGINE_LINDBLAD]
    if all(g == 0.0 for g in cfg.coupling_strength):
        engines.append(ENGINE_CLOSED)
    controls = [NO_CONTROL]
    if cfg.control.kind != PULSE_NONE:
        controls.append(cfg.control)
    rows = []
    for plan in run_plans(cfg):
        for engine in engines:
            for ctrl in controls:
                recs = _simulate(cfg, plan.bath, ctrl, engine=engine)
                de = np.array([r.energy_current for r in recs])
                jq = np.array([r.heat_current for r in recs])
                pw = np.array([r.power for r in recs])
                rows.append({
                    "engine": engine,
                    "control": ctrl.kind,
                    "gamma": plan.bath.gamma[0],
                    "final_fidelity": recs[-1].fidelity,
                    "l2_energy_vs_heat": _l2(de - jq),
                    "l2_energy_vs_power": _l2(de - pw),
                })
    return rows


def format_report(rows: list[dict]) -> str:
    """Fixed-width text table for the compare subcommand."""
    headers = ("engine", "control", "gamma", "F(S)",
               "l2(dE-J_Q)", "l2(dE-P)")
    cells = [[row["engine"], row["control"], f"{row['gamma']:g}",
              f"{row['final_fidelity']:.6f}",
              f"{row['l2_energy_vs_heat']:.6g}",
              f"{row['l2_energy_vs_power']:.6g}"] for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h)
              for i, h in enumerate(headers)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*headers)]
    lines += [fmt.format(*row) for row in cells]
    return "\n".join(lines)
