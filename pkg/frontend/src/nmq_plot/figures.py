"""Assemble the three figure layouts from a sweep bundle.

All styling is fixed (figure size, colors in manifest order, legend
placement, dpi) so that re-rendering the same inputs yields the same
image.  The figure kinds:

* fig2 - heat current vs t, one curve per sweep value, fidelity inset;
* fig3 - heat current and energy current overlaid vs t, power inset;
* fig4 - two-panel pulse-control view on the rescaled time t/S:
         energy current and power on the left, heat current with the
         uncontrolled baseline on the right, fidelity inset.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from matplotlib.figure import Figure
from matplotlib.lines import Line2D

from .errors import SchemaMismatch
from .reader import SweepBundle, load_bundle

KINDS = ("fig2", "fig3", "fig4")

_COLUMNS = {
    "fig2": ("t", "heat_current", "fidelity"),
    "fig3": ("t", "heat_current", "energy_current", "power"),
    "fig4": ("t", "heat_current", "energy_current", "power", "fidelity"),
}

_FIGSIZE = {"fig2": (6.4, 4.4), "fig3": (6.4, 4.4), "fig4": (9.6, 4.2)}

DPI = 150


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input directory, layout kind, output image path."""

    in_dir: str
    kind: str
    out_path: str
    units_note: str | None = None  # default: derived from the manifest

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaMismatch(
                f"unknown figure kind {self.kind!r}, expected one of "
                + "|".join(KINDS))


def _color(i: int) -> str:
    return f"C{i}"


def _style_key(entries: list[tuple[str, str]]) -> list[Line2D]:
    return [Line2D([], [], color="black", linestyle=ls, label=lab)
            for ls, lab in entries]


def _fig2(bundle: SweepBundle, note: str) -> Figure:
    fig = Figure(figsize=_FIGSIZE["fig2"])
    ax = fig.subplots()
    inset = ax.inset_axes((0.58, 0.58, 0.38, 0.38))
    for i, run in enumerate(bundle.runs):
        ax.plot(run.data["t"], run.data["heat_current"],
                color=_color(i), label=run.label)
        inset.plot(run.data["t"], run.data["fidelity"], color=_color(i))
    ax.set_xlabel("$t$")
    ax.set_ylabel("$J_Q$")
    ax.set_title(note, loc="right", fontsize=8)
    ax.legend(loc="upper left", fontsize=8)
    inset.set_xlabel("$t$", fontsize=7)
    inset.set_ylabel("$F$", fontsize=7)
    inset.tick_params(labelsize=6)
    return fig


def _fig3(bundle: SweepBundle, note: str) -> Figure:
    fig = Figure(figsize=_FIGSIZE["fig3"])
    ax = fig.subplots()
    inset = ax.inset_axes((0.16, 0.58, 0.34, 0.36))
    for i, run in enumerate(bundle.runs):
        ax.plot(run.data["t"], run.data["heat_current"],
                color=_color(i), label=run.label)
        ax.plot(run.data["t"], run.data["energy_current"],
                color=_color(i), linestyle="--")
        inset.plot(run.data["t"], run.data["power"], color=_color(i))
    ax.set_xlabel("$t$")
    ax.set_ylabel(r"$J_Q$, $d\langle H \rangle/dt$")
    ax.set_title(note, loc="right", fontsize=8)
    handles, _ = ax.get_legend_handles_labels()
    handles += _style_key([("-", "$J_Q$"), ("--", r"$d\langle H \rangle/dt$")])
    ax.legend(handles=handles, loc="lower right", fontsize=8)
    inset.set_xlabel("$t$", fontsize=7)
    inset.set_ylabel("$P$", fontsize=7)
    inset.tick_params(labelsize=6)
    return fig


def _fig4(bundle: SweepBundle, note: str) -> Figure:
    fig = Figure(figsize=_FIGSIZE["fig4"])
    left, right = fig.subplots(1, 2)
    inset = right.inset_axes((0.55, 0.12, 0.4, 0.4))
    scale = bundle.total_time
    for i, run in enumerate(bundle.runs):
        s = run.data["t"] / scale
        left.plot(s, run.data["energy_current"], color=_color(i),
                  label=run.label)
        left.plot(s, run.data["power"], color=_color(i), linestyle=":")
        right.plot(s, run.data["heat_current"], color=_color(i),
                   label=run.label)
        right.plot(run.baseline["t"] / scale, run.baseline["heat_current"],
                   color=_color(i), linestyle="--")
        inset.plot(s, run.data["fidelity"], color=_color(i))
        inset.plot(run.baseline["t"] / scale, run.baseline["fidelity"],
                   color=_color(i), linestyle="--")
    left.set_xlabel("$t/S$")
    left.set_ylabel(r"$d\langle H \rangle/dt$, $P$")
    left.set_title(note, loc="right", fontsize=8)
    lh, _ = left.get_legend_handles_labels()
    lh += _style_key([("-", r"$d\langle H \rangle/dt$"), (":", "$P$")])
    left.legend(handles=lh, loc="upper left", fontsize=8)
    right.set_xlabel("$t/S$")
    right.set_ylabel("$J_Q$")
    rh, _ = right.get_legend_handles_labels()
    rh += _style_key([("-", "pulsed"), ("--", "free")])
    right.legend(handles=rh, loc="upper left", fontsize=8)
    inset.set_xlabel("$t/S$", fontsize=7)
    inset.set_ylabel("$F$", fontsize=7)
    inset.tick_params(labelsize=6)
    return fig


def build_figure(spec: FigureSpec) -> Figure:
    """Load the sweep directory and lay out the requested figure."""
    bundle = load_bundle(spec.in_dir, _COLUMNS[spec.kind],
                         need_baseline=spec.kind == "fig4")
    note = spec.units_note if spec.units_note is not None else bundle.units_note
    builder = {"fig2": _fig2, "fig3": _fig3, "fig4": _fig4}[spec.kind]
    fig = builder(bundle, note)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> Path:
    """Render the figure to spec.out_path and return that path."""
    fig = build_figure(spec)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if out.suffix.lower() == ".svg" else None
    fig.savefig(out, dpi=DPI, metadata=metadata)
    return out
