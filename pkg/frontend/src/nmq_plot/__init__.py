"""Static figures from nmq sweep outputs (CSV + manifest.json)."""

__version__ = "0.1.0"

from .errors import MissingSeries, PlotError, SchemaMismatch
from .figures import DPI, KINDS, FigureSpec, build_figure, render
from .reader import PARAMETER_SYMBOLS, RunSeries, SweepBundle, load_bundle, run_label

__all__ = [
    "__version__",
    "MissingSeries",
    "PlotError",
    "SchemaMismatch",
    "DPI",
    "KINDS",
    "FigureSpec",
    "build_figure",
    "render",
    "PARAMETER_SYMBOLS",
    "RunSeries",
    "SweepBundle",
    "load_bundle",
    "run_label",
]
