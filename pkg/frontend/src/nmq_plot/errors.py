"""Errors raised while reading sweep outputs or assembling figures."""


class PlotError(Exception):
    """Base class; the CLI exits with this code on failure."""

    exit_code = 2


class SchemaMismatch(PlotError):
    """The manifest or a CSV does not follow the runner's output contract."""


class MissingSeries(PlotError):
    """A series the figure must plot is absent from the input directory."""
