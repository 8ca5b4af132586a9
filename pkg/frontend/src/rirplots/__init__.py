"""Publication-style figure panels for the simulator's CSV outputs.

This package knows nothing about the simulator internals: its entire input
surface is the documented flat CSV schemas (spectrum, hysteresis,
thermalize, scaling, fits).
"""

from .panels import (
    EmptyData,
    MissingColumn,
    PanelReport,
    PanelSpec,
    PlotError,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "PanelSpec",
    "PanelReport",
    "render",
    "PlotError",
    "MissingColumn",
    "EmptyData",
]
