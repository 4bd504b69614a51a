"""Figure generation for cartpend CLI trajectory CSVs and sweep JSONs."""

from .figures import FigureSpec, plot_degradation, plot_trajectories
from .io import SchemaError, read_sweep, read_trajectory

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "SchemaError",
    "plot_degradation",
    "plot_trajectories",
    "read_sweep",
    "read_trajectory",
]
