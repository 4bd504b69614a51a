"""Figure builders for trajectory CSVs and sweep JSONs.

Each builder validates every input before touching the output paths, then
writes one SVG and one PNG per figure.  Rendering is deterministic: the SVG
hash salt is pinned and the date/software metadata matplotlib would embed is
suppressed, so identical inputs give identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "cartpend-plots"

import matplotlib.pyplot as plt

from .io import read_sweep, read_trajectory

__all__ = ["FigureSpec", "plot_trajectories", "plot_degradation"]

_SIGNALS = ("y1", "y2")
_SIGNAL_NAMES = {"y1": "cart position s (m)", "y2": "pendulum angle phi (rad)"}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input files, per-input labels, layout, and output stem.

    ``output`` is a path without extension; ``.svg`` and ``.png`` siblings
    are written.  ``layout`` is ``per-run`` (one panel per input file) or
    ``per-signal`` (one panel per signal, inputs overlaid).
    """

    inputs: tuple[str, ...]
    output: str
    labels: tuple[str, ...] | None = None
    layout: str = "per-run"
    title: str | None = None

    def __post_init__(self) -> None:
        if not self.inputs:
            raise ValueError("at least one input file is required")
        if self.layout not in ("per-run", "per-signal"):
            raise ValueError(f"unknown layout {self.layout!r}")
        if self.labels is not None and len(self.labels) != len(self.inputs):
            raise ValueError("need one label per input")

    def resolved_labels(self) -> tuple[str, ...]:
        if self.labels is not None:
            return self.labels
        return tuple(Path(p).stem for p in self.inputs)


def _save(fig, output: str) -> tuple[str, str]:
    svg = f"{output}.svg"
    png = f"{output}.png"
    fig.savefig(svg, metadata={"Date": None})
    fig.savefig(png, metadata={"Software": None})
    plt.close(fig)
    return svg, png


def plot_trajectories(spec: FigureSpec) -> tuple[str, str]:
    """Render trajectory outputs; returns the (svg, png) paths.

    All inputs are parsed before any file is written, so a missing or
    malformed input leaves no partial image behind.
    """
    runs = [read_trajectory(p) for p in spec.inputs]
    labels = spec.resolved_labels()

    if spec.layout == "per-run":
        fig, axes = plt.subplots(
            1, len(runs), figsize=(4.2 * len(runs), 3.4), squeeze=False, sharex=False
        )
        for ax, run, label in zip(axes[0], runs, labels):
            for signal in _SIGNALS:
                ax.plot(run["t"], run[signal], label=_SIGNAL_NAMES[signal])
            ax.set_title(label)
            ax.set_xlabel("t (s)")
            ax.grid(True, alpha=0.3)
            ax.legend(fontsize=8)
    else:
        fig, axes = plt.subplots(
            len(_SIGNALS), 1, figsize=(6.4, 2.8 * len(_SIGNALS)), squeeze=False
        )
        for ax, signal in zip(axes[:, 0], _SIGNALS):
            for run, label in zip(runs, labels):
                ax.plot(run["t"], run[signal], label=label)
            ax.set_ylabel(_SIGNAL_NAMES[signal])
            ax.grid(True, alpha=0.3)
            ax.legend(fontsize=8)
        axes[-1, 0].set_xlabel("t (s)")

    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return _save(fig, spec.output)


def plot_degradation(spec: FigureSpec) -> tuple[str, str]:
    """Render peak-versus-sampling-period curves from sweep summaries.

    One curve per input sweep; unstable entries are marked with crosses.
    Returns the (svg, png) paths.
    """
    sweeps = [read_sweep(p) for p in spec.inputs]
    labels = spec.resolved_labels()

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for sweep, label in zip(sweeps, labels):
        rows = sweep["rows"]
        Ts = [r["T"] for r in rows]
        peaks = [r["peak_y1"] for r in rows]
        tag = "redesigned gain" if sweep["redesign"] else "fixed gain"
        (line,) = ax.plot(Ts, peaks, marker="o", label=f"{label} ({tag})")
        unstable = [(r["T"], r["peak_y1"]) for r in rows if not r["stable"]]
        if unstable:
            ax.plot(
                [t for t, _ in unstable],
                [p for _, p in unstable],
                linestyle="none",
                marker="x",
                markersize=10,
                color=line.get_color(),
            )
    ax.set_xlabel("sampling period T (s)")
    ax.set_ylabel("peak |y1| (m)")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return _save(fig, spec.output)
