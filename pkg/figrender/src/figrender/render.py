"""Render sweep exports: line-plot families on a shared gain axis and
max-normalized second-moment heatmaps.

Inputs are the simulator's delimited sweep files (fixed documented header)
or its raw matrix dumps (.npz with a complex matrix and both axis vectors).
Every render also writes a sidecar summary with the min/max of each plotted
column so the figures can be audited without re-reading the inputs.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


class MissingColumnError(KeyError):
    """An input file lacks a header field the figure kind needs."""


class FigureKind(str, enum.Enum):
    PURITY_VS_GAIN = "purityVsGain"
    MODE_WEIGHTS_VS_GAIN = "modeWeightsVsGain"
    SQUEEZING_VS_GAIN = "squeezingVsGain"
    MOMENT_HEATMAP = "momentHeatmap"


# columns each line-plot kind draws against the shared gain_db axis
_KIND_COLUMNS = {
    FigureKind.PURITY_VS_GAIN: ["purity"],
    FigureKind.MODE_WEIGHTS_VS_GAIN: ["p1", "p2", "p3"],
    FigureKind.SQUEEZING_VS_GAIN: ["r1", "r2", "r3"],
}

_Y_LABELS = {
    FigureKind.PURITY_VS_GAIN: "spectral purity",
    FigureKind.MODE_WEIGHTS_VS_GAIN: "mode weight $p_\\ell$",
    FigureKind.SQUEEZING_VS_GAIN: "squeezing parameter $r_\\ell$",
}


@dataclass(frozen=True)
class FigureSpec:
    kind: FigureKind
    inputs: tuple[Path, ...]
    output: Path
    labels: tuple[str, ...] = ()
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    normalize: bool = True  # heatmaps normalized to their maximum

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("at least one input file is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ValueError("one label per input file required")


def read_sweep(path: Path) -> dict[str, np.ndarray]:
    """Parse a delimited sweep file into named float columns."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if reader.fieldnames is None or not rows:
        raise ValueError(f"{path} contains no data rows")
    return {name: np.array([float(row[name]) for row in rows])
            for name in reader.fieldnames}


def _columns(table: dict[str, np.ndarray], names: list[str], path: Path):
    for name in names:
        if name not in table:
            raise MissingColumnError(
                f"input {path} is missing required column {name!r}")
    return [table[name] for name in names]


def _series_label(spec: FigureSpec, index: int) -> str:
    if spec.labels:
        return spec.labels[index]
    return Path(spec.inputs[index]).stem


def _render_lines(spec: FigureSpec) -> dict:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    columns = _KIND_COLUMNS[spec.kind]
    summary_files = []
    for i, path in enumerate(spec.inputs):
        table = read_sweep(Path(path))
        gain_db, = _columns(table, ["gain_db"], path)
        order = np.argsort(gain_db)
        label = _series_label(spec, i)
        entry = {"input": str(path), "label": label,
                 "columns": {"gain_db": _min_max(gain_db)}}
        ys = _columns(table, columns, path)
        for name, y in zip(columns, ys):
            suffix = f" {name}" if len(columns) > 1 else ""
            ax.plot(gain_db[order], y[order], marker=".",
                    label=f"{label}{suffix}")
            entry["columns"][name] = _min_max(y)
        if spec.kind is FigureKind.MODE_WEIGHTS_VS_GAIN:
            p_sum = np.sum(ys, axis=0)
            entry["p_sum"] = _min_max(p_sum)
        summary_files.append(entry)
    ax.set_xlabel("gain (dB)")
    ax.set_ylabel(_Y_LABELS[spec.kind])
    if spec.kind is FigureKind.PURITY_VS_GAIN:
        ax.set_ylim(0.0, 1.02)
    if spec.x_range:
        ax.set_xlim(*spec.x_range)
    if spec.y_range:
        ax.set_ylim(*spec.y_range)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return {"kind": spec.kind.value, "files": summary_files}


def _render_heatmap(spec: FigureSpec) -> dict:
    n = len(spec.inputs)
    fig, axes = plt.subplots(1, n, figsize=(4.6 * n, 4.0), squeeze=False)
    summary_files = []
    for i, path in enumerate(spec.inputs):
        with np.load(path) as data:
            if "moment" not in data:
                raise MissingColumnError(
                    f"input {path} is missing required array 'moment'")
            moment = np.abs(data["moment"])
            ws = data["signal_nodes"]
            wi = data["idler_nodes"]
        panel_max = float(moment.max())
        shown = moment
        if spec.normalize and panel_max > 0.0:
            shown = moment / panel_max  # guard: zero matrices stay uniform
        ax = axes[0, i]
        mesh = ax.pcolormesh(wi * 1e-15, ws * 1e-15, shown,
                             shading="auto", cmap="viridis")
        ax.set_xlabel("idler frequency (Prad/s)")
        ax.set_ylabel("signal frequency (Prad/s)")
        ax.set_title(_series_label(spec, i), fontsize=9)
        fig.colorbar(mesh, ax=ax)
        summary_files.append({"input": str(path),
                              "label": _series_label(spec, i),
                              "panel_max": panel_max,
                              "normalized": bool(spec.normalize)})
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return {"kind": spec.kind.value, "files": summary_files}


def _min_max(values: np.ndarray) -> dict:
    return {"min": float(np.min(values)), "max": float(np.max(values))}


def render(spec: FigureSpec) -> Path:
    """Write the figure and its sidecar summary; returns the sidecar path."""
    if spec.kind is FigureKind.MOMENT_HEATMAP:
        summary = _render_heatmap(spec)
    else:
        summary = _render_lines(spec)
    sidecar = Path(str(spec.output) + ".summary.json")
    sidecar.write_text(json.dumps(summary, indent=2) + "\n")
    return sidecar
