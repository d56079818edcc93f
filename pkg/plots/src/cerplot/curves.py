"""CSV loading and figure rendering for error-rate sweeps.

The input format is the simulator's sweep output: a fixed header line
followed by one row per measured point.  Loading is strict so a broken
file fails with the offending line instead of a silent bad plot.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
# Keep legend text as text elements so SVG output stays searchable.
matplotlib.rcParams["svg.fonttype"] = "none"

import matplotlib.pyplot as plt

# Interface contract with the simulator; column order is fixed.
CSV_HEADER = "ebno_db,trials,errors,cer,ml_lb_errors,ml_lb"

_COLUMNS = CSV_HEADER.split(",")


@dataclass(frozen=True)
class CurvePoint:
    ebno_db: float
    trials: int
    errors: int
    cer: float
    ml_lb_errors: int
    ml_lb: float


@dataclass(frozen=True)
class Curve:
    label: str
    points: tuple[CurvePoint, ...]

    @property
    def ebno(self) -> list[float]:
        return [p.ebno_db for p in self.points]

    @property
    def cer(self) -> list[float]:
        return [p.cer for p in self.points]

    @property
    def ml_lb(self) -> list[float]:
        return [p.ml_lb for p in self.points]


def _parse_row(fields: list[str], path: Path, lineno: int) -> CurvePoint:
    if len(fields) != len(_COLUMNS):
        raise ValueError(
            f"{path}:{lineno}: expected {len(_COLUMNS)} fields, got {len(fields)}"
        )
    try:
        return CurvePoint(
            ebno_db=float(fields[0]),
            trials=int(fields[1]),
            errors=int(fields[2]),
            cer=float(fields[3]),
            ml_lb_errors=int(fields[4]),
            ml_lb=float(fields[5]),
        )
    except ValueError as exc:
        raise ValueError(f"{path}:{lineno}: bad field value ({exc})") from exc


def load_curve(path: str | Path, label: str) -> Curve:
    """Read one sweep CSV.  Raises ValueError naming the bad line."""
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or ",".join(rows[0]) != CSV_HEADER:
        got = ",".join(rows[0]) if rows else "<empty file>"
        raise ValueError(f"{path}:1: expected header {CSV_HEADER!r}, got {got!r}")
    points = [_parse_row(fields, path, i + 2) for i, fields in enumerate(rows[1:])]
    if not points:
        raise ValueError(f"{path}:2: no data rows after header")
    return Curve(label=label, points=tuple(points))


def render(
    curves: Sequence[Curve],
    out_path: str | Path,
    title: str | None = None,
) -> dict[str, int]:
    """Draw all curves into one figure and return label -> point count.

    Solid line: measured error rate.  Dashed companion in the same color:
    the maximum-likelihood lower bound.  The y axis is logarithmic and
    the data is drawn exactly as loaded, one marker per CSV row.
    """
    if not curves:
        raise ValueError("at least one curve is required")
    seen: set[str] = set()
    for curve in curves:
        if curve.label in seen:
            raise ValueError(f"duplicate curve label {curve.label!r}")
        seen.add(curve.label)

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for curve in curves:
        (line,) = ax.plot(curve.ebno, curve.cer, marker="o", label=curve.label)
        ax.plot(
            curve.ebno,
            curve.ml_lb,
            linestyle="--",
            marker=".",
            color=line.get_color(),
            label=f"{curve.label} (ML bound)",
        )
    ax.set_yscale("log")
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("codeword error rate")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return {curve.label: len(curve.points) for curve in curves}
