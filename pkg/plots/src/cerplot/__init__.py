"""Plot codeword-error-rate sweeps produced by the simulator CSV writer."""

from .curves import CSV_HEADER, Curve, CurvePoint, load_curve, render

__all__ = ["CSV_HEADER", "Curve", "CurvePoint", "load_curve", "render"]
