"""Exact invariants and integral-point counts for split toric varieties."""
from .fan import Fan, FanError, load_fan
from .clemens import AdelicFaceSpec, adelic_picard, analytic_obstruction, clemens_complex
from .invariants import predict_growth

__version__ = "0.1.0"

__all__ = [
    "AdelicFaceSpec", "Fan", "FanError", "adelic_picard", "analytic_obstruction",
    "clemens_complex", "load_fan", "predict_growth",
]
