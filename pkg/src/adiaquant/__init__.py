"""Adiabatic-evolution simulator and spectral-gap analyzer for SAT instances."""

from .backend import BACKEND
from .errors import AdiaquantError

__version__ = "0.1.0"

__all__ = ["AdiaquantError", "BACKEND", "__version__"]
