"""Truncated Fock-space toolkit for the quantum damped harmonic oscillator."""
from .coeffs import Coefficients, ModelParams, coefficients, g_limit
from .fock import DensityMatrix, PureState, StatePrep, TruncationError

__all__ = [
    "Coefficients",
    "DensityMatrix",
    "ModelParams",
    "PureState",
    "StatePrep",
    "TruncationError",
    "coefficients",
    "g_limit",
]
__version__ = "0.1.0"
