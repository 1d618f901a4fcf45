"""Weyl symbol of the inverse of the harmonic oscillator ``-Delta + |x|^2`` in any dimension."""

from .asymptotics import c_asymptotic, expansion, h_coeff
from .errors import (DomainError, GapError, NonConvergent, OscsymError, PrecisionExhausted,
                     RepOverflow, Underresolved)
from .even_closed_form import c_even, g_term
from .precision import Precision
from .radial_core import compute_coefficients, series_value
from .symbol_api import PhasePoint, b, b_scaled, c, c_stack, partial_derivative, radial_rep

__all__ = [
    "DomainError", "GapError", "NonConvergent", "OscsymError", "PhasePoint", "Precision",
    "PrecisionExhausted", "RepOverflow", "Underresolved", "b", "b_scaled", "c", "c_asymptotic",
    "c_even", "c_stack", "compute_coefficients", "expansion", "g_term", "h_coeff",
    "partial_derivative", "radial_rep", "series_value",
]
