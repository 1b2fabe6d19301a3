"""Positivity certificates for deciding positive real roots of polynomials."""

from .errors import ConvergenceError, DomainError, PoscertError, ResourceError, InvariantViolation
from .kernels import BACKEND
from .poly import MultiPoly, UniPoly, X, parse_poly

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "DomainError",
    "MultiPoly",
    "PoscertError",
    "ResourceError",
    "InvariantViolation",
    "UniPoly",
    "X",
    "parse_poly",
]
