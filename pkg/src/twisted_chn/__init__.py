"""Twisted symplectic forms on the tangent bundle of complex hyperbolic space."""

from .chn_model import DomainError, ModelParams
from .sasaki import PhasePoint, TangentTT, TwoFormMatrix

__all__ = ["DomainError", "ModelParams", "PhasePoint", "TangentTT", "TwoFormMatrix"]
__version__ = "0.1.0"
