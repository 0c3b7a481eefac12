"""Reflection of atomic de Broglie waves from an evanescent-wave mirror."""

from .errors import (
    AccuracyError,
    ApplicabilityError,
    ConfigError,
    CoverageError,
    DomainError,
    FitError,
    MirrorError,
    RegimeError,
)
from .mirror import EffectiveMirror, MirrorParams, WaveFunctionSample

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ApplicabilityError",
    "ConfigError",
    "CoverageError",
    "DomainError",
    "EffectiveMirror",
    "FitError",
    "MirrorError",
    "MirrorParams",
    "RegimeError",
    "WaveFunctionSample",
]
