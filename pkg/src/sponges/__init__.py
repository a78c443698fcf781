"""Sponges: non-transitive orientations with joins and meets, and morphology on them."""

from .base import (AxiomReport, BoundaryAmbiguous, ComponentUnbounded, ConvergenceError,
                   DimensionMismatch, DomainError, GridSpec, GridTooCoarse, InvalidCone,
                   InvalidProfile, JoinUnavailable, NoLeftBound, NoSeeds, SpongeError,
                   WindowUnbounded)
from .core import (SpongeSpec, bounds_check, brute_force_extremum, check_absorption,
                   check_orientation, check_part_preservation, descent_join, join, leq, meet,
                   product_join, product_meet, validate_spec)
from .epigraph import Profile
from .groups import ConeSpec1D, Subgroup
from .morphology import Field, StructuringElement

__all__ = [
    "AxiomReport", "BoundaryAmbiguous", "ComponentUnbounded", "ConeSpec1D", "ConvergenceError",
    "DimensionMismatch", "DomainError", "Field", "GridSpec", "GridTooCoarse", "InvalidCone",
    "InvalidProfile", "JoinUnavailable", "NoLeftBound", "NoSeeds", "Profile", "SpongeError",
    "SpongeSpec", "StructuringElement", "Subgroup", "WindowUnbounded", "bounds_check",
    "brute_force_extremum", "check_absorption", "check_orientation", "check_part_preservation",
    "descent_join", "join", "leq", "meet", "product_join", "product_meet", "validate_spec",
]
