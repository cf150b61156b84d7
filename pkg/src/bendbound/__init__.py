"""Bending bounds for convex hull boundaries in hyperbolic 3-space.

Closed-form bounds relating the Schwarzian of a domain's uniformization,
hull thickness and the bending lamination of the dome, plus the plane and
space geometry and numerical oracles needed to check them.
"""

from .bounds import (
    BoundEvaluation,
    ahlfors_weill,
    b_L,
    bending_from_teich,
    c_L,
    f_bcy,
    r_of_s,
)
from .errors import BendboundError, DomainError

__all__ = [
    "BendboundError",
    "BoundEvaluation",
    "DomainError",
    "ahlfors_weill",
    "b_L",
    "bending_from_teich",
    "c_L",
    "f_bcy",
    "r_of_s",
]
