"""Support half-spaces, the wedge dome, hull thickness and Epstein curvatures.

Points of hyperbolic 3-space use the upper half-space model and are given
as ``(x, t)`` with ``x`` complex and height ``t > 0``.

For ``0 < k < 1`` the Jordan curve ``gamma`` is the boundary of the wedge
``W = {0 < arg z < k pi}``.  Its convex hull has two boundary components:

* ``C2``, the dome of the complementary wedge, made of the two vertical
  half-planes over the edges of ``W``.  It is bent along the vertical
  geodesic over ``0`` with bending ``(1 - k) pi``; this is :class:`WedgeDome`.
* ``C1``, the dome of ``W`` itself, swept out by the semicircles joining the
  tangency points of the disks inscribed in ``W``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import r_of_s
from .errors import DisjointError, DomainError, SingularityError
from .hyp_core import EPS_TANGENT, Geodesic, RoundDisk, half_angle
from .lamination import FiniteLamination, Leaf


@dataclass(frozen=True)
class HalfSpaceH3:
    """Half-space of H^3 lying over a round disk of the sphere at infinity."""

    boundary: RoundDisk

    def signed_distance(self, x: complex, t: float) -> float:
        """Negative inside the half-space, positive outside."""
        D = self.boundary
        qt = D.a * (abs(x) ** 2 + t * t) - 2 * (D.b.conjugate() * x).real + D.d
        return math.asinh(qt / (2 * t))

    def distance(self, x: complex, t: float) -> float:
        return abs(self.signed_distance(x, t))

    def contains(self, x: complex, t: float) -> bool:
        return self.signed_distance(x, t) <= 0


def ext_dihedral(h1: HalfSpaceH3, h2: HalfSpaceH3) -> float:
    """Exterior dihedral angle from the inversive product of the boundary disks."""
    D1, D2 = h1.boundary, h2.boundary
    c = D1.inversive(D2)
    if c > 1 + EPS_TANGENT:
        return 0.0
    if c < -1 - EPS_TANGENT:
        raise DisjointError("boundary planes are disjoint")

    def form(sign):
        # |b|^2 - a d on the coefficient vectors D1 -+ D2
        a, b, d = D1.a - sign * D2.a, D1.b - sign * D2.b, D1.d - sign * D2.d
        return abs(b) ** 2 - a * d

    return half_angle(form(1), form(-1))


def h3_distance(p, q) -> float:
    (x1, t1), (x2, t2) = p, q
    d2 = abs(x1 - x2) ** 2 + (t1 - t2) ** 2
    return math.acosh(1 + d2 / (2 * t1 * t2))


# ---------------------------------------------------------------------------
# wedge dome
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WedgeDome:
    """Two vertical half-planes over the rays ``arg z = 0`` and ``arg z = k pi``."""

    k: float
    faces: tuple
    edge_directions: tuple
    bending_weight: float

    @property
    def bending_line(self) -> tuple:
        return (0j, complex(math.inf))

    def lamination(self) -> FiniteLamination:
        """Bending lamination in intrinsic coordinates: one atom."""
        if self.bending_weight == 0:
            return FiniteLamination([])
        return FiniteLamination([Leaf(Geodesic(math.pi / 2, 3 * math.pi / 2), self.bending_weight)])


def wedge_dome(k: float) -> WedgeDome:
    if not 0 < k <= 1:
        raise DomainError(f"k={k} outside (0, 1]", threshold="0 < k <= 1")
    u0, u1 = 1.0 + 0j, cmath.exp(1j * k * math.pi)
    # support half-spaces over the maximal disks of the complementary wedge
    lower = HalfSpaceH3(RoundDisk.halfplane(0, -1))
    upper = HalfSpaceH3(RoundDisk.halfplane(0, u1))
    weight = ext_dihedral(lower, upper)
    return WedgeDome(k, (lower, upper), (u0, u1), weight)


def _face_distance(x: complex, t: float, face: HalfSpaceH3, direction: complex) -> float:
    # the foot of the perpendicular lies over the orthogonal projection of x on the line
    if (direction.conjugate() * x).real >= 0:
        return face.distance(x, t)
    return math.acosh(math.sqrt(abs(x) ** 2 + t * t) / t)


def dome_distance(p, dome: WedgeDome) -> float:
    """Hyperbolic distance from ``p = (x, t)`` to the bent surface ``C2``."""
    x, t = complex(p[0]), float(p[1])
    if not t > 0:
        raise DomainError("point must have positive height")
    return min(_face_distance(x, t, f, u) for f, u in zip(dome.faces, dome.edge_directions))


def c1_point(k: float, rho: float, s: float):
    """Point of ``C1`` on the bending line of scale ``rho`` at arclength ``s`` from its top."""
    beta = k * math.pi / 2
    c, sn = math.cos(beta), math.sin(beta)
    psi = 2 * math.atan(math.exp(-s))
    centre = rho * c * c * cmath.exp(1j * beta)
    radius = rho * c * sn
    x = centre + radius * math.cos(psi) * cmath.exp(1j * (beta - math.pi / 2))
    return x, radius * math.sin(psi)


def wedge_thickness(k: float, samples: int = 10_000, s_max: float = 10.0, log_rho_max: float = 5.0) -> float:
    """Sampled lower estimate of ``sup_{x in C1} d(x, C2)``.

    ``C1`` is sampled on a grid of scales ``rho`` and arclengths ``s`` along
    its bending lines.
    """
    if not 0 < k < 1:
        raise DomainError(f"k={k} outside (0, 1)", threshold="0 < k < 1")
    dome = wedge_dome(k)
    n = max(3, int(math.isqrt(samples)))
    n_s = n if n % 2 else n + 1
    best = 0.0
    for lr in np.linspace(-log_rho_max, log_rho_max, n):
        rho = math.exp(lr)
        for s in np.linspace(-s_max, s_max, n_s):
            best = max(best, dome_distance(c1_point(k, rho, s), dome))
    return best


# ---------------------------------------------------------------------------
# Epstein surfaces
# ---------------------------------------------------------------------------


def dual_eigenvalues(n: float, t: float = 0.0) -> tuple[float, float]:
    """Eigenvalues ``e^{-2t}(1 +- 2n)`` of the dual shape operator after flow time ``t``."""
    if n < 0:
        raise DomainError("pointwise norm must be nonnegative")
    f = math.exp(-2 * t)
    return f * (1 + 2 * n), f * (1 - 2 * n)


def _from_dual(mu: float) -> float:
    if abs(1 + mu) < 1e-15:
        raise SingularityError("dual eigenvalue equals -1")
    return (1 - mu) / (1 + mu)


def to_dual(kappa: float) -> float:
    """``(1 - B)(1 + B)^{-1}`` on an eigenvalue; the map is an involution."""
    return _from_dual(kappa)


def epstein_principal_curvatures(n: float, t: float = 0.0) -> tuple[float, float]:
    """Principal curvatures where the Schwarzian has pointwise norm ``n``.

    At ``t = 0`` these are ``-n/(n + 1)`` and ``-n/(n - 1)``.
    """
    mu_plus, mu_minus = dual_eigenvalues(n, t)
    return _from_dual(mu_plus), _from_dual(mu_minus)


@dataclass(frozen=True)
class EpsteinCurvatureField:
    """Principal curvatures of the time-``t`` Epstein surface over the disk."""

    norm: Callable
    t: float = 0.0

    def __call__(self, z):
        return epstein_principal_curvatures(float(self.norm(z)), self.t)


def convexity_times(s: float) -> tuple[float, float]:
    """Flow times ``(t0, t1)`` with ``e^{2 t0} = 1 + 2s`` and ``e^{2 t1} = 1 - 2s``."""
    if not 0 <= s < 0.5:
        raise DomainError(f"s={s} outside [0, 1/2)", threshold="s < 1/2", limit=0.5)
    return 0.5 * math.log1p(2 * s), 0.5 * math.log1p(-2 * s)


def thickness_bound(s: float) -> float:
    """Upper bound on hull thickness for a map with Schwarzian sup norm ``s``."""
    return r_of_s(s)
