"""Schwarzian derivatives, pointwise norms of quadratic differentials and
grid estimates of their sup norms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BudgetExceeded, CriticalPointError, DomainError
from .hyp_core import CAYLEY, MoebiusMap

CRITICAL_TOL = 1e-14
# changes below this are rounding noise (e.g. Moebius maps, where S = 0)
SUP_ABS_TOL = 1e-12


@dataclass(frozen=True)
class AnalyticMap:
    """A locally univalent map together with its first three derivatives.

    Evaluators accept scalars or numpy arrays.  ``model`` names the domain
    (``"disk"`` or ``"uhp"``).
    """

    name: str
    f: Callable
    d1: Callable
    d2: Callable
    d3: Callable
    closed_form: bool = True
    model: str = "disk"

    def __call__(self, z):
        return self.f(z)

    def derivatives(self, z):
        return self.d1(z), self.d2(z), self.d3(z)


def cauchy_derivatives(f: Callable, z, radius=None, n: int = 64):
    """First three derivatives of ``f`` at ``z`` from the Cauchy integral.

    The trapezoid rule on the circle ``|w - z| = radius`` converges
    geometrically for analytic ``f``; the default radius is half the
    distance to the unit circle.
    """
    z = np.asarray(z, dtype=complex)
    if radius is None:
        radius = 0.5 * (1.0 - np.abs(z))
    radius = np.asarray(radius, dtype=float)
    theta = 2 * np.pi * np.arange(n) / n
    u = np.exp(1j * theta)
    vals = np.asarray(f(z[..., None] + radius[..., None] * u), dtype=complex)
    out = []
    for k in (1, 2, 3):
        coeff = np.mean(vals * u ** (-k), axis=-1) / radius**k
        out.append(math.factorial(k) * coeff)
    return tuple(out)


def from_function(f: Callable, name: str = "user", radius=None, n: int = 64) -> AnalyticMap:
    """Wrap a user map on the disk; derivatives are computed numerically."""
    return AnalyticMap(
        name,
        f,
        lambda z: cauchy_derivatives(f, z, radius, n)[0],
        lambda z: cauchy_derivatives(f, z, radius, n)[1],
        lambda z: cauchy_derivatives(f, z, radius, n)[2],
        closed_form=False,
    )


def compose(outer: AnalyticMap, inner: AnalyticMap) -> AnalyticMap:
    """``outer o inner`` with derivatives by the chain rule."""

    def d1(z):
        return outer.d1(inner.f(z)) * inner.d1(z)

    def d2(z):
        w, g1 = inner.f(z), inner.d1(z)
        return outer.d2(w) * g1**2 + outer.d1(w) * inner.d2(z)

    def d3(z):
        w, g1, g2, g3 = inner.f(z), inner.d1(z), inner.d2(z), inner.d3(z)
        return outer.d3(w) * g1**3 + 3 * outer.d2(w) * g1 * g2 + outer.d1(w) * g3

    return AnalyticMap(
        f"{outer.name}o{inner.name}",
        lambda z: outer.f(inner.f(z)),
        d1,
        d2,
        d3,
        closed_form=outer.closed_form and inner.closed_form,
        model=inner.model,
    )


# ---------------------------------------------------------------------------
# registered maps
# ---------------------------------------------------------------------------


def moebius_map(m: MoebiusMap) -> AnalyticMap:
    m = m.normalize()
    a, b, c, d = m.a, m.b, m.c, m.d
    return AnalyticMap(
        "mobius",
        lambda z: (a * z + b) / (c * z + d),
        lambda z: 1 / (c * z + d) ** 2,
        lambda z: -2 * c / (c * z + d) ** 3,
        lambda z: 6 * c**2 / (c * z + d) ** 4,
    )


def koebe() -> AnalyticMap:
    """``z/(1-z)^2``; the extremal univalent map with ``||S||_inf = 3/2``."""
    return AnalyticMap(
        "koebe",
        lambda z: z / (1 - z) ** 2,
        lambda z: (1 + z) / (1 - z) ** 3,
        lambda z: 2 * (z + 2) / (1 - z) ** 4,
        lambda z: 6 * (z + 3) / (1 - z) ** 5,
    )


def power_uhp(k: float) -> AnalyticMap:
    """``w^k`` on the upper half-plane (principal branch); image is a wedge."""
    return AnalyticMap(
        "wedge_uhp",
        lambda w: w**k,
        lambda w: k * w ** (k - 1),
        lambda w: k * (k - 1) * w ** (k - 2),
        lambda w: k * (k - 1) * (k - 2) * w ** (k - 3),
        model="uhp",
    )


def cayley() -> AnalyticMap:
    return moebius_map(CAYLEY)


def wedge(k: float) -> AnalyticMap:
    """Disk map onto the wedge ``0 < arg < k pi``: ``w^k`` after the Cayley map."""
    if not 0 < k <= 2:
        raise DomainError("wedge parameter must lie in (0, 2]")
    m = compose(power_uhp(k), cayley())
    return AnalyticMap("wedge", m.f, m.d1, m.d2, m.d3)


def exponential(c: complex = 1.0) -> AnalyticMap:
    return AnalyticMap(
        "exp",
        lambda z: np.exp(c * z),
        lambda z: c * np.exp(c * z),
        lambda z: c**2 * np.exp(c * z),
        lambda z: c**3 * np.exp(c * z),
    )


def strip() -> AnalyticMap:
    """``log((1+z)/(1-z))``, the disk onto a horizontal strip."""
    return AnalyticMap(
        "strip",
        lambda z: np.log((1 + z) / (1 - z)),
        lambda z: 2 / (1 - z**2),
        lambda z: 4 * z / (1 - z**2) ** 2,
        lambda z: 4 * (3 * z**2 + 1) / (1 - z**2) ** 3,
    )


REGISTRY: dict[str, Callable[..., AnalyticMap]] = {
    "mobius": lambda a=1, b=0, c=0, d=1: moebius_map(MoebiusMap(a, b, c, d)),
    "koebe": koebe,
    "wedge": wedge,
    "wedge_uhp": power_uhp,
    "exp": exponential,
    "strip": strip,
}


def get_map(name: str, *params) -> AnalyticMap:
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown map {name!r}; known: {sorted(REGISTRY)}") from None
    return factory(*params)


# ---------------------------------------------------------------------------
# Schwarzian and quadratic differentials
# ---------------------------------------------------------------------------


def schwarzian_at(f: AnalyticMap, z):
    """``f'''/f' - 3/2 (f''/f')^2``."""
    d1 = f.d1(z)
    if np.any(np.abs(d1) < CRITICAL_TOL):
        raise CriticalPointError(f"f' vanishes near {z}")
    d2, d3 = f.d2(z), f.d3(z)
    ratio = d2 / d1
    return d3 / d1 - 1.5 * ratio**2


@dataclass(frozen=True)
class QuadDifferentialField:
    """A holomorphic quadratic differential ``phi(z) dz^2``."""

    phi: Callable
    model: str = "disk"

    def __call__(self, z):
        return self.phi(z)

    def pullback(self, m: MoebiusMap) -> QuadDifferentialField:
        """``(phi o m) m'^2``."""
        phi = self.phi
        return QuadDifferentialField(lambda z: phi(m(z)) * m.derivative(z) ** 2, self.model)

    def to_disk(self) -> QuadDifferentialField:
        if self.model == "disk":
            return self
        return QuadDifferentialField(self.pullback(CAYLEY).phi, "disk")


def schwarzian_field(f: AnalyticMap) -> QuadDifferentialField:
    return QuadDifferentialField(lambda z: schwarzian_at(f, z), f.model)


def area_density(z, model: str = "disk"):
    """Hyperbolic area form: ``4/(1-|z|^2)^2`` on the disk, ``1/y^2`` on H."""
    z = np.asarray(z, dtype=complex)
    if model == "disk":
        if np.any(np.abs(z) >= 1):
            raise DomainError("point outside the unit disk", threshold="|z| < 1")
        return 4.0 / (1.0 - np.abs(z) ** 2) ** 2
    if model == "uhp":
        if np.any(z.imag <= 0):
            raise DomainError("point outside the upper half-plane", threshold="Im z > 0")
        return 1.0 / z.imag**2
    raise ValueError(f"unknown model {model!r}")


def pointwise_norm(phi: QuadDifferentialField, z):
    """``|phi(z)| / rho(z)`` for the hyperbolic area form ``rho``."""
    rho = area_density(z, phi.model)
    out = np.abs(phi(z)) / rho
    return float(out) if np.ndim(out) == 0 else out


def holomorphy_residual(phi: QuadDifferentialField, z, h: float = 1e-4) -> float:
    """Relative Cauchy-Riemann residual ``|d_x phi + i d_y phi| / |d_x phi|``."""
    dx = (phi(z + h) - phi(z - h)) / (2 * h)
    dy = (phi(z + 1j * h) - phi(z - 1j * h)) / (2 * h)
    scale = max(abs(dx), abs(phi(z)), 1e-300)
    return abs(dx + 1j * dy) / scale


@dataclass
class SupNormEstimate:
    lower: float
    upper: float
    samples: int
    grid: dict = field(default_factory=dict)


def _grid(r_max, n_radial, n_angular):
    r = np.linspace(0.0, r_max, n_radial)
    theta = 2 * np.pi * np.arange(n_angular) / n_angular
    return np.tanh(r / 2)[:, None] * np.exp(1j * theta)[None, :]


def _norms_on_grid(phi: QuadDifferentialField, zs):
    if phi.model == "uhp":
        ws = CAYLEY(zs)
        return np.abs(phi(ws)) * ws.imag**2
    return np.abs(phi(zs)) * (1 - np.abs(zs) ** 2) ** 2 / 4


def sup_norm_estimate(
    phi: QuadDifferentialField,
    r_max: float = 12.0,
    n_radial: int = 25,
    n_angular: int = 32,
    tol: float = 1e-4,
    max_levels: int = 6,
) -> SupNormEstimate:
    """Lower estimate of ``sup ||phi(z)||`` on a hyperbolic polar grid.

    Each level doubles both resolutions; grids are nested so ``lower`` never
    decreases.  Stops once the relative change drops below ``tol`` (or the
    absolute change below ``SUP_ABS_TOL``).
    """
    if r_max <= 0 or n_radial < 2 or n_angular < 1:
        raise DomainError("invalid grid specification")
    best = None
    prev = None
    for level in range(max_levels):
        nr = (n_radial - 1) * 2**level + 1
        nt = n_angular * 2**level
        norms = _norms_on_grid(phi, _grid(r_max, nr, nt))
        i, j = np.unravel_index(np.argmax(norms), norms.shape)
        lower = float(norms[i, j])
        neigh = [norms[max(i - 1, 0), j], norms[min(i + 1, nr - 1), j],
                 norms[i, (j - 1) % nt], norms[i, (j + 1) % nt]]
        osc = max(abs(lower - float(v)) for v in neigh)
        best = SupNormEstimate(lower, lower + osc, nr * nt,
                               {"r_max": r_max, "n_radial": nr, "n_angular": nt, "level": level})
        if prev is not None and abs(lower - prev) <= max(tol * abs(lower), SUP_ABS_TOL):
            return best
        prev = lower
    raise BudgetExceeded("sup-norm estimate did not converge", estimate=best)
