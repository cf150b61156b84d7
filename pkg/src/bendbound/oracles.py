"""Independent numerical checks: half-plane lemma Monte-Carlo, area-lemma and
Bers-kernel quadrature, the piecewise case function, and report campaigns."""

from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from . import bounds
from .lamination import FiniteLamination, Leaf, TransverseArc, transverse_measure
from .dome import thickness_bound, wedge_dome, wedge_thickness
from .errors import (
    ConfigInvalid,
    DisjointError,
    DomainError,
    InvalidLamination,
    QuadratureNonConvergent,
    RejectionBudgetExceeded,
)
from .hyp_core import (
    Geodesic,
    HalfPlaneH2,
    disk_automorphism,
    MoebiusMap,
    RoundDisk,
    dist_h2,
    ext_angle_halfplanes,
    ideal_triangle,
    lorentz_cross,
    minkowski,
    random_disk_automorphism,
    random_moebius,
    to_hyperboloid,
    translation,
)

ANGLE_TOL = 1e-9
REJECTION_BUDGET = 100_000


@dataclass
class VerificationReport:
    target: str
    trials: int
    violations: int
    max_observed: float
    bound_value: float
    seed: int | None
    wall_time: float
    config: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# half-plane lemma
# ---------------------------------------------------------------------------

H1_NORMAL = np.array([0.0, 0.0, -1.0])  # inward normal of {Im z < 0}
ORIGIN = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class LemmaConfig:
    L: float
    r: float
    h1: HalfPlaneH2
    h2: HalfPlaneH2
    h3: HalfPlaneH2
    z1: complex
    z2: complex
    z3: complex

    def predicates(self) -> dict:
        tol = 1e-12
        on = lambda z, h: abs(float(minkowski(to_hyperboloid(z), h.inward_normal()))) < 1e-9
        return {
            "z_on_boundaries": on(self.z1, self.h1) and on(self.z2, self.h2) and on(self.z3, self.h3),
            "h3_disjoint": self.h3.disjoint_from(self.h1) and self.h3.disjoint_from(self.h2),
            "dist_z1_z2": dist_h2(self.z1, self.z2) <= self.L + tol,
            "dist_z1_z3": dist_h2(self.z1, self.z3) <= self.r + tol,
            "z1_not_in_h2": not self.h2.contains(self.z1, strict=True)
            or float(minkowski(to_hyperboloid(self.z1), self.h2.inward_normal())) < tol,
            "z2_not_in_h1": not self.h1.contains(self.z2, strict=True)
            or float(minkowski(to_hyperboloid(self.z2), self.h1.inward_normal())) < tol,
        }

    def is_valid(self) -> bool:
        return all(self.predicates().values())


def _caps_within(rng, lo, width, dmax):
    """Random geodesics with both endpoints in the arc ``(lo, lo + width)``,
    passing within ``dmax`` of the origin.

    Returns the normals (origin on the non-interior side) and a point on each
    geodesic within ``dmax`` of the origin, half of them at distance exactly
    ``dmax``.  Empty feasible ranges give ``nan`` rows, which callers reject.
    """
    n = len(lo)
    dlo = math.asin(1 / math.cosh(dmax))
    dhi = np.minimum(np.pi / 2, width / 2)
    delta = dlo + (dhi - dlo) * rng.uniform(size=n)
    phi = lo + delta + (width - 2 * delta) * rng.uniform(size=n)
    with np.errstate(invalid="ignore"):
        d0 = np.arccosh(1 / np.sin(delta))
        tmax = np.arccosh(np.maximum(1.0, math.cosh(dmax) / np.cosh(d0)))
    t = tmax * rng.uniform(-1, 1, n)
    edge = rng.uniform(size=n) < 0.5
    t[edge] = tmax[edge] * np.sign(t[edge])
    # the imaginary axis translated by d0 along the real axis, then rotated by phi
    x0, w = np.tanh(d0 / 2), 1j * np.tanh(t / 2)
    z = np.exp(1j * phi) * (w + x0) / (1 + x0 * w)
    normal = np.stack([np.cos(delta), np.cos(phi), np.sin(phi)], axis=-1) / np.sin(delta)[:, None]
    return normal, z


def _candidate_batch(rng, L, r, n):
    # H3 must miss the real diameter, so its endpoints lie in (0, pi); H2 must
    # miss H3 and so has both endpoints in the complementary arc
    n3, z3 = _caps_within(rng, np.zeros(n), np.full(n, np.pi), r)
    phi3 = np.arctan2(n3[:, 2], n3[:, 1])
    half3 = np.arctan2(1.0, n3[:, 0])  # cot(delta) = n0 when |(n1, n2)| = 1/sin(delta)
    n2, z2 = _caps_within(rng, phi3 + half3, 2 * np.pi - 2 * half3, L)
    X2, X3 = to_hyperboloid(z2), to_hyperboloid(z3)
    with np.errstate(invalid="ignore"):
        ok = (
            (minkowski(n3, H1_NORMAL) <= -1.0)
            & (minkowski(n3, n2) <= -1.0)
            & (minkowski(X2, n3) <= 0.0)
            & (minkowski(X3, n2) <= 0.0)
            & (minkowski(X2, H1_NORMAL) <= 0.0)
            & (np.abs(z2) < 1) & (np.abs(z3) < 1)
        )
    return z2[ok], z3[ok], n2[ok], n3[ok], n - int(ok.sum())


def sample_lemma_configs(L: float, r: float, n: int, seed: int, batch: int = 4096):
    """Draw ``n`` valid configurations as arrays ``(z2, z3, n2, n3)``.

    ``z1 = 0`` and ``H1`` is the lower half-disk.  Deterministic in ``seed``.
    """
    if not L > 0 or r < 0:
        raise DomainError("need L > 0 and r >= 0")
    if math.sinh(L) * math.sinh(r) > 1 + bounds.THRESHOLD_TOL:
        raise DomainError("sinh(L)*sinh(r) must not exceed 1", threshold="sinh(L)*sinh(r) <= 1")
    rng = np.random.default_rng(seed)
    parts = [[], [], [], []]
    have = rejections = 0
    while have < n:
        z2, z3, n2, n3, rej = _candidate_batch(rng, L, r, batch)
        rejections += rej
        for store, arr in zip(parts, (z2, z3, n2, n3)):
            store.append(arr)
        have += len(z2)
        if have == 0 and rejections >= REJECTION_BUDGET:
            raise RejectionBudgetExceeded(f"no configuration accepted after {rejections} draws")
        if rejections >= REJECTION_BUDGET * max(n, 1):
            raise RejectionBudgetExceeded(f"rejection budget exhausted after {rejections} draws")
    z2, z3, n2, n3 = (np.concatenate(p)[:n] for p in parts)
    return z2, z3, n2, n3


def sample_lemma_config(L: float, r: float, seed: int) -> LemmaConfig:
    z2, z3, n2, n3 = sample_lemma_configs(L, r, 1, seed, batch=256)
    return LemmaConfig(
        L, r,
        HalfPlaneH2.from_normal(H1_NORMAL),
        HalfPlaneH2.from_normal(n2[0]),
        HalfPlaneH2.from_normal(n3[0]),
        0j, complex(z2[0]), complex(z3[0]),
    )


@dataclass(frozen=True)
class LemmaCheck:
    intersects: bool
    angle: float
    bound: float
    passed: bool


def check_lemma_tech(cfg: LemmaConfig) -> LemmaCheck:
    """Exterior angle of ``H1, H2`` against ``c_L(L, r)``."""
    try:
        bound = bounds.c_L(cfg.L, cfg.r).value
    except DomainError as exc:
        raise ConfigInvalid(str(exc)) from None
    try:
        angle = ext_angle_halfplanes(cfg.h1, cfg.h2)
    except DisjointError:
        return LemmaCheck(False, math.nan, bound, False)
    return LemmaCheck(True, angle, bound, angle <= bound + ANGLE_TOL)


def lemma_angles(n2) -> np.ndarray:
    """Exterior angles between ``H1`` and each ``H2``; ``nan`` when they miss."""
    t = minkowski(n2, H1_NORMAL)
    ang = np.arccos(np.clip(t, -1.0, 1.0))
    ang[t > 1.0] = 0.0
    ang[t < -1.0 - 1e-10] = np.nan
    return ang


def verify_halfplane_lemma(L: float, r: float, trials: int = 4000, seed: int = 0) -> VerificationReport:
    t0 = time.perf_counter()
    bound = bounds.c_L(L, r).value
    _, _, n2, _ = sample_lemma_configs(L, r, trials, seed)
    ang = lemma_angles(n2)
    missed = int(np.isnan(ang).sum())
    over = int((ang[~np.isnan(ang)] > bound + ANGLE_TOL).sum())
    finite = ang[~np.isnan(ang)]
    return VerificationReport(
        "halfplane-lemma", trials, missed + over,
        float(finite.max()) if finite.size else math.nan, bound, seed,
        time.perf_counter() - t0,
        {"L": L, "r": r},
        {"non_intersecting": missed, "angle_exceeds_bound": over},
    )


def case_function_f(a: float, L: float, phi2hat: float | None = None) -> float:
    """Piecewise bound on the exterior angle in terms of the endpoint angle ``a``."""
    if phi2hat is None:
        phi2hat = 2 * math.atan(1 / math.sinh(L))
    if not -1e-13 <= a <= phi2hat + 1e-13:
        raise DomainError(f"a={a} outside [0, {phi2hat}]", threshold="phi2hat", limit=phi2hat)
    a = min(max(a, 0.0), phi2hat)
    if a <= phi2hat / 2:
        return 2 * math.atan(math.exp(L) * math.tan(a / 2))
    c = -math.sin(a) * math.sinh(L) + math.cos(a)
    return math.acos(max(-1.0, min(1.0, c)))


# ---------------------------------------------------------------------------
# area lemma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MoebiusDomain:
    """Moebius image of the unit disk (``base="disk"``) or of the wedge
    ``{0 < arg z < alpha pi}`` with ``0 < alpha <= 1`` (``base="wedge"``)."""

    base: str = "disk"
    alpha: float = 1.0
    m: MoebiusMap = field(default_factory=MoebiusMap.identity)

    def __post_init__(self):
        if self.base not in ("disk", "wedge"):
            raise ValueError(f"unknown base domain {self.base!r}")
        if self.base == "wedge" and not 0 < self.alpha <= 1:
            raise DomainError("wedge angle must lie in (0, pi]")

    def _base_pieces(self):
        if self.base == "disk":
            return [RoundDisk.circle(0, 1, interior=False)]
        upper = RoundDisk.halfplane(0, 1)
        lower_edge = RoundDisk.halfplane(0, -cmath.exp(1j * self.alpha * math.pi))
        return [upper.complement(), lower_edge.complement()]

    def complement_pieces(self) -> list:
        """Generalized disks whose union is the complement of the domain."""
        return [p.transform(self.m) for p in self._base_pieces()]

    def corners(self) -> list:
        if self.base == "disk":
            return []
        pts = [self.m(0), self.m(complex(math.inf))]
        return [p for p in pts if not cmath.isinf(p)]

    def _base_density(self, w):
        if self.base == "disk":
            if not abs(w) < 1:
                raise DomainError("point outside the domain")
            return 4 / (1 - abs(w) ** 2) ** 2
        if w == 0 or not 0 < cmath.phase(w) < self.alpha * math.pi:
            raise DomainError("point outside the domain")
        s = w ** (1 / self.alpha)
        ds = s / (self.alpha * w)
        return abs(ds) ** 2 / s.imag**2

    def density(self, z) -> float:
        """Hyperbolic area form of the domain at ``z``."""
        mi = self.m.inverse()
        w = mi(z)
        return self._base_density(w) * abs(mi.derivative(z)) ** 2


def _ray_intervals(piece: RoundDisk, z: complex, theta: float):
    u = complex(math.cos(theta), math.sin(theta))
    a = piece.a
    beta = 2 * ((a * z.conjugate() - piece.b.conjugate()) * u).real
    q0 = float(piece.q(z))
    disc = beta * beta - 4 * a * q0
    roots = []
    if a == 0:
        if beta != 0:
            roots.append(-q0 / beta)
    elif disc > 0:
        sq = math.sqrt(disc)
        qq = -0.5 * (beta + math.copysign(sq, beta))
        roots.extend([qq / a, q0 / qq] if qq != 0 else [])
    cuts = sorted(x for x in roots if x > 0)
    edges = [0.0] + cuts + [math.inf]
    out = []
    for lo, hi in zip(edges, edges[1:]):
        if math.isinf(hi):
            inside = (a < 0) if a != 0 else (beta < 0)
        else:
            mid = 0.5 * (lo + hi)
            inside = a * mid * mid + beta * mid + q0 < 0
        if inside:
            out.append((lo, hi))
    return out


def _radial_integral(pieces, z: complex, theta: float) -> float:
    ivs = sorted(iv for p in pieces for iv in _ray_intervals(p, z, theta))
    merged = []
    for lo, hi in ivs:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    total = 0.0
    for lo, hi in merged:
        if lo <= 0:
            raise DomainError("evaluation point lies in the closure of the complement")
        total += 0.5 * (lo**-2 - (0.0 if math.isinf(hi) else hi**-2))
    return total


def _break_angles(pieces, corners, z: complex):
    angles = []
    for p in pieces:
        g = p.a * z.conjugate() - p.b.conjugate()
        if abs(g) == 0:
            continue
        phase = cmath.phase(g)
        vals = [0.0]
        aq = p.a * float(p.q(z))
        if aq >= 0 and math.sqrt(aq) <= abs(g):
            c = math.sqrt(aq) / abs(g)
            vals += [c, -c]
        for v in vals:
            base = math.acos(v)
            angles += [base - phase, -base - phase]
    angles += [cmath.phase(c - z) for c in corners]
    pts = sorted({round(a % (2 * math.pi), 15) for a in angles})
    return [a for a in pts if 1e-12 < a < 2 * math.pi - 1e-12]


def area_lemma_quadrature(domain: MoebiusDomain, z: complex, tol: float = 1e-9) -> float:
    """``(1/rho(z)) * integral over the complement of |xi - z|^{-4} dA``.

    In polar coordinates about ``z`` the radial integral is exact; the angular
    integral is adaptive Gauss-Kronrod, split at tangency and corner rays.
    """
    if tol < 1e-12:
        raise DomainError("quadrature tolerance too small")
    z = complex(z)
    rho = domain.density(z)
    pieces = domain.complement_pieces()
    pts = _break_angles(pieces, domain.corners(), z)
    val, err = integrate.quad(
        lambda th: _radial_integral(pieces, z, th), 0.0, 2 * math.pi,
        points=pts or None, epsabs=0.01 * tol * rho, epsrel=1e-13, limit=2000,
    )
    if not err <= tol * rho:
        raise QuadratureNonConvergent(f"angular quadrature error {err / rho} > {tol}", val / rho)
    return val / rho


# ---------------------------------------------------------------------------
# Bers kernel
# ---------------------------------------------------------------------------


def _disk_rule(n_r: int, n_t: int):
    x, w = np.polynomial.legendre.leggauss(n_r)
    rho = 0.5 * (x + 1)
    wr = 0.5 * w * rho
    theta = 2 * np.pi * np.arange(n_t) / n_t
    pts = rho[:, None] * np.exp(1j * theta)[None, :]
    wts = wr[:, None] * np.full(n_t, 2 * np.pi / n_t)[None, :]
    return pts, wts


def bers_kernel(lam: Callable, z: complex, tol: float = 1e-12, max_levels: int = 9) -> complex:
    """``-(6/pi) * integral over the unit disk of lam(xi)/(xi - z)^4 dA``.

    Tensor rule: Gauss-Legendre in the radius, trapezoid in the angle;
    both resolutions double until successive values agree to ``tol``.
    """
    z = complex(z)
    if not abs(z) > 1 + 1e-6:
        raise DomainError("kernel point must satisfy |z| > 1", threshold="|z| > 1")
    prev = None
    n_r, n_t = 16, 32
    for _ in range(max_levels):
        pts, wts = _disk_rule(n_r, n_t)
        val = complex(np.sum(wts * np.asarray(lam(pts)) / (pts - z) ** 4))
        if prev is not None and abs(val - prev) <= tol * max(abs(val), 1e-300):
            return -6 / math.pi * val
        prev = val
        n_r, n_t = 2 * n_r, 2 * n_t
    raise QuadratureNonConvergent(f"kernel quadrature at z={z} did not converge", -6 / math.pi * prev)


def exterior_density(z: complex) -> float:
    return 4.0 / (abs(z) ** 2 - 1) ** 2


def sup_on_disk(lam: Callable, n_r: int = 200, n_t: int = 400) -> float:
    rho = np.linspace(0, 1, n_r)
    theta = 2 * np.pi * np.arange(n_t) / n_t
    return float(np.max(np.abs(lam(rho[:, None] * np.exp(1j * theta)[None, :]))))


def lipschitz_check(lam: Callable, points, tol: float = 1e-9, lam_sup: float | None = None) -> dict:
    """Ratio of the kernel's pointwise norm to ``||lam||_inf`` at exterior points."""
    if lam_sup is None:
        lam_sup = sup_on_disk(lam)
    ratios = []
    for z in points:
        k = bers_kernel(lam, z, tol=min(tol, 1e-10))
        ratios.append(abs(k) / exterior_density(z) / lam_sup if lam_sup > 0 else 0.0)
    mr = max(ratios) if ratios else 0.0
    return {"max_ratio": mr, "ratios": ratios, "pass": mr <= 1.5 + tol}


def unimodular_field(rng: np.random.Generator, degree: int = 3) -> Callable:
    """``exp(i P(x, y))`` for a random real polynomial ``P``: sup norm exactly 1."""
    coeffs = rng.normal(size=(degree + 1, degree + 1))

    def lam(xi):
        xi = np.asarray(xi)
        p = np.polynomial.polynomial.polyval2d(xi.real, xi.imag, coeffs)
        return np.exp(1j * p)

    return lam


# ---------------------------------------------------------------------------
# campaigns
# ---------------------------------------------------------------------------


def random_area_cases(rng, n: int):
    """Random Moebius images of the disk and of convex wedges, with a point inside."""
    out = []
    while len(out) < n:
        m = random_moebius(rng)
        if rng.uniform() < 0.5:
            dom = MoebiusDomain("disk", 1.0, m)
            w = 0.9 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        else:
            alpha = rng.uniform(0.2, 1.0)
            dom = MoebiusDomain("wedge", alpha, m)
            w = rng.uniform(0.2, 5) * cmath.exp(1j * alpha * math.pi * rng.uniform(0.1, 0.9))
        z = m(w)
        if cmath.isinf(z) or abs(z) > 1e3:
            continue
        out.append((dom, z))
    return out


def verify_area_lemma(trials: int = 50, seed: int = 0, tol: float = 1e-8) -> VerificationReport:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    target = math.pi / 4
    cases = [(MoebiusDomain("disk"), 0j), (MoebiusDomain("wedge", 1.0), 1j)]
    cases += random_area_cases(rng, trials)
    values = [area_lemma_quadrature(d, z, tol) for d, z in cases]
    viol = sum(v > target + tol for v in values)
    # Moebius images of the disk attain the bound
    viol += sum(abs(v - target) > tol for (d, _), v in zip(cases, values) if d.base == "disk")
    viol += sum(abs(v - target) > tol for v in values[:2])
    return VerificationReport(
        "area-lemma", len(cases), int(viol), max(values), target, seed,
        time.perf_counter() - t0, {"tol": tol},
        {"disk_value": values[0], "halfplane_value": values[1]},
    )


def verify_bers_kernel(trials: int = 20, seed: int = 0, tol: float = 1e-8) -> VerificationReport:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    mods = np.exp(rng.uniform(math.log(1.2), math.log(50.0), trials))
    pts = mods * np.exp(2j * np.pi * rng.uniform(size=trials))
    one = lambda xi: np.ones_like(xi)
    viol = 0
    ratios = []
    for z in map(complex, pts):
        k = bers_kernel(one, z)
        ref = -6 / z**4
        ratio = abs(k) / exterior_density(z)
        ratios.append(ratio)
        viol += abs(k - ref) > tol * abs(ref)
        viol += abs(ratio - 1.5 * (1 - abs(z) ** -2) ** 2) > tol
        viol += ratio > 1.5 + tol
    lam = unimodular_field(rng)
    chk = lipschitz_check(lam, pts, tol, lam_sup=1.0)
    viol += not chk["pass"]
    pts = list(map(complex, pts))
    return VerificationReport(
        "bers-kernel", trials, int(viol), max(ratios + [chk["max_ratio"]]), 1.5, seed,
        time.perf_counter() - t0, {"tol": tol},
        {"constant_field_max_ratio": max(ratios), "random_field_max_ratio": chk["max_ratio"]},
    )


def verify_wedge(k: float, L: float, samples: int = 10_000) -> VerificationReport:
    t0 = time.perf_counter()
    s = (1 - k * k) / 2
    dome = wedge_dome(k)
    bend = bounds.b_L(L, s).value
    thick = wedge_thickness(k, samples)
    tb = thickness_bound(s)
    viol = int(dome.bending_weight > bend + 1e-12) + int(thick > tb + 1e-3)
    return VerificationReport(
        "wedge", 2, viol, dome.bending_weight, bend, None, time.perf_counter() - t0,
        {"k": k, "L": L, "samples": samples},
        {"schwarzian_norm": s, "thickness": thick, "thickness_bound": tb},
    )


def trig_discrepancy(alpha: float, beta: float) -> float:
    sol = ideal_triangle(alpha, beta)
    c = sol.c
    return max(
        abs(math.cosh(c) - sol.cosh_c()) / sol.cosh_c(),
        abs(math.sinh(c) - sol.sinh_c()) / max(sol.cosh_c(), 1.0),
        abs(sol.tan_product() - math.exp(-c)),
        abs(math.sinh(c) ** 2 + 1 - math.cosh(c) ** 2) / math.cosh(c) ** 2,
    )


def verify_trig(trials: int = 10_000, seed: int = 0, tol: float = 1e-10) -> VerificationReport:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    viol = 0
    done = 0
    while done < trials:
        a, b = rng.uniform(1e-3, math.pi - 1e-3, 2)
        if a + b >= math.pi:
            continue
        d = trig_discrepancy(a, b)
        worst = max(worst, d)
        viol += d > tol
        done += 1
    return VerificationReport("trig", trials, int(viol), worst, tol, seed, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# lamination norm by sampling arcs
# ---------------------------------------------------------------------------


def _step(z: complex, direction: complex, s: float) -> complex:
    m = disk_automorphism(0.0, z)
    return m.inverse()(math.tanh(s / 2) * direction)


def _steps(z, direction, s):
    """Vectorized: points at distance ``s`` from ``z`` leaving in ``direction``
    (measured after moving ``z`` to the origin)."""
    w = np.tanh(s / 2) * direction
    return (w + z) / (1 + np.conj(z) * w)


def _random_polylines(mu: FiniteLamination, L: float, n: int, rng) -> float:
    """Best mass over ``n`` random arcs of at most three geodesic pieces, total length ``< L``."""
    N = mu.normals()
    weights = np.array([l.weight for l in mu.leaves])
    # start near a random leaf
    idx = rng.integers(len(mu.leaves), size=n)
    feet = np.array([to_hyperboloid(l.geodesic.point_at(0.0)) for l in mu.leaves])
    Y0 = feet[idx]
    N_idx = N[idx]
    T = lorentz_cross(Y0, N_idx)
    T = T / np.sqrt(minkowski(T, T))[:, None]
    t = rng.uniform(-3, 3, n)[:, None]
    X = np.cosh(t) * Y0 + np.sinh(t) * T
    z = (X[:, 1] + 1j * X[:, 2]) / (1 + X[:, 0])
    z = _steps(z, np.exp(2j * np.pi * rng.uniform(size=n)), rng.uniform(0, L / 2, n))
    n_seg = rng.integers(1, 4, size=n)
    parts = rng.dirichlet(np.ones(3), size=n)
    parts[n_seg < 3, 2] = 0
    parts[n_seg < 2, 1] = 0
    parts /= parts.sum(axis=1, keepdims=True)
    lengths = L * rng.uniform(size=n)[:, None] * parts
    hit = np.zeros((n, len(mu.leaves)), dtype=bool)
    side = minkowski(to_hyperboloid(z)[:, None, :], N[None, :, :])
    for k in range(3):
        z = _steps(z, np.exp(2j * np.pi * rng.uniform(size=n)), lengths[:, k])
        new = minkowski(to_hyperboloid(z)[:, None, :], N[None, :, :])
        hit |= side * new < 0
        side = new
    return float(np.max(hit.astype(float) @ weights))


def _frame(g):
    """Foot of the perpendicular from the origin and the unit tangent there."""
    Y0 = to_hyperboloid(g.point_at(0.0))
    T = lorentz_cross(Y0, g.normal())
    return Y0, T / math.sqrt(float(minkowski(T, T)))


def leaf_pair_distance(g1, g2):
    """Minimal distance between two geodesics by direct minimization over
    their arclength parameters; returns ``(d, z1, z2)``.

    Distance between points of two geodesics is convex in the parameters,
    so a single local search suffices.
    """
    (Y1, T1), (Y2, T2) = _frame(g1), _frame(g2)

    def point(Y, T, s):
        return math.cosh(s) * Y + math.sinh(s) * T

    def cosh_d(p):
        return -float(minkowski(point(Y1, T1, p[0]), point(Y2, T2, p[1])))

    res = optimize.minimize(lambda p: math.log(cosh_d(p)), (0.0, 0.0), method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
    X1, X2 = point(Y1, T1, res.x[0]), point(Y2, T2, res.x[1])
    return (math.acosh(max(1.0, cosh_d(res.x))), complex(*X1[1:]) / (1 + X1[0]),
            complex(*X2[1:]) / (1 + X2[0]))


def arc_sampler_norm(mu: FiniteLamination, L: float, samples: int = 10_000, seed: int = 0,
                     eps: float = 1e-3) -> float:
    """Brute-force lower estimate of ``||mu||_L`` from explicit arcs of length ``< L``.

    Candidates are short arcs across each leaf, the minimizing segment
    between each pair of leaves extended by ``eps`` at both ends, and
    ``samples`` random piecewise-geodesic arcs with at most three pieces.
    """
    if not mu.leaves:
        return 0.0
    rng = np.random.default_rng(seed)
    w = [l.weight for l in mu.leaves]
    best = float(max(w))
    for i, j in itertools.combinations(range(len(mu.leaves)), 2):
        d, a, b = leaf_pair_distance(mu.leaves[i].geodesic, mu.leaves[j].geodesic)
        if d + 2 * eps >= L or d < 1e-9:
            continue
        a2 = _step(a, -_direction(a, b), eps)
        b2 = _step(b, -_direction(b, a), eps)
        best = max(best, transverse_measure(mu, TransverseArc(a2, b2)))
    if samples > 0:
        best = max(best, _random_polylines(mu, L, samples, rng))
    return best


def _direction(z: complex, target: complex) -> complex:
    """Unit tangent at the origin, after moving ``z`` there, of the ray to ``target``."""
    v = disk_automorphism(0.0, z)(target)
    return v / abs(v)


def random_stacked_lamination(rng: np.random.Generator, max_leaves: int = 5) -> FiniteLamination:
    """Disjoint leaves crossing the real diameter, moved by a random disk automorphism."""
    while True:
        n = int(rng.integers(1, max_leaves + 1))
        pos = np.sort(rng.uniform(-1.5, 1.5, n))
        leaves = []
        for s in pos:
            tilt = rng.uniform(-0.6, 0.6)
            g = Geodesic(math.pi / 2 + tilt, 3 * math.pi / 2 + tilt).transform(translation(float(s)))
            leaves.append(Leaf(g, float(rng.uniform(0.1, 3.0))))
        try:
            mu = FiniteLamination(leaves)
        except InvalidLamination:
            continue
        return mu.transform(random_disk_automorphism(rng, 0.6))
