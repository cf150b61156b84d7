"""Hyperbolic plane primitives and boundary circles of hyperbolic 3-space.

The canonical model is the Poincare disk with curvature -1, i.e. length
element ``2|dz|/(1-|z|^2)``.  The matching area form is
``4/(1-|z|^2)^2``, which is the normalisation used for pointwise norms of
quadratic differentials in :mod:`bendbound.schwarzian`.

Most computations go through the hyperboloid model
``{X : <X,X> = -1, X0 > 0}`` with ``<X,Y> = -X0 Y0 + X1 Y1 + X2 Y2``:
a geodesic is the orthogonal complement of a unit spacelike normal, and a
half-plane is ``{X : <X, n> >= 0}`` for an inward normal ``n``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DisjointError, DomainError

TWO_PI = 2.0 * math.pi
INF = complex(math.inf, 0.0)

EPS_BOUNDARY = 1e-14
EPS_TANGENT = 1e-10


def is_inf(z) -> bool:
    return cmath.isinf(z)


# ---------------------------------------------------------------------------
# Moebius maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MoebiusMap:
    """``z -> (a z + b)/(c z + d)`` acting on the Riemann sphere."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if self.det() == 0:
            raise ValueError("singular Moebius matrix (ad - bc = 0)")

    @classmethod
    def identity(cls) -> MoebiusMap:
        return cls(1, 0, 0, 1)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def normalize(self) -> MoebiusMap:
        s = cmath.sqrt(self.det())
        return MoebiusMap(self.a / s, self.b / s, self.c / s, self.d / s)

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return (self.a * z + self.b) / (self.c * z + self.d)
        z = complex(z)
        if is_inf(z):
            return self.a / self.c if self.c != 0 else INF
        den = self.c * z + self.d
        if den == 0:
            return INF
        return (self.a * z + self.b) / den

    def derivative(self, z):
        return self.det() / (self.c * z + self.d) ** 2

    def __matmul__(self, other: MoebiusMap) -> MoebiusMap:
        # (self @ other)(z) == self(other(z))
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        ).normalize()

    def inverse(self) -> MoebiusMap:
        return MoebiusMap(self.d, -self.b, -self.c, self.a).normalize()

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def is_disk_automorphism(self, tol: float = 1e-10) -> bool:
        m = self.normalize()
        return abs(m.d - m.a.conjugate()) < tol and abs(m.c - m.b.conjugate()) < tol


def disk_automorphism(theta: float, a: complex) -> MoebiusMap:
    """``z -> e^{i theta} (z - a)/(1 - conj(a) z)`` for ``|a| < 1``."""
    if abs(a) >= 1:
        raise DomainError("disk automorphism needs |a| < 1")
    u = cmath.exp(1j * theta)
    return MoebiusMap(u, -u * a, -complex(a).conjugate(), 1).normalize()


def translation(s: float) -> MoebiusMap:
    """Hyperbolic translation by signed distance ``s`` along the real diameter."""
    ch, sh = math.cosh(s / 2), math.sinh(s / 2)
    return MoebiusMap(ch, sh, sh, ch)


def random_disk_automorphism(rng: np.random.Generator, max_radius: float = 0.9) -> MoebiusMap:
    r = max_radius * math.sqrt(rng.uniform())
    a = r * cmath.exp(1j * rng.uniform(0, TWO_PI))
    return disk_automorphism(rng.uniform(0, TWO_PI), a)


def random_moebius(rng: np.random.Generator, scale: float = 1.0) -> MoebiusMap:
    """A random element of PSL(2,C) with entries of size about ``scale``."""
    while True:
        a, b, c, d = (scale * complex(*rng.normal(size=2)) for _ in range(4))
        if abs(a * d - b * c) > 0.1 * scale * scale:
            return MoebiusMap(a, b, c, d).normalize()


# Cayley transform: disk -> upper half-plane, -1 -> 0, 1 -> infinity.
CAYLEY = MoebiusMap(1j, 1j, -1, 1).normalize()
CAYLEY_INV = CAYLEY.inverse()


def disk_to_uhp(z):
    return CAYLEY(z)


def uhp_to_disk(w):
    return CAYLEY_INV(w)


# ---------------------------------------------------------------------------
# Hyperboloid model helpers (vectorised over the last axis)
# ---------------------------------------------------------------------------


def minkowski(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return -u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2]


def lorentz_cross(u, v):
    """Vector orthogonal (Minkowski) to both ``u`` and ``v``."""
    w = np.cross(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    w[..., 0] = -w[..., 0]
    return w


def to_hyperboloid(z):
    z = np.asarray(z, dtype=complex)
    n2 = z.real**2 + z.imag**2
    den = 1.0 - n2
    return np.stack([(1.0 + n2) / den, 2 * z.real / den, 2 * z.imag / den], axis=-1)


def from_hyperboloid(X):
    X = np.asarray(X, dtype=float)
    out = (X[..., 1] + 1j * X[..., 2]) / (1.0 + X[..., 0])
    return complex(out) if out.ndim == 0 else out


def ideal_vector(theta):
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.ones_like(theta), np.cos(theta), np.sin(theta)], axis=-1)


def unit_spacelike(N):
    N = np.asarray(N, dtype=float)
    return N / np.sqrt(minkowski(N, N))[..., None]


def check_point(z) -> complex:
    z = complex(z)
    if not abs(z) < 1.0 - EPS_BOUNDARY:
        raise DomainError(f"point {z} is not inside the unit disk", threshold="|z| < 1")
    return z


def dist_h2(p, q) -> float:
    """Hyperbolic distance in the disk, ``2 atanh |p-q|/|1-conj(p) q|``."""
    p, q = check_point(p), check_point(q)
    return 2.0 * math.atanh(abs(p - q) / abs(1 - p.conjugate() * q))


def point_toward(z1, z2, s: float) -> complex:
    """Point at distance ``s`` from ``z1`` on the geodesic ray through ``z2``."""
    m = disk_automorphism(0.0, z1)
    w = m(z2)
    u = w / abs(w) if w != 0 else 1.0
    return m.inverse()(math.tanh(s / 2) * u)


def _angle(u: complex) -> float:
    return math.atan2(u.imag, u.real) % TWO_PI


def _in_open_arc(x: float, p: float, q: float) -> bool:
    """``x`` strictly inside the counter-clockwise arc from ``p`` to ``q``."""
    return 0.0 < (x - p) % TWO_PI < (q - p) % TWO_PI


# ---------------------------------------------------------------------------
# Geodesics and half-planes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Geodesic:
    """Unoriented geodesic stored by its ideal endpoints, as angles ``p < q``."""

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p) % TWO_PI, float(self.q) % TWO_PI
        if abs(p - q) < 1e-15 or abs(abs(p - q) - TWO_PI) < 1e-15:
            raise DomainError("geodesic endpoints must differ")
        if p > q:
            p, q = q, p
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_points(cls, u: complex, v: complex) -> Geodesic:
        """Geodesic with ideal endpoints ``u``, ``v`` on the unit circle."""
        return cls(_angle(u), _angle(v))

    @classmethod
    def through(cls, z1, z2) -> Geodesic:
        """The geodesic through two interior points."""
        z1, z2 = check_point(z1), check_point(z2)
        if z1 == z2:
            raise DomainError("need two distinct points")
        m = disk_automorphism(0.0, z1)
        w = m(z2)
        u = w / abs(w)
        mi = m.inverse()
        return cls.from_points(mi(u), mi(-u))

    @classmethod
    def from_normal(cls, N) -> Geodesic:
        N = np.asarray(N, dtype=float)
        phi = math.atan2(N[2], N[1])
        delta = math.acos(max(-1.0, min(1.0, N[0] / math.hypot(N[1], N[2]))))
        return cls(phi - delta, phi + delta)

    def endpoints(self) -> tuple[complex, complex]:
        return cmath.exp(1j * self.p), cmath.exp(1j * self.q)

    def normal(self) -> np.ndarray:
        """Unit spacelike normal; positive side contains the arc (p, q)."""
        # centre angle phi and half-width delta avoid cancellation for short arcs
        phi, delta = 0.5 * (self.p + self.q), 0.5 * (self.q - self.p)
        return np.array([math.cos(delta), math.cos(phi), math.sin(phi)]) / math.sin(delta)

    def transform(self, m: MoebiusMap) -> Geodesic:
        u, v = self.endpoints()
        return Geodesic.from_points(m(u), m(v))

    def crosses(self, other: Geodesic) -> bool:
        """Endpoint interleaving test on the circle."""
        a = _in_open_arc(other.p, self.p, self.q)
        b = _in_open_arc(other.q, self.p, self.q)
        shared = {self.p, self.q} & {other.p, other.q}
        return a != b and not shared

    def point_at(self, s: float) -> complex:
        """Point at signed arclength ``s`` from the foot of the origin."""
        N = self.normal()
        O = np.array([1.0, 0.0, 0.0])
        Y0 = O - minkowski(O, N) * N
        Y0 = Y0 / math.sqrt(-minkowski(Y0, Y0))
        T = unit_spacelike(lorentz_cross(Y0, N))
        return from_hyperboloid(math.cosh(s) * Y0 + math.sinh(s) * T)


@dataclass(frozen=True)
class HalfPlaneH2:
    """A closed half-plane: ``side=+1`` keeps the ideal arc from p to q."""

    boundary: Geodesic
    side: int = 1

    def __post_init__(self):
        if self.side not in (1, -1):
            raise ValueError("side must be +1 or -1")

    @classmethod
    def from_normal(cls, n) -> HalfPlaneH2:
        g = Geodesic.from_normal(n)
        side = 1 if minkowski(g.normal(), n) > 0 else -1
        return cls(g, side)

    def inward_normal(self) -> np.ndarray:
        return self.side * self.boundary.normal()

    def ideal_arc(self) -> tuple[float, float]:
        """Counter-clockwise ideal arc ``(start, end)`` in the closure."""
        g = self.boundary
        return (g.p, g.q) if self.side == 1 else (g.q, g.p)

    def contains(self, z, strict: bool = False) -> bool:
        v = float(minkowski(to_hyperboloid(check_point(z)), self.inward_normal()))
        return v > 0 if strict else v >= 0

    def complement(self) -> HalfPlaneH2:
        return HalfPlaneH2(self.boundary, -self.side)

    def transform(self, m: MoebiusMap) -> HalfPlaneH2:
        """Image under a disk automorphism."""
        start, end = self.ideal_arc()
        mid = start + 0.5 * ((end - start) % TWO_PI)
        g = self.boundary.transform(m)
        x = _angle(m(cmath.exp(1j * mid)))
        return HalfPlaneH2(g, 1 if _in_open_arc(x, g.p, g.q) else -1)

    def disjoint_from(self, other: HalfPlaneH2) -> bool:
        """Open half-planes disjoint, i.e. their open ideal arcs are disjoint."""
        s1, e1 = self.ideal_arc()
        s2, e2 = other.ideal_arc()
        inside = lambda x, s, e: _in_open_arc(x, s, e)
        mid2 = s2 + 0.5 * ((e2 - s2) % TWO_PI)
        return not (inside(s2, s1, e1) or inside(e2, s1, e1) or inside(mid2, s1, e1)
                    or inside(s1, s2, e2))


def dist_point_geodesic(p, g: Geodesic) -> float:
    X = to_hyperboloid(check_point(p))
    return math.asinh(abs(float(minkowski(X, g.normal()))))


def inversive_product(g1: Geodesic, g2: Geodesic) -> float:
    """``cos`` of the crossing angle, or ``cosh`` of the distance.

    Returns a value in ``[0, 1)`` when the geodesics cross and ``>= 1``
    when they are disjoint (``1`` for asymptotic or equal geodesics).
    """
    t = abs(float(minkowski(g1.normal(), g2.normal())))
    if abs(t - 1.0) <= EPS_TANGENT:
        return 1.0
    return t


def geodesic_distance(g1: Geodesic, g2: Geodesic) -> float:
    """Distance between disjoint geodesics; zero when they cross or meet."""
    return math.acosh(max(1.0, inversive_product(g1, g2)))


def ext_angle_halfplanes(h1: HalfPlaneH2, h2: HalfPlaneH2) -> float:
    """Exterior angle ``pi - (interior angle of h1 & h2)``.

    Nested half-planes give 0 and externally tangent ones give pi.
    Half-planes whose boundaries are disjoint and which are not nested raise
    :class:`DisjointError`.
    """
    n1, n2 = h1.inward_normal(), h2.inward_normal()
    t = float(minkowski(n1, n2))
    if t > 1.0 + EPS_TANGENT:
        return 0.0
    if t < -1.0 - EPS_TANGENT:
        raise DisjointError("half-plane boundaries are disjoint and the half-planes are not nested")
    return half_angle(float(minkowski(n1 - n2, n1 - n2)), float(minkowski(n1 + n2, n1 + n2)))


def half_angle(diff_sq: float, sum_sq: float) -> float:
    """Angle between unit vectors from ``|u - v|^2 = 4 sin^2`` and ``|u + v|^2 = 4 cos^2``
    of the half angle; accurate near 0 and pi where ``acos`` is not."""
    return 2.0 * math.atan2(math.sqrt(max(diff_sq, 0.0)), math.sqrt(max(sum_sq, 0.0)))


# ---------------------------------------------------------------------------
# Triangles with one ideal vertex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealTriangleSolve:
    alpha: float
    beta: float
    c: float

    # numerators rewritten as sums of products, free of cancellation

    def cosh_c(self) -> float:
        a, b = self.alpha, self.beta
        num = math.cos((a - b) / 2) ** 2 + math.cos((a + b) / 2) ** 2
        return num / (math.sin(a) * math.sin(b))

    def sinh_c(self) -> float:
        a, b = self.alpha, self.beta
        num = 2 * math.cos((a + b) / 2) * math.cos((a - b) / 2)
        return num / (math.sin(a) * math.sin(b))

    def tan_product(self) -> float:
        return math.tan(self.alpha / 2) * math.tan(self.beta / 2)


def ideal_triangle_side(alpha: float, beta: float) -> float:
    """Finite side of a triangle with angles alpha, beta and one ideal vertex."""
    if not (0 < alpha < math.pi and 0 < beta < math.pi):
        raise DomainError("angles must lie in (0, pi)")
    if alpha + beta > math.pi + 1e-13:
        raise DomainError("alpha + beta must not exceed pi", threshold="alpha + beta <= pi")
    # asinh keeps full relative accuracy when C is small
    sh = IdealTriangleSolve(alpha, beta, 0.0).sinh_c()
    return math.asinh(max(0.0, sh))


def ideal_triangle(alpha: float, beta: float) -> IdealTriangleSolve:
    return IdealTriangleSolve(alpha, beta, ideal_triangle_side(alpha, beta))


# ---------------------------------------------------------------------------
# Round disks on the sphere at infinity of H^3
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RoundDisk:
    """Open generalized disk ``{z : a|z|^2 - 2 Re(conj(b) z) + d < 0}``.

    The coefficients are normalised so that ``|b|^2 - a d = 1``.  With this
    normalisation ``Q(z)`` is the signed inversive coordinate of the circle;
    the symmetric pairing :meth:`inversive` gives the cosine of the angle
    between the oriented boundary circles.
    """

    a: float
    b: complex
    d: float

    def __post_init__(self):
        s = abs(self.b) ** 2 - self.a * self.d
        if not s > 0:
            raise DomainError("degenerate circle")
        r = math.sqrt(s)
        object.__setattr__(self, "a", float(self.a) / r)
        object.__setattr__(self, "b", complex(self.b) / r)
        object.__setattr__(self, "d", float(self.d) / r)

    @classmethod
    def circle(cls, center: complex, radius: float, interior: bool = True) -> RoundDisk:
        if radius <= 0:
            raise DomainError("radius must be positive")
        s = 1 if interior else -1
        c = complex(center)
        return cls(s / radius, s * c / radius, s * (abs(c) ** 2 - radius**2) / radius)

    @classmethod
    def halfplane(cls, point: complex, direction: complex) -> RoundDisk:
        """Half-plane to the left of the line through ``point`` along ``direction``."""
        u = complex(direction) / abs(direction)
        b = 1j * u
        return cls(0.0, b, 2 * (b.conjugate() * complex(point)).real)

    def q(self, z):
        z = np.asarray(z, dtype=complex)
        return self.a * np.abs(z) ** 2 - 2 * (np.conj(self.b) * z).real + self.d

    def contains(self, z) -> bool:
        if is_inf(complex(z)):
            return self.a < 0
        return bool(self.q(z) < 0)

    def complement(self) -> RoundDisk:
        return RoundDisk(-self.a, -self.b, -self.d)

    def inversive(self, other: RoundDisk) -> float:
        return (self.b * other.b.conjugate()).real - 0.5 * (self.a * other.d + other.a * self.d)

    def hermitian(self) -> np.ndarray:
        return np.array([[self.a, -self.b], [-self.b.conjugate(), self.d]], dtype=complex)

    def transform(self, m: MoebiusMap) -> RoundDisk:
        """Image of the disk under a Moebius map of the sphere."""
        n = m.inverse().matrix()
        h = n.conj().T @ self.hermitian() @ n
        return RoundDisk(h[0, 0].real, -h[0, 1], h[1, 1].real)

    def density(self, z) -> float:
        """Hyperbolic area form ``4/Q(z)^2`` of the disk at an interior point."""
        qz = float(self.q(z))
        if not qz < 0:
            raise DomainError("point is not inside the disk")
        return 4.0 / qz**2
