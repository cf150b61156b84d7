import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from bendbound.errors import DisjointError, DomainError
from bendbound.hyp_core import (
    INF,
    Geodesic,
    HalfPlaneH2,
    MoebiusMap,
    RoundDisk,
    dist_h2,
    dist_point_geodesic,
    disk_automorphism,
    ext_angle_halfplanes,
    geodesic_distance,
    ideal_triangle,
    ideal_triangle_side,
    inversive_product,
    is_inf,
    random_disk_automorphism,
    random_moebius,
    uhp_to_disk,
    disk_to_uhp,
)

angles = st.floats(0, 2 * math.pi, exclude_max=True)
disk_pts = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0, 0.95), angles)


def geodesic_pair(rng):
    a = rng.uniform(0, 2 * math.pi, 4)
    return Geodesic(a[0], a[1]), Geodesic(a[2], a[3])


# -- Moebius maps ------------------------------------------------------------


def test_identity_and_projective_infinity():
    assert MoebiusMap.identity()(0.3 + 0.1j) == 0.3 + 0.1j
    inv = MoebiusMap(0, 1, 1, 0)
    assert inv(INF) == 0
    assert is_inf(inv(0))


def test_inverse_law():
    rng = np.random.default_rng(1)
    for _ in range(200):
        m = random_moebius(rng)
        z = complex(*rng.normal(size=2))
        assert abs(m.inverse()(m(z)) - z) < 1e-12 * max(1, abs(z))
        assert abs(abs(m.normalize().det()) - 1) < 1e-12


def test_composition_associative():
    rng = np.random.default_rng(2)
    a, b, c = (random_moebius(rng) for _ in range(3))
    z = 0.2 - 0.4j
    assert abs(((a @ b) @ c)(z) - (a @ (b @ c))(z)) < 1e-10
    assert abs((a @ b)(z) - a(b(z))) < 1e-10


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        MoebiusMap(1, 2, 2, 4)


def test_cayley_round_trip():
    z = 0.3 + 0.5j
    w = disk_to_uhp(z)
    assert w.imag > 0
    assert abs(uhp_to_disk(w) - z) < 1e-14


# -- distances ---------------------------------------------------------------


def test_dist_examples():
    assert dist_h2(0, 0) == 0
    assert dist_h2(0, 0.5) == pytest.approx(math.log(3), abs=1e-14)


def test_dist_density_integral():
    # integrate the length element 2/(1-t^2) along the radius
    from scipy.integrate import quad

    val, _ = quad(lambda t: 2 / (1 - t * t), 0, 0.7)
    assert dist_h2(0, 0.7) == pytest.approx(val, rel=1e-12)


def test_dist_outside_disk():
    with pytest.raises(DomainError):
        dist_h2(0, 1.0)


@given(disk_pts, disk_pts, disk_pts)
def test_triangle_inequality(p, q, r):
    assert dist_h2(p, r) <= dist_h2(p, q) + dist_h2(q, r) + 1e-12
    assert dist_h2(p, q) == pytest.approx(dist_h2(q, p), abs=1e-12)


def test_isometry_invariance_of_distances_and_angles():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        m = random_disk_automorphism(rng, 0.8)
        p, q = (0.8 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform()) for _ in range(2))
        assert abs(dist_h2(m(p), m(q)) - dist_h2(p, q)) < 1e-10 * max(1, dist_h2(p, q))
        g1, g2 = geodesic_pair(rng)
        t = inversive_product(g1, g2)
        assert inversive_product(g1.transform(m), g2.transform(m)) == pytest.approx(t, rel=1e-10, abs=1e-10)
        assert abs(dist_point_geodesic(m(p), g1.transform(m)) - dist_point_geodesic(p, g1)) < 1e-9


# -- geodesics ---------------------------------------------------------------


def test_point_on_geodesic_has_zero_distance():
    g = Geodesic(0.3, 2.5)
    for s in (-1.0, 0.0, 2.0):
        assert dist_point_geodesic(g.point_at(s), g) < 1e-12


def test_distance_to_geodesic_with_closest_point_at_radius_rho():
    for rho in (0.1, 0.5, 0.9):
        # geodesic orthogonal to the real diameter through rho, rotated
        c = (1 + rho**2) / (2 * rho)
        half = math.acos(1 / c)
        g = Geodesic(-half, half).transform(disk_automorphism(1.1, 0))
        assert dist_point_geodesic(0, g) == pytest.approx(dist_h2(0, rho), rel=1e-12)


def test_inversive_examples():
    g = Geodesic(0.0, math.pi)
    assert inversive_product(g, g) == 1.0
    assert inversive_product(g, Geodesic(math.pi / 2, 3 * math.pi / 2)) == pytest.approx(0, abs=1e-15)
    assert inversive_product(Geodesic(0, 1), Geodesic(1, 2)) == 1.0


def test_inversive_distance_matches_sampling():
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 20:
        g1, g2 = geodesic_pair(rng)
        if g1.crosses(g2):
            continue
        d = geodesic_distance(g1, g2)
        if d > 3:
            continue
        f = lambda x: dist_point_geodesic(g1.point_at(x), g2)
        grid = np.linspace(-8, 8, 401)
        x0 = grid[np.argmin([f(x) for x in grid])]
        res = minimize_scalar(f, bounds=(x0 - 0.05, x0 + 0.05), method="bounded",
                              options={"xatol": 1e-10})
        assert res.fun == pytest.approx(d, abs=1e-8)
        checked += 1


def test_crossing_agrees_with_interleaving():
    rng = np.random.default_rng(5)
    for _ in range(10_000):
        a = rng.uniform(0, 2 * math.pi, 4)
        g1, g2 = Geodesic(a[0], a[1]), Geodesic(a[2], a[3])
        # interleaving: exactly one endpoint of g2 between the endpoints of g1
        lo, hi = sorted(a[:2])
        interleave = (lo < a[2] < hi) != (lo < a[3] < hi)
        assert (inversive_product(g1, g2) < 1) == interleave
        assert g1.crosses(g2) == interleave


# -- half-planes -------------------------------------------------------------


def test_ext_angle_of_equal_halfplanes():
    h = HalfPlaneH2(Geodesic(0.2, 2.0), -1)
    assert ext_angle_halfplanes(h, h) == 0


@pytest.mark.parametrize("theta", [0.3, math.pi / 2, 2.5])
def test_ext_angle_between_diameters(theta):
    # upper half and the half to the left of the diameter at angle theta:
    # their interiors meet in a sector of opening pi - theta
    h1 = HalfPlaneH2(Geodesic(0, math.pi), 1)
    h2 = HalfPlaneH2(Geodesic(theta, theta + math.pi), 1)
    mid = 0.5 * cmath.exp(0.5j * (theta + math.pi))
    assert h1.contains(mid, strict=True) and h2.contains(mid, strict=True)
    assert ext_angle_halfplanes(h1, h2) == pytest.approx(theta, abs=1e-12)


def test_ext_angle_nested_and_disjoint():
    h = HalfPlaneH2(Geodesic(0.0, 1.0), 1)
    inner = HalfPlaneH2(Geodesic(0.2, 0.8), 1)
    assert ext_angle_halfplanes(h, inner) == 0
    far = HalfPlaneH2(Geodesic(3.0, 4.0), 1)
    assert h.disjoint_from(far)
    with pytest.raises(DisjointError):
        ext_angle_halfplanes(h, far)


def test_ext_angle_invariance():
    rng = np.random.default_rng(6)
    for _ in range(200):
        g1, g2 = geodesic_pair(rng)
        if not g1.crosses(g2):
            continue
        h1, h2 = HalfPlaneH2(g1, 1), HalfPlaneH2(g2, -1)
        m = random_disk_automorphism(rng)
        a = ext_angle_halfplanes(h1, h2)
        assert ext_angle_halfplanes(h1.transform(m), h2.transform(m)) == pytest.approx(a, abs=1e-9)


def test_halfplane_sides_partition():
    h = HalfPlaneH2(Geodesic(0.5, 2.5), 1)
    rng = np.random.default_rng(7)
    for _ in range(100):
        z = 0.9 * rng.uniform() * cmath.exp(2j * math.pi * rng.uniform())
        assert h.contains(z, strict=True) != h.complement().contains(z, strict=True)


# -- triangles with one ideal vertex -----------------------------------------


def test_ideal_triangle_examples():
    assert ideal_triangle_side(math.pi / 3, math.pi / 3) == pytest.approx(math.acosh(5 / 3), abs=1e-14)
    assert ideal_triangle_side(math.pi / 2, math.pi / 2) == pytest.approx(0, abs=1e-15)
    with pytest.raises(DomainError):
        ideal_triangle_side(2.0, 2.0)


@given(st.floats(1e-3, math.pi - 1e-3), st.floats(0.0, 1.0))
@settings(max_examples=300)
def test_ideal_triangle_identities(alpha, frac):
    beta = max(1e-3, frac * (math.pi - alpha))
    if alpha + beta >= math.pi:
        return
    sol = ideal_triangle(alpha, beta)
    assert sol.tan_product() == pytest.approx(math.exp(-sol.c), abs=1e-12)
    assert math.cosh(sol.c) == pytest.approx(sol.cosh_c(), rel=1e-10)
    assert sol.sinh_c() ** 2 + 1 == pytest.approx(sol.cosh_c() ** 2, rel=1e-10)


# -- round disks -------------------------------------------------------------


def test_round_disk_inversive_of_lines():
    for k in (0.3, 0.5, 0.8):
        lower = RoundDisk.halfplane(0, -1)
        wedge_edge = RoundDisk.halfplane(0, cmath.exp(1j * k * math.pi))
        assert lower.inversive(wedge_edge) == pytest.approx(-math.cos(k * math.pi), abs=1e-14)


def test_round_disk_transform_and_density():
    rng = np.random.default_rng(8)
    unit = RoundDisk.circle(0, 1)
    assert unit.density(0) == pytest.approx(4)
    for _ in range(50):
        m = random_moebius(rng)
        img = unit.transform(m)
        z = 0.5 * cmath.exp(2j * math.pi * rng.uniform())
        assert img.contains(m(z))
        # the area form is a conformal density of weight 2
        assert img.density(m(z)) * abs(m.derivative(z)) ** 2 == pytest.approx(unit.density(z), rel=1e-8)
        other = RoundDisk.circle(0.3, 0.9)
        assert img.inversive(other.transform(m)) == pytest.approx(unit.inversive(other), abs=1e-9)
