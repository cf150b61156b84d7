import itertools
import json
import math

import numpy as np
import pytest

from bendbound.errors import InvalidLamination, NotGoodError, NotStackedError, TangencyError
from bendbound.hyp_core import (
    Geodesic,
    HalfPlaneH2,
    disk_automorphism,
    dist_point_geodesic,
    ext_angle_halfplanes,
    geodesic_distance,
    random_disk_automorphism,
    translation,
)
from bendbound.lamination import (
    FiniteLamination,
    GoodPartitionData,
    Leaf,
    TransverseArc,
    good_partition_bound,
    norm_L,
    perpendicular_leaf,
    stacked_perpendicular,
    transverse_measure,
)
from bendbound.oracles import arc_sampler_norm, random_stacked_lamination


def real_point(s):
    """Point of the real diameter at signed distance ``s`` from 0."""
    return math.tanh(s / 2)


# -- construction ----------------------------------------------------------------


def test_perpendicular_leaf_crosses_diameter_at_s():
    for s in (-1.0, 0.0, 0.7):
        g = perpendicular_leaf(s)
        assert g.crosses(Geodesic(0, math.pi))
        assert dist_point_geodesic(real_point(s), g) < 1e-12


def test_crossing_leaves_rejected():
    with pytest.raises(InvalidLamination) as info:
        FiniteLamination([Leaf(Geodesic(0, math.pi), 1), Leaf(Geodesic(math.pi / 2, 3 * math.pi / 2), 1)])
    assert info.value.pair == (0, 1)


def test_bad_weights_and_duplicates():
    with pytest.raises(InvalidLamination):
        FiniteLamination([Leaf(Geodesic(0, 1), 0.0)])
    with pytest.raises(InvalidLamination):
        FiniteLamination([Leaf(Geodesic(0, 1), 1.0), Leaf(Geodesic(1, 0), 2.0)])


def test_not_stacked_names_leaves():
    # three leaves cutting off three separate arcs: no geodesic meets all of them
    leaves = [Leaf(Geodesic(t - 0.3, t + 0.3), 1.0) for t in (0.5, 2.5, 4.5)]
    mu = FiniteLamination(leaves)
    assert not mu.stacked
    with pytest.raises(NotStackedError) as info:
        norm_L(mu, 1.0)
    assert set(info.value.leaves) == {0, 1, 2}


def test_records_round_trip(tmp_path):
    mu = stacked_perpendicular([0.0, 0.4], [1.0, 2.5])
    path = tmp_path / "lam.json"
    path.write_text(json.dumps(mu.to_records()))
    back = FiniteLamination.load(path)
    assert back.total_weight() == 3.5
    assert norm_L(back, 1.0) == norm_L(mu, 1.0)


def test_malformed_records():
    with pytest.raises(InvalidLamination):
        FiniteLamination.from_records([{"endpoints": [0.1], "weight": 1}])
    with pytest.raises(InvalidLamination):
        FiniteLamination.from_records([{"endpoints": [0.1, 7.0], "weight": 1}])


# -- transverse measure ----------------------------------------------------------


def test_transverse_measure_examples():
    mu = stacked_perpendicular([0.0, 0.4, 0.8], [1.0, 2.0, 3.0])
    assert transverse_measure(mu, TransverseArc(real_point(-1.0), real_point(-0.5))) == 0
    single = stacked_perpendicular([0.0], [2.5])
    assert transverse_measure(single, TransverseArc(real_point(-0.1), real_point(0.1))) == 2.5
    assert transverse_measure(mu, TransverseArc(real_point(-0.2), real_point(0.6))) == 3.0


def test_open_and_closed_arcs_at_a_leaf():
    mu = stacked_perpendicular([0.0, 0.4], [1.0, 2.0])
    a, b = real_point(0.0), real_point(0.2)
    assert transverse_measure(mu, TransverseArc(a, b, open=True)) == 0
    assert transverse_measure(mu, TransverseArc(a, b, open=False)) == 1.0
    g = mu.leaves[0].geodesic
    with pytest.raises(TangencyError):
        transverse_measure(mu, TransverseArc(g.point_at(-0.5), g.point_at(0.5)))


# -- the L-norm ------------------------------------------------------------------


def test_norm_examples():
    assert norm_L(stacked_perpendicular([0.3], [2.5]), 0.01) == 2.5
    d = 0.7
    two = stacked_perpendicular([0.0, d], [1.0, 1.0])
    assert geodesic_distance(*(l.geodesic for l in two.leaves)) == pytest.approx(d, abs=1e-12)
    assert norm_L(two, d) == 1
    assert norm_L(two, d + 1e-6) == 2
    three = stacked_perpendicular([0.0, 0.4, 0.8], [1.0, 1.0, 1.0])
    assert norm_L(three, 0.9) == 3
    assert norm_L(three, 0.5) == 2


def test_norm_examples_against_sampler():
    three = stacked_perpendicular([0.0, 0.4, 0.8], [1.0, 1.0, 1.0])
    for L, expect in [(0.3, 1.0), (0.5, 2.0), (0.9, 3.0)]:
        assert arc_sampler_norm(three, L, 2000, seed=1) == expect
    two = stacked_perpendicular([0.0, 0.7], [1.0, 1.0])
    assert arc_sampler_norm(two, 0.7, 2000, seed=2) == 1
    assert arc_sampler_norm(two, 0.72, 2000, seed=2) == 2


def test_norm_monotone_and_bounded():
    rng = np.random.default_rng(0)
    for _ in range(20):
        mu = random_stacked_lamination(rng)
        vals = [norm_L(mu, L) for L in np.linspace(0.05, 4, 30)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= mu.total_weight() + 1e-12


def test_norm_moebius_invariant():
    rng = np.random.default_rng(1)
    for _ in range(20):
        mu = random_stacked_lamination(rng)
        m = random_disk_automorphism(rng)
        for L in (0.3, 1.0, 2.0):
            assert norm_L(mu.transform(m), L) == pytest.approx(norm_L(mu, L), abs=1e-10)


def test_order_follows_transversal():
    mu = stacked_perpendicular([0.8, -0.5, 0.1], [1.0, 1.0, 1.0])
    order = mu.order
    assert order in ((1, 2, 0), (0, 2, 1))


def test_norm_against_sampler_random():
    rng = np.random.default_rng(2)
    for trial in range(10):
        mu = random_stacked_lamination(rng)
        L = float(rng.uniform(0.1, 2.5))
        exact = norm_L(mu, L)
        sampled = arc_sampler_norm(mu, L, 2000, seed=trial)
        assert sampled <= exact + 1e-12
        gaps = [geodesic_distance(a.geodesic, b.geodesic) for a, b in itertools.combinations(mu.leaves, 2)]
        if all(abs(L - g) >= 1e-2 for g in gaps):
            assert sampled >= exact - 1e-3


# -- good partitions -------------------------------------------------------------


def convex_chain(n, R=1.0, spacing=0.5):
    """Half-planes containing 0, bounded by geodesics at distance ``R`` whose
    feet lie on rays spaced by ``spacing``."""
    base = Geodesic(math.pi / 2, 3 * math.pi / 2).transform(translation(R))
    hs = []
    for i in range(n):
        h = HalfPlaneH2(base.transform(disk_automorphism(i * spacing, 0)), 1)
        hs.append(h if h.contains(0) else h.complement())
    return hs


def test_good_partition_examples():
    h = HalfPlaneH2(Geodesic(0.2, 2.0), 1)
    assert good_partition_bound(GoodPartitionData([h, h, h])) == 0
    h1 = HalfPlaneH2(Geodesic(0, math.pi), 1)
    h2 = HalfPlaneH2(Geodesic(1.0, 1.0 + math.pi), 1)
    assert good_partition_bound(GoodPartitionData([h1, h2])) == pytest.approx(1.0, abs=1e-12)


def test_not_good():
    a = HalfPlaneH2(Geodesic(0.0, 1.0), 1)
    b = HalfPlaneH2(Geodesic(3.0, 4.0), 1)
    with pytest.raises(NotGoodError):
        good_partition_bound(GoodPartitionData([a, b]))


def test_refinement_never_increases_bound():
    hs = convex_chain(5, R=0.6, spacing=0.6)
    fine = good_partition_bound(GoodPartitionData(hs))
    for drop in itertools.combinations(range(1, 4), 1):
        coarse = [h for i, h in enumerate(hs) if i not in drop]
        assert fine <= good_partition_bound(GoodPartitionData(coarse)) + 1e-12
    coarse = [hs[0], hs[2], hs[4]]
    assert fine <= good_partition_bound(GoodPartitionData(coarse)) + 1e-12


def test_transverse_measure_below_good_partition():
    # leaves weighted by the exterior angles of a chain of support half-planes:
    # the measure of an arc crossing them equals the finest bound and never
    # exceeds any coarser good partition
    hs = convex_chain(5, R=0.6, spacing=0.6)
    weights = [ext_angle_halfplanes(a, b) for a, b in zip(hs, hs[1:])]
    mu = stacked_perpendicular([0.0, 0.3, 0.6, 0.9], weights)
    crossed = transverse_measure(mu, TransverseArc(real_point(-0.1), real_point(1.0)))
    assert crossed == pytest.approx(good_partition_bound(GoodPartitionData(hs)), abs=1e-12)
    for k in (1, 2, 3):
        for keep in itertools.combinations(range(1, 4), k):
            coarse = [hs[0]] + [hs[i] for i in keep] + [hs[4]]
            try:
                bound = good_partition_bound(GoodPartitionData(coarse))
            except NotGoodError:
                continue
            assert crossed <= bound + 1e-12
