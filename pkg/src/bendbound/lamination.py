"""Finite measured laminations of the hyperbolic plane.

Only *stacked* laminations are supported: finitely many disjoint weighted
geodesics that are all crossed by one geodesic transversal.  For these the
sup defining ``||mu||_L`` is attained by windows of consecutive leaves.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DisjointError,
    InvalidLamination,
    NotGoodError,
    NotStackedError,
    TangencyError,
)
from .hyp_core import (
    TWO_PI,
    Geodesic,
    MoebiusMap,
    check_point,
    dist_h2,
    ext_angle_halfplanes,
    geodesic_distance,
    ideal_vector,
    lorentz_cross,
    minkowski,
    to_hyperboloid,
    translation,
    disk_automorphism,
)

WINDOW_SLACK = 1e-12
ORDER_TOL = 1e-12
ON_LEAF_TOL = 1e-12


@dataclass(frozen=True)
class Leaf:
    geodesic: Geodesic
    weight: float


@dataclass(frozen=True)
class TransverseArc:
    """Geodesic segment between two interior points."""

    start: complex
    end: complex
    open: bool = True

    def __post_init__(self):
        check_point(self.start)
        check_point(self.end)
        if self.start == self.end:
            raise ValueError("arc must have positive length")

    def length(self) -> float:
        return dist_h2(self.start, self.end)


@dataclass(frozen=True)
class GoodPartitionData:
    """Support half-planes met in order along an arc."""

    halfplanes: tuple

    def __post_init__(self):
        object.__setattr__(self, "halfplanes", tuple(self.halfplanes))


class FiniteLamination:
    """Pairwise disjoint weighted geodesics."""

    def __init__(self, leaves: Sequence[Leaf]):
        leaves = tuple(leaves)
        for i, leaf in enumerate(leaves):
            if not leaf.weight > 0:
                raise InvalidLamination(f"leaf {i} has non-positive weight {leaf.weight}", (i,))
        for i, j in itertools.combinations(range(len(leaves)), 2):
            gi, gj = leaves[i].geodesic, leaves[j].geodesic
            if abs(gi.p - gj.p) < ORDER_TOL and abs(gi.q - gj.q) < ORDER_TOL:
                raise InvalidLamination(f"leaves {i} and {j} coincide", (i, j))
            if gi.crosses(gj):
                raise InvalidLamination(f"leaves {i} and {j} cross", (i, j))
        self.leaves = leaves

    @classmethod
    def from_records(cls, records: Sequence[dict]) -> FiniteLamination:
        leaves = []
        for i, rec in enumerate(records):
            try:
                t1, t2 = (float(t) for t in rec["endpoints"])
                w = float(rec["weight"])
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidLamination(f"leaf {i} is malformed: {exc}", (i,)) from None
            for t in (t1, t2):
                if not 0 <= t < TWO_PI:
                    raise InvalidLamination(f"leaf {i} endpoint {t} outside [0, 2pi)", (i,))
            try:
                g = Geodesic(t1, t2)
            except ValueError as exc:
                raise InvalidLamination(f"leaf {i}: {exc}", (i,)) from None
            leaves.append(Leaf(g, w))
        return cls(leaves)

    @classmethod
    def load(cls, path) -> FiniteLamination:
        data = json.loads(Path(path).read_text())
        if not isinstance(data, dict) or not isinstance(data.get("leaves"), list):
            raise InvalidLamination('expected a record with a "leaves" array')
        return cls.from_records(data["leaves"])

    def to_records(self) -> dict:
        return {"leaves": [{"endpoints": [l.geodesic.p, l.geodesic.q], "weight": l.weight}
                           for l in self.leaves]}

    def __len__(self):
        return len(self.leaves)

    def total_weight(self) -> float:
        return sum(l.weight for l in self.leaves)

    def transform(self, m: MoebiusMap) -> FiniteLamination:
        return FiniteLamination([Leaf(l.geodesic.transform(m), l.weight) for l in self.leaves])

    def normals(self) -> np.ndarray:
        return np.array([l.geodesic.normal() for l in self.leaves]).reshape(-1, 3)

    # -- stacking -----------------------------------------------------------

    @cached_property
    def transversal(self) -> Geodesic | None:
        """A geodesic crossing every leaf, or ``None``."""
        if not self.leaves:
            return None
        ends = sorted({x for l in self.leaves for x in (l.geodesic.p, l.geodesic.q)})
        mids = [0.5 * (a + b) for a, b in zip(ends, ends[1:])]
        mids.append((0.5 * (ends[-1] + ends[0] + TWO_PI)) % TWO_PI)
        for x, y in itertools.combinations(mids, 2):
            t = Geodesic(x, y)
            if all(t.crosses(l.geodesic) for l in self.leaves):
                return t
        return None

    @property
    def stacked(self) -> bool:
        return self.transversal is not None

    def _witness(self):
        for k in (2, 3):
            for idx in itertools.combinations(range(len(self.leaves)), k):
                if not FiniteLamination([self.leaves[i] for i in idx]).stacked:
                    return idx
        return tuple(range(len(self.leaves)))

    @cached_property
    def order(self) -> tuple:
        """Leaf indices in the order the transversal meets them."""
        t = self.transversal
        if t is None:
            idx = self._witness()
            raise NotStackedError(f"no geodesic crosses all of leaves {list(idx)}", idx)
        nt = t.normal()
        start = ideal_vector(t.p)
        params = []
        for leaf in self.leaves:
            X = lorentz_cross(nt, leaf.geodesic.normal())
            X = X / math.sqrt(-minkowski(X, X))
            if X[0] < 0:
                X = -X
            # Busemann coordinate along the transversal, increasing away from p
            params.append(math.log(-minkowski(X, start)))
        order = sorted(range(len(params)), key=params.__getitem__)
        for a, b in zip(order, order[1:]):
            if abs(params[a] - params[b]) < ORDER_TOL:
                raise InvalidLamination(f"leaves {a} and {b} meet the transversal at the same point", (a, b))
        return tuple(order)


def _side(X, N) -> float:
    return float(minkowski(X, N))


def transverse_measure(mu: FiniteLamination, arc: TransverseArc) -> float:
    """Total weight of leaves separating the arc's endpoints.

    An endpoint lying on a leaf counts as a crossing only for closed arcs.
    """
    A, B = to_hyperboloid(arc.start), to_hyperboloid(arc.end)
    total = 0.0
    for i, leaf in enumerate(mu.leaves):
        N = leaf.geodesic.normal()
        sa, sb = _side(A, N), _side(B, N)
        on_a, on_b = abs(sa) < ON_LEAF_TOL, abs(sb) < ON_LEAF_TOL
        if on_a and on_b:
            raise TangencyError(f"arc lies along leaf {i}")
        if on_a or on_b:
            if not arc.open:
                total += leaf.weight
            continue
        if sa * sb < 0:
            total += leaf.weight
    return total


def norm_L(mu: FiniteLamination, L: float) -> float:
    """``sup i(mu, alpha)`` over open transverse arcs of length ``< L``.

    Windows ``i..j`` of consecutive leaves are admissible when the distance
    between the extreme leaves is ``< L`` (with ``WINDOW_SLACK`` towards
    exclusion); single leaves always are.
    """
    if not L > 0:
        raise ValueError("L must be positive")
    if not mu.leaves:
        return 0.0
    order = mu.order
    geo = [mu.leaves[i].geodesic for i in order]
    w = [mu.leaves[i].weight for i in order]
    best = 0.0
    n = len(order)
    for i in range(n):
        acc = 0.0
        for j in range(i, n):
            if j > i and not geodesic_distance(geo[i], geo[j]) < L - WINDOW_SLACK:
                break
            acc += w[j]
            best = max(best, acc)
    return best


def good_partition_bound(data: GoodPartitionData) -> float:
    """Sum of exterior angles between consecutive support half-planes."""
    hs = data.halfplanes
    total = 0.0
    for k, (h1, h2) in enumerate(zip(hs, hs[1:])):
        try:
            total += ext_angle_halfplanes(h1, h2)
        except DisjointError:
            raise NotGoodError(f"half-planes {k} and {k + 1} do not intersect") from None
    return total


def perpendicular_leaf(s: float, angle: float = 0.0) -> Geodesic:
    """Geodesic perpendicular to the diameter at angle ``angle``, crossing it at signed distance ``s``."""
    g = Geodesic(math.pi / 2, 3 * math.pi / 2).transform(translation(s))
    return g.transform(disk_automorphism(angle, 0)) if angle else g


def stacked_perpendicular(positions: Sequence[float], weights: Sequence[float]) -> FiniteLamination:
    """Leaves perpendicular to the real diameter at the given signed distances."""
    return FiniteLamination([Leaf(perpendicular_leaf(s), w) for s, w in zip(positions, weights)])
