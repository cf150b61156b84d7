"""Closed-form bending bounds and their thresholds.

Every bound returns a :class:`BoundEvaluation` carrying the branch that
produced the value.  Domain boundaries are inclusive, with a slack of
``THRESHOLD_TOL`` to absorb rounding before a :class:`DomainError` is
raised.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

from .errors import DomainError

THRESHOLD_TOL = 1e-13
CLAMP_TOL = 1e-12
EPS = sys.float_info.epsilon

FIRST = "first-branch"
SECOND = "second-branch"
ENDPOINT = "endpoint"


@dataclass(frozen=True)
class BoundEvaluation:
    value: float
    branch: str
    inputs: dict = field(default_factory=dict)

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class ReferenceConstants:
    nehari_univalent: float = 0.5
    nehari_necessary: float = 1.5
    bcy_norm1_bound: float = 4.238
    emm_constant: float = 0.73
    g_at_1: float = 0.948


REFERENCE = ReferenceConstants()


def sech(x: float) -> float:
    return 1.0 / math.cosh(x)


def _acos(c: float) -> float:
    if c < -1.0 - CLAMP_TOL or c > 1.0 + CLAMP_TOL:
        raise DomainError(f"cosine argument {c} outside [-1, 1]")
    return math.acos(max(-1.0, min(1.0, c)))


def _branch(value: float, breakpoint: float) -> str:
    if abs(value - breakpoint) <= THRESHOLD_TOL * max(1.0, abs(breakpoint)):
        return ENDPOINT
    return FIRST if value < breakpoint else SECOND


def _positive_L(L: float) -> None:
    if not L > 0:
        raise DomainError(f"L={L} must be positive", threshold="L > 0", limit=0.0)


def f_bcy(L: float) -> float:
    """``2 acos(-sinh(L/2))`` for ``0 < L <= 2 asinh(1)``."""
    lmax = 2 * math.asinh(1.0)
    if not 0 < L <= lmax + THRESHOLD_TOL:
        raise DomainError(f"L={L} outside (0, 2 asinh(1)]", threshold="2*asinh(1)", limit=lmax)
    return 2 * math.acos(max(-1.0, -math.sinh(L / 2)))


# ---------------------------------------------------------------------------
# thickness to bending
# ---------------------------------------------------------------------------


def c_L_first(L: float, r: float) -> float:
    return 2 * math.atan(math.exp(L) * math.sinh(r))


def c_L_second(L: float, r: float) -> float:
    th = math.tanh(r)
    return _acos(1 - 2 * th * th * (1 + math.sinh(L) / math.sinh(r)))


def c_L_breakpoint(L: float) -> float:
    """The ``r`` where ``sinh r = e^{-L}``."""
    return math.asinh(math.exp(-L))


def c_L_rmax(L: float) -> float:
    """Largest admissible ``r``: ``sinh r = 1/sinh L``."""
    return math.asinh(1 / math.sinh(L))


def c_L(L: float, r: float) -> BoundEvaluation:
    """Bound on bending over arcs of length ``< L`` for hull thickness ``r``."""
    _positive_L(L)
    if r < 0:
        raise DomainError(f"r={r} must be nonnegative", threshold="r >= 0", limit=0.0)
    prod = math.sinh(L) * math.sinh(r)
    if prod > 1 + THRESHOLD_TOL:
        raise DomainError(
            f"sinh(L)*sinh(r)={prod} exceeds 1 (r must be <= asinh(1/sinh(L)) = {c_L_rmax(L)})",
            threshold="sinh(L)*sinh(r) <= 1",
            limit=c_L_rmax(L),
        )
    inputs = {"L": L, "r": r}
    rb = c_L_breakpoint(L)
    branch = _branch(r, rb)
    if math.exp(L) * math.sinh(r) <= 1:
        return BoundEvaluation(c_L_first(L, r), branch, inputs)
    return BoundEvaluation(c_L_second(L, r), branch, inputs)


def r_of_s(s: float) -> float:
    """``1/2 log((1+2s)/(1-2s))``, the Epstein thickness for sup norm ``s``."""
    if not 0 <= s < 0.5:
        raise DomainError(f"s={s} outside [0, 1/2)", threshold="s < 1/2", limit=0.5)
    return 0.5 * math.log1p(4 * s / (1 - 2 * s))


# ---------------------------------------------------------------------------
# Schwarzian to bending
# ---------------------------------------------------------------------------


def b_L_xmax(L: float) -> float:
    return 0.5 * sech(L)


def b_L_breakpoint(L: float) -> float:
    return 1.0 / (2.0 * math.sqrt(1.0 + math.exp(2 * L)))


def b_L_first(L: float, x: float) -> float:
    return 2 * math.atan(2 * math.exp(L) * x / math.sqrt(1 - 4 * x * x))


def b_L_second(L: float, x: float) -> float:
    # acos(1 - 8x^2 - 4 sinh(L) x sqrt(1-4x^2)) in half-angle form; with
    # sin u = 2x the factor 1 - 2x cosh(L) carries the zero at the endpoint
    su, cu = 2 * x, math.sqrt(max(0.0, 1 - 4 * x * x))
    gap = 1 - su * math.cosh(L)
    if gap < -CLAMP_TOL:
        raise DomainError(f"x={x} exceeds sech(L)/2 for L={L}", threshold="sech(L)/2")
    if gap <= 4 * EPS:
        return math.pi
    minus = su * (su + math.sinh(L) * cu)
    plus = cu * gap * (2 - gap) / (cu + math.sinh(L) * su)
    return 2 * math.atan2(math.sqrt(minus), math.sqrt(plus))


def b_L(L: float, x: float) -> BoundEvaluation:
    """Bending bound for Schwarzian sup norm ``x`` on ``[0, sech(L)/2]``."""
    _positive_L(L)
    xmax = b_L_xmax(L)
    if x < 0:
        raise DomainError(f"x={x} must be nonnegative", threshold="x >= 0", limit=0.0)
    if x > xmax + THRESHOLD_TOL:
        raise DomainError(
            f"x={x} exceeds sech(L)/2 = {xmax} for L={L}", threshold="sech(L)/2", limit=xmax
        )
    x = min(x, xmax)
    inputs = {"L": L, "x": x}
    xb = b_L_breakpoint(L)
    branch = _branch(x, xb)
    if x <= xb:
        return BoundEvaluation(b_L_first(L, x), branch, inputs)
    return BoundEvaluation(b_L_second(L, x), branch, inputs)


def b_L_small_x_ratio(L: float, x: float) -> float:
    """``b_L(L, x) / (4 e^L x)``, which tends to 1 as ``x -> 0``."""
    if not 0 < x <= min(1e-3, b_L_xmax(L)):
        raise DomainError(f"x={x} outside (0, min(1e-3, sech(L)/2)]", threshold="x <= 1e-3")
    return b_L(L, x).value / (4 * math.exp(L) * x)


def ahlfors_weill(s: float) -> float:
    """Teichmueller distance bound ``atanh(2s)`` for Schwarzian norm ``s``."""
    if not 0 <= s < 0.5:
        raise DomainError(f"s={s} outside [0, 1/2)", threshold="s < 1/2", limit=0.5)
    return math.atanh(2 * s)


def bending_from_teich(L: float, dT: float) -> BoundEvaluation:
    """``b_L(L, 3/2 dT)`` for Teichmueller distance ``dT <= sech(L)/3``."""
    _positive_L(L)
    dmax = sech(L) / 3
    if dT < 0:
        raise DomainError(f"dT={dT} must be nonnegative", threshold="dT >= 0", limit=0.0)
    if dT > dmax + THRESHOLD_TOL:
        raise DomainError(
            f"dT={dT} exceeds sech(L)/3 = {dmax} for L={L}", threshold="sech(L)/3", limit=dmax
        )
    # 1.5 * (sech(L)/3) can round below sech(L)/2, where the slope is infinite
    x = b_L_xmax(L) if dT >= dmax else 1.5 * dT
    ev = b_L(L, x)
    return BoundEvaluation(ev.value, ev.branch, {"L": L, "dT": dT})
