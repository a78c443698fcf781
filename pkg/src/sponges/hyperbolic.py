"""The hyperbolic sponge on the Poincare half-space ``{x : x_h > 0}``.

``x <= y  iff  ||x - y_perp|| <= y_h``: the left cone of ``y`` is the half
ball of radius ``y_h`` centred at its foot point on the base hyperplane.
Joins are smallest balls centred on the base hyperplane containing the set;
meets are highest points of intersections of such half balls.
"""

from __future__ import annotations

import math

import numpy as np

from . import _solvers
from .base import (BoundaryAmbiguous, DimensionMismatch, DomainError, NoLeftBound,
                   as_point, as_pointset, nudge_until)

H_MIN = 1e-12


def _check(P: np.ndarray) -> None:
    if P.shape[-1] < 2:
        raise DimensionMismatch("the half-space model needs dimension >= 2")
    if np.any(P[..., -1] <= H_MIN):
        raise DomainError("hyperbolic points need a positive last coordinate")


def _hpoint(x, dim=None) -> np.ndarray:
    x = as_point(x, dim)
    _check(x)
    return x


def _foot_distance(x, c) -> np.ndarray:
    """``||x - (c, 0)||`` for points ``x`` and base points ``c``."""
    x = np.asarray(x, dtype=float)
    perp = x[..., :-1] - c
    return np.sqrt(np.einsum("...i,...i->...", perp, perp) + x[..., -1] ** 2)


def leq_array(x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return _foot_distance(x, y[..., :-1]) <= y[..., -1]


def hyp_leq(x, y) -> bool:
    x = _hpoint(x)
    y = _hpoint(y, x.size)
    return bool(leq_array(x, y))


def d_hyp(x, y) -> float:
    x = _hpoint(x)
    y = _hpoint(y, x.size)
    diff = x - y
    return float(np.arccosh(1.0 + (diff @ diff) / (2.0 * x[-1] * y[-1])))


def h_height(x) -> float:
    x = _hpoint(x)
    return math.log(x[-1])


def height(x) -> np.ndarray:
    return np.log(np.asarray(x, dtype=float)[..., -1])


def hyp_discriminator_bound(delta: float) -> float:
    """Largest distance between ``x <= y`` whose log-heights differ by less than ``delta``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    return float(np.arccosh(math.exp(delta)))


def hyp_pair_left_bounded(x, y) -> bool:
    x = _hpoint(x)
    y = _hpoint(y, x.size)
    return bool(np.linalg.norm(x[:-1] - y[:-1]) < x[-1] + y[-1])


def left_cones_disjoint(x, y) -> bool:
    return not hyp_pair_left_bounded(x, y)


def _nudge_down(z: np.ndarray, P: np.ndarray) -> np.ndarray:
    z = nudge_until(z, lambda q: bool(np.all(leq_array(q, P))), direction=-1.0)
    if z[-1] <= H_MIN:
        raise BoundaryAmbiguous("meet lies on the base hyperplane")
    return z


def hyp_meet_pair(x, y) -> np.ndarray:
    """Closed-form meet of a left-bounded pair (intersection of two circles)."""
    x = _hpoint(x)
    y = _hpoint(y, x.size)
    if leq_array(x, y):
        return x
    if leq_array(y, x):
        return y
    diff = y[:-1] - x[:-1]
    a = float(np.linalg.norm(diff))
    if not a < x[-1] + y[-1]:
        raise NoLeftBound(f"pair {x.tolist()}, {y.tolist()} has no left bound")
    e = diff / a
    b = (a * a + x[-1] ** 2 - y[-1] ** 2) / (2.0 * a)
    zh2 = x[-1] ** 2 - b * b
    if zh2 <= 0:
        raise BoundaryAmbiguous("pair meet lies on the base hyperplane")
    z = np.append(x[:-1] + b * e, math.sqrt(zh2))
    return _nudge_down(z, np.stack([x, y]))


def _comparable_extreme(P: np.ndarray, side: str):
    if P.shape[0] > 64:
        return None
    M = leq_array(P[:, None, :], P[None, :, :])
    hit = np.all(M, axis=0) if side == "join" else np.all(M, axis=1)
    idx = np.flatnonzero(hit)
    return P[idx[0]].copy() if idx.size else None


def hyp_meet(P, tol: float = 1e-12) -> np.ndarray | None:
    """Meet of a finite set, or ``None`` when it has no left bound.

    Maximises ``q(c) = min_p p_h^2 - ||c - p_perp||^2`` over the base
    hyperplane; the meet is ``(c*, sqrt(q(c*)))`` when the optimum is
    positive. Optima within ``tol`` (relative) of zero are reported as
    ``BoundaryAmbiguous``.
    """
    P = as_pointset(P)
    _check(P)
    low = _comparable_extreme(P, "meet")
    if low is not None:
        return low
    if P.shape[0] == 2:
        try:
            return hyp_meet_pair(P[0], P[1])
        except NoLeftBound:
            return None
    perp, hs = P[:, :-1], P[:, -1]
    c, F = _solvers.power_minimax(perp, -(hs**2))
    q = -F
    if q <= 0.0:
        return None
    if q <= tol * float(np.max(hs**2)):
        raise BoundaryAmbiguous(f"left-boundedness undecided (optimum {q:.3g})")
    return _nudge_down(np.append(c, math.sqrt(q)), P)


def lowest_right_bound_above(P, c) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    c = np.asarray(c, dtype=float)
    z = np.append(c, float(np.max(_foot_distance(P, c))))
    return nudge_until(z, lambda q: bool(np.all(leq_array(P, q))))


def hyp_join(P, tol: float = 1e-12) -> np.ndarray:
    """Join of a finite set: smallest ball centred on the base hyperplane containing it."""
    P = as_pointset(P)
    _check(P)
    top = _comparable_extreme(P, "join")
    if top is not None:
        return top
    perp, hs = P[:, :-1], P[:, -1]
    c, _ = _solvers.power_minimax(perp, hs**2)
    return lowest_right_bound_above(P, c)


def right_bound_witness(P) -> np.ndarray:
    """``lambda * h`` with ``lambda >= ||p||`` for all ``p``."""
    P = as_pointset(P)
    w = np.zeros(P.shape[1])
    w[-1] = float(np.max(np.linalg.norm(P, axis=-1)))
    return nudge_until(w, lambda q: bool(np.all(leq_array(P, q))))


def certified_box(P, side: str) -> tuple[np.ndarray, np.ndarray]:
    P = as_pointset(P)
    lo = P.min(axis=0)
    hi = P.max(axis=0)
    if side == "join":
        mid = 0.5 * (lo[:-1] + hi[:-1])
        lo[-1] = float(P[:, -1].max())
        hi[-1] = float(np.max(_foot_distance(P, mid)))
    else:
        lo[-1] = 0.0
        hi[-1] = float(P[:, -1].min())
    return lo, hi
