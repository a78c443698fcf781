"""The inner-product sponge on R^n: ``x <= y  iff  (x, x) <= (x, y)``.

Every nonempty set has a meet, the point of its convex hull nearest to the
origin. A set has a join only if its right bounds, an intersection of closed
halfspaces, are nonempty; the join is then the nearest point of that
intersection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _solvers
from .base import ConvergenceError, DimensionMismatch, as_point, as_pointset


def leq_array(x, y) -> np.ndarray:
    """Vectorised relation; broadcasts over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.einsum("...i,...i->...", x, x) <= np.einsum("...i,...i->...", x, y)


def ip_leq(x, y) -> bool:
    x = as_point(x)
    y = as_point(y, x.size)
    return bool(x @ x <= x @ y)


def ip_left_cone_contains(x, y) -> bool:
    """Is ``y`` in the ball centred at ``x/2`` with radius ``||x||/2``?"""
    x = as_point(x)
    y = as_point(y, x.size)
    # squared form of ||y - x/2|| <= ||x||/2, which is exactly (y,y) <= (y,x)
    d = y - 0.5 * x
    return bool(d @ d <= 0.25 * (x @ x))


def height(x) -> np.ndarray:
    """Strictly increasing along the relation (norm growth)."""
    return np.linalg.norm(np.asarray(x, dtype=float), axis=-1)


@dataclass(frozen=True)
class HalfspaceSystem:
    """Right bounds of a set: ``{y : (p, y) >= ||p||^2}`` for nonzero ``p``."""

    normals: np.ndarray
    offsets: np.ndarray

    @classmethod
    def from_points(cls, P) -> "HalfspaceSystem":
        P = as_pointset(P)
        keep = np.any(P != 0.0, axis=1)
        normals = P[keep]
        return cls(normals, np.einsum("ij,ij->i", normals, normals))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def contains(self, y) -> bool:
        return bool(np.all(self.normals @ np.asarray(y, dtype=float) >= self.offsets))


@dataclass
class MinNormResult:
    point: np.ndarray
    weights: np.ndarray
    support: tuple[int, ...]
    iterations: int


def min_norm_point(P, tol: float = 1e-12, max_iter: int | None = None) -> MinNormResult:
    """Wolfe's method for the point of ``conv(P)`` closest to the origin.

    ``weights`` are convex coefficients over the rows of ``P`` (nonzero only
    on ``support``) reproducing ``point``.
    """
    P = as_pointset(P)
    n, d = P.shape
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter is None:
        max_iter = 10 * n * d
    sq = np.einsum("ij,ij->i", P, P)
    scale = max(float(sq.max()), 1e-300)
    S = [int(np.argmin(sq))]
    lam = np.array([1.0])
    x = P[S[0]].copy()
    eps = 1e-14

    for it in range(max_iter + 1):
        dots = P @ x
        j = int(np.argmin(dots))
        if x @ x - dots[j] <= tol * scale or j in S:
            break
        if it == max_iter:
            raise ConvergenceError("min-norm point did not converge; tolerance too tight?")
        S.append(j)
        lam = np.append(lam, 0.0)
        for _ in range(4 * n + 8):
            Q = P[S]
            k = len(S)
            K = np.zeros((k + 1, k + 1))
            K[:k, :k] = Q @ Q.T
            K[:k, k] = 1.0
            K[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            mu = np.linalg.lstsq(K, rhs, rcond=None)[0][:k]
            if np.all(mu > eps):
                lam = mu
                break
            mask = mu <= eps
            theta = float(np.min(lam[mask] / (lam[mask] - mu[mask])))
            lam = lam + theta * (mu - lam)
            keep = lam > eps
            S = [s for s, kp in zip(S, keep) if kp]
            lam = lam[keep]
            lam = lam / lam.sum()
        else:
            raise ConvergenceError("min-norm point minor cycle did not terminate")
        x = lam @ P[S]

    if x @ x <= (1e-15) ** 2 * scale:
        x = np.zeros(d)
    weights = np.zeros(n)
    weights[S] = lam
    return MinNormResult(x, weights, tuple(S), it)


def _shrink_to_left_bound(z: np.ndarray, P: np.ndarray) -> np.ndarray:
    zz = z @ z
    if zz == 0.0:
        return z
    s = min(1.0, float(np.min(P @ z)) / zz)
    z = z * s
    factor = 1.0
    for _ in range(60):
        if np.all(leq_array(z, P)):
            return z
        factor *= 2.0
        z = z * (1.0 - factor * np.finfo(float).eps)
    raise ConvergenceError("meet could not be made a left bound")


def ip_meet(P, tol: float = 1e-12) -> np.ndarray:
    """Meet of a nonempty set; always exists (the origin is the least element)."""
    P = as_pointset(P)
    z = min_norm_point(P, tol=tol).point
    return _shrink_to_left_bound(z, P)


def _grow_to_right_bound(y: np.ndarray, P: np.ndarray) -> np.ndarray:
    sys = HalfspaceSystem.from_points(P)
    if sys.normals.shape[0] == 0:
        return y
    proj = sys.normals @ y
    if np.all(proj > 0):
        y = y * max(1.0, float(np.max(sys.offsets / proj)))
    factor = 1.0
    for _ in range(60):
        if np.all(leq_array(P, y)):
            return y
        factor *= 2.0
        y = y * (1.0 + factor * np.finfo(float).eps)
    raise ConvergenceError("join could not be made a right bound")


def dykstra_halfspaces(A, b, tol: float = 1e-12, max_iter: int = 100000,
                       radius: float | None = None) -> np.ndarray | None:
    """Project the origin onto ``{y : A y >= b}`` by Dykstra's cyclic projections.

    Returns ``None`` when the iterates leave the ball of the given radius,
    which is taken as evidence that the intersection is empty.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, d = A.shape
    norms2 = np.einsum("ij,ij->i", A, A)
    if radius is None:
        r = np.sqrt(norms2)
        radius = 2.0 * float(norms2.max()) / float(r.min())
    x = np.zeros(d)
    incr = np.zeros((m, d))
    for _ in range(max_iter):
        x_prev = x
        for i in range(m):
            y = x + incr[i]
            viol = b[i] - A[i] @ y
            z = y + (max(viol, 0.0) / norms2[i]) * A[i]
            incr[i] = y - z
            x = z
        if np.linalg.norm(x) > radius:
            return None
        if np.linalg.norm(x - x_prev) < tol:
            break
    else:
        raise ConvergenceError("Dykstra projections did not converge")
    if np.any(A @ x < b - 1e-6 * (1.0 + np.abs(b))):
        return None
    return x


def ip_join(P, tol: float = 1e-12, method: str = "exact") -> np.ndarray | None:
    """Join of ``P`` or ``None`` when ``P`` has no right bound.

    ``method="exact"`` solves the min-norm problem over the halfspace
    intersection combinatorially; ``method="dykstra"`` uses cyclic
    projections (slower, kept as an independent route).
    """
    P = as_pointset(P)
    if method not in ("exact", "dykstra"):
        raise ValueError(f"unknown method {method!r}")
    if P.shape[0] <= 64:
        top = np.flatnonzero(np.all(leq_array(P[:, None, :], P[None, :, :]), axis=0))
        if top.size:
            return P[top[0]].copy()
    normals = P[np.any(P != 0.0, axis=1)]
    if normals.shape[0] == 0:
        return np.zeros(P.shape[1])
    # (p, y) >= |p|^2 as (p/|p|, y) >= |p|, with row norms computed without underflow
    m = np.max(np.abs(normals), axis=1)
    u = normals / m[:, None]
    nu = np.linalg.norm(u, axis=1)
    A, b = u / nu[:, None], m * nu
    # the relation is scale invariant; solve at unit scale
    scale = float(b.max())
    if method == "exact":
        y = _solvers.halfspace_min_norm(A, b / scale)
    else:
        y = dykstra_halfspaces(A, b / scale, tol=tol)
    if y is None:
        return None
    return _grow_to_right_bound(y * scale, P)


def right_cones_disjoint(x, y) -> bool:
    """``R(x)`` and ``R(y)`` are disjoint iff ``x != 0`` and ``y`` is a negative multiple of ``x``."""
    x = as_point(x)
    y = as_point(y, x.size)
    if not np.any(x) or not np.any(y):
        return False
    if x.size != y.size:
        raise DimensionMismatch("dimension mismatch")
    cross = np.outer(x, y) - np.outer(y, x)
    return bool(np.allclose(cross, 0.0, atol=1e-12 * (x @ x + y @ y)) and x @ y < 0)
