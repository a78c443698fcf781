"""Numerical kernels shared by the family solvers.

Two small LP-type programs are solved exactly with a move-to-front
recursion (the scheme Welzl uses for the smallest enclosing ball):

* ``power_minimax``: minimise ``max_i ||c - a_i||^2 + w_i`` over ``c``.
  With ``w_i = h_i^2`` this is the smallest ball centred on a hyperplane
  containing points at heights ``h_i``; with ``w_i = -h_i^2`` it is the
  highest point of an intersection of balls centred on that hyperplane.
* ``halfspace_min_norm``: the minimum-norm point of ``{y : A y >= b}``, or
  ``None`` when the intersection is empty.

Both objectives are strictly convex in the free variables, so the optimum
with a given set of tight constraints is unique, which is what the
recursion relies on.
"""

from __future__ import annotations

import math

import numpy as np

from .base import ConvergenceError

_UNBOUNDED = object()


def _mtf(problem, order: list[int], n_end: int, basis: list[int], max_basis: int):
    z = problem.solve(basis)
    if z is None or len(basis) == max_basis:
        return z
    i = 0
    while i < n_end:
        j = order[i]
        if problem.violates(z, j):
            z = _mtf(problem, order, i, basis + [j], max_basis)
            if z is None:
                return None
            order.pop(i)
            order.insert(0, j)
        i += 1
    return z


class _PowerProblem:
    def __init__(self, a: np.ndarray, w: np.ndarray):
        self.a = a
        self.w = w
        self.beta = np.einsum("ij,ij->i", a, a) + w
        self.scale = 1.0 + float(np.max(np.abs(self.beta)))

    def value(self, c: np.ndarray) -> np.ndarray:
        d = c - self.a
        return np.einsum("ij,ij->i", d, d) + self.w

    def solve(self, basis):
        if not basis:
            return _UNBOUNDED
        a0 = self.a[basis[0]]
        if len(basis) == 1:
            c = a0.copy()
        else:
            M = 2.0 * (self.a[basis[1:]] - a0)
            q = self.beta[basis[1:]] - self.beta[basis[0]]
            delta, *_ = np.linalg.lstsq(M, q - M @ a0, rcond=None)
            c = a0 + delta
        vals = self.value(c)
        return c, float(np.max(vals[basis]))

    def violates(self, z, j: int) -> bool:
        if z is _UNBOUNDED:
            return True
        c, level = z
        d = c - self.a[j]
        return float(d @ d) + self.w[j] > level + 1e-13 * self.scale


def power_minimax(a, w) -> tuple[np.ndarray, float]:
    """Minimise ``F(c) = max_i ||c - a_i||^2 + w_i``; returns ``(c, F(c))``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    w = np.asarray(w, dtype=float).reshape(-1)
    n, d = a.shape
    if n == 1:
        return a[0].copy(), float(w[0])
    prob = _PowerProblem(a, w)
    # large weights first: they are the likely active constraints
    order = [int(i) for i in np.argsort(-w, kind="stable")]
    z = _mtf(prob, order, n, [], d + 1)
    c, _ = z
    return c, float(np.max(prob.value(c)))


class _HalfspaceProblem:
    def __init__(self, A: np.ndarray, b: np.ndarray):
        self.A = A
        self.b = b
        self.scale = 1.0 + float(np.max(np.abs(b)))

    def solve(self, basis):
        if not basis:
            return np.zeros(self.A.shape[1])
        A = self.A[basis]
        b = self.b[basis]
        y, *_ = np.linalg.lstsq(A, b, rcond=None)
        if np.max(np.abs(A @ y - b)) > 1e-9 * self.scale:
            return None
        return y

    def violates(self, y, j: int) -> bool:
        return float(self.A[j] @ y) < self.b[j] - 1e-12 * self.scale


def halfspace_min_norm(A, b) -> np.ndarray | None:
    """Minimum-norm point of ``{y : A y >= b}`` or ``None`` if empty."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    n, d = A.shape
    prob = _HalfspaceProblem(A, b)
    order = [int(i) for i in np.argsort(-b, kind="stable")]
    y = _mtf(prob, order, n, [], d)
    if y is None:
        return None
    # an infeasible system always leaves some constraint violated
    if np.any(A @ y < b - 1e-9 * prob.scale):
        return None
    return y


def golden_section(fun, lo: float, hi: float, xtol: float = 0.0, max_iter: int = 200) -> float:
    """Minimiser of a unimodal function on ``[lo, hi]``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    if b - a <= xtol:
        return 0.5 * (a + b)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a <= xtol or not (a < c < d < b):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    cands = [a, b, c, d]
    vals = [fun(x) for x in cands]
    return cands[int(np.argmin(vals))]


def ellipsoid_minimize(fg, center, radius: float, tol: float = 1e-10,
                       max_iter: int = 20000) -> tuple[np.ndarray, float]:
    """Minimise a convex function given a value-and-subgradient oracle.

    The minimiser must lie in the ball ``B(center, radius)``. Stops once the
    certified gap ``f_best - f_lower`` drops below ``tol``.
    """
    x = np.array(center, dtype=float)
    n = x.size
    P = np.eye(n) * radius**2
    best_x, best_f = x.copy(), math.inf
    lower = -math.inf
    for _ in range(max_iter):
        f, g = fg(x)
        if f < best_f:
            best_x, best_f = x.copy(), f
        gPg = float(g @ P @ g)
        if gPg <= 0.0:
            return x, f
        lower = max(lower, f - math.sqrt(gPg))
        if best_f - lower <= tol:
            return best_x, best_f
        if n == 1:
            # the ellipsoid is an interval: plain bisection of the cut
            r = math.sqrt(P[0, 0])
            lo_, hi_ = x[0] - r, x[0] + r
            if g[0] > 0:
                hi_ = x[0]
            else:
                lo_ = x[0]
            x = np.array([0.5 * (lo_ + hi_)])
            P = np.array([[(0.5 * (hi_ - lo_)) ** 2]])
            continue
        Pg = P @ g / math.sqrt(gPg)
        x = x - Pg / (n + 1)
        P = (n * n / (n * n - 1.0)) * (P - (2.0 / (n + 1)) * np.outer(Pg, Pg))
        P = 0.5 * (P + P.T)
    if best_f - lower <= max(tol, 1e3 * tol):
        return best_x, best_f
    raise ConvergenceError(f"ellipsoid method stalled with gap {best_f - lower:.3g}")
