"""Epigraph sponges: ``x <= y  iff  f(||y_perp - x_perp||) <= y_h - x_h``.

The positive cone is the epigraph of ``f(||.||)`` over the hyperplane
orthogonal to the distinguished axis ``h`` (the last coordinate). The only
runtime profiles are powers ``f(d) = c * d**p``; they are continuous and
increasing, so the relation is topologically closed and the remaining
condition is (square-)superadditivity, i.e. ``p >= 1`` in the plane and
``p >= 2`` from dimension three on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _solvers
from .base import (AxiomReport, DimensionMismatch, InvalidProfile, as_point,
                   as_pointset, nudge_until)

_REL = 1e-12


@dataclass(frozen=True)
class Profile:
    """Radial profile ``f(d) = c * d**p``."""

    c: float = 1.0
    p: float = 2.0
    kind: str = "power"

    def __post_init__(self):
        if self.kind != "power":
            raise InvalidProfile(f"unsupported profile kind {self.kind!r}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise InvalidProfile("profile scale c must be positive and finite")
        if not (self.p > 0 and math.isfinite(self.p)):
            raise InvalidProfile("profile exponent p must be positive and finite")

    def __call__(self, d):
        return self.c * np.power(d, self.p)

    def min_exponent(self, dim: int) -> float:
        return 2.0 if dim >= 3 else 1.0

    def dim_class(self, dim: int) -> str:
        return "Dim3Plus" if dim >= 3 else "Dim2"

    def accepts(self, dim: int) -> bool:
        """Analytic verdict: does this profile give a cc sponge in ``dim``?"""
        return dim >= 2 and self.p >= self.min_exponent(dim)

    def to_json(self) -> dict:
        return {"kind": self.kind, "c": self.c, "p": self.p}

    @classmethod
    def from_json(cls, obj: dict) -> "Profile":
        return cls(c=float(obj.get("c", 1.0)), p=float(obj["p"]), kind=obj.get("kind", "power"))


@dataclass(frozen=True)
class Frame:
    h_index: int = -1


def decompose(x, frame: Frame = Frame()) -> tuple[float, np.ndarray]:
    x = as_point(x)
    k = frame.h_index % x.size
    return float(x[k]), np.delete(x, k)


def recompose(x_h: float, x_perp, frame: Frame = Frame()) -> np.ndarray:
    x_perp = np.asarray(x_perp, dtype=float).reshape(-1)
    k = frame.h_index % (x_perp.size + 1)
    return np.insert(x_perp, k, x_h)


def leq_array(f: Profile, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.linalg.norm(y[..., :-1] - x[..., :-1], axis=-1)
    return f(d) <= y[..., -1] - x[..., -1]


def epi_leq(f: Profile, x, y) -> bool:
    x = as_point(x)
    y = as_point(y, x.size)
    if x.size < 2:
        raise DimensionMismatch("epigraph sponges need dimension >= 2")
    return bool(leq_array(f, x, y))


def height(x) -> np.ndarray:
    return np.asarray(x, dtype=float)[..., -1]


def _require_valid(f: Profile, dim: int) -> None:
    if dim < 2:
        raise DimensionMismatch("epigraph sponges need dimension >= 2")
    if not f.accepts(dim):
        raise InvalidProfile(
            f"power profile with p={f.p} does not give a sponge in dimension {dim}: "
            f"p >= {f.min_exponent(dim):g} is required")


def _le(a, b):
    return a <= b + _REL * np.maximum(1.0, np.abs(b))


def validate_profile(f: Profile, dim: int, samples: int = 10000, seed: int = 0) -> AxiomReport:
    """Check the sponge conditions on ``f`` analytically and by sampling.

    Deterministic probes (starting with ``x = y = 1``) come first, so a
    failing power profile always reports the same witness.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    rep = AxiomReport()
    rep.info.update(dim=dim, dim_class=f.dim_class(dim), analytic=f.accepts(dim))
    if dim < 2:
        rep.fail("dimension", dim)
        return rep

    rng = np.random.default_rng(seed)
    probes = np.array([[1.0, 1.0], [1.0, 2.0], [0.5, 0.25], [3.0, 0.1]])
    rand = np.concatenate([
        10.0 ** rng.uniform(-3, 3, size=(samples, 2)),
        rng.uniform(0, 10, size=(samples, 2)),
    ])
    pairs = np.concatenate([probes, rand])
    x, y = pairs[:, 0], pairs[:, 1]

    if float(f(0.0)) != 0.0:
        rep.fail("f(0)=0", 0.0)
    pos = f(np.concatenate([x, y]))
    if np.any(pos <= 0):
        rep.fail("positivity", float(np.concatenate([x, y])[np.argmax(pos <= 0)]))

    lo, hi = np.minimum(x, y), np.maximum(x, y)
    strict = lo < hi
    bad = strict & ~(f(lo) < f(hi))
    if np.any(bad):
        i = int(np.argmax(bad))
        rep.fail("increasing", (float(lo[i]), float(hi[i])))

    def _first(mask, name):
        if np.any(mask):
            i = int(np.argmax(mask))
            rep.fail(name, (float(x[i]), float(y[i])))

    _first(~_le(f(x) + f(y), f(x + y)), "superadditive")
    if dim >= 3:
        _first(~_le(f(x) + f(y), f(np.hypot(x, y))), "square-superadditive")
    _first(~_le(f(x) + f(y), np.maximum(f(x + y), f(np.abs(x - y)))), "max-superadditive")

    if not f.accepts(dim) and rep.passed:
        rep.fail("analytic", f"p >= {f.min_exponent(dim):g} required")
    return rep


def _g(f: Profile, perp: np.ndarray, hs: np.ndarray, c: np.ndarray) -> float:
    return float(np.max(hs + f(np.linalg.norm(c - perp, axis=-1))))


def lowest_right_bound_above(f: Profile, P, c) -> np.ndarray:
    """The lowest right bound of ``P`` whose perpendicular part is ``c``."""
    P = np.asarray(P, dtype=float)
    c = np.asarray(c, dtype=float)
    z = np.append(c, _g(f, P[:, :-1], P[:, -1], c))
    return nudge_until(z, lambda q: bool(np.all(leq_array(f, P, q))))


def epi_join_pair(f: Profile, x, y, tol: float = 1e-12) -> np.ndarray:
    """Join of two points by a one-dimensional search in the plane spanned by them and ``h``."""
    x = as_point(x)
    y = as_point(y, x.size)
    _require_valid(f, x.size)
    if leq_array(f, x, y):
        return y
    if leq_array(f, y, x):
        return x
    diff = y[:-1] - x[:-1]
    a = float(np.linalg.norm(diff))
    e = diff / a
    xh, yh = x[-1], y[-1]

    # the two lower envelopes cross once: x_h + f(t) increases, y_h + f(a - t) decreases
    lo, hi = 0.0, a
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= tol * a * 1e-3:
            break
        if xh + f(mid) < yh + f(a - mid):
            lo = mid
        else:
            hi = mid
    t = lo if max(xh + f(lo), yh + f(a - lo)) <= max(xh + f(hi), yh + f(a - hi)) else hi
    z = np.append(x[:-1] + t * e, max(xh + f(t), yh + f(a - t)))
    return nudge_until(z, lambda q: bool(leq_array(f, x, q) and leq_array(f, y, q)))


def _comparable_extreme(f: Profile, P: np.ndarray, side: str):
    if P.shape[0] > 64:
        return None
    M = leq_array(f, P[:, None, :], P[None, :, :])
    if side == "join":
        hit = np.all(M, axis=0)
    else:
        hit = np.all(M, axis=1)
    idx = np.flatnonzero(hit)
    return P[idx[0]].copy() if idx.size else None


def epi_join(f: Profile, P, tol: float = 1e-12) -> np.ndarray:
    """Join of a finite set: the lowest point of its set of right bounds.

    Minimises the convex function ``g(c) = max_p p_h + f(||c - p_perp||)``
    over the hyperplane; the minimiser lies in the hull of the ``p_perp``.
    """
    P = as_pointset(P)
    n, dim = P.shape
    _require_valid(f, dim)
    top = _comparable_extreme(f, P, "join")
    if top is not None:
        return top
    if n == 2:
        return epi_join_pair(f, P[0], P[1], tol)
    perp, hs = P[:, :-1], P[:, -1]
    lo, hi = perp.min(axis=0), perp.max(axis=0)
    if f.p == 2.0:
        c, _ = _solvers.power_minimax(perp, hs / f.c)
    elif dim == 2:
        g1 = lambda t: _g(f, perp, hs, np.array([t]))
        c = np.array([_solvers.golden_section(g1, lo[0], hi[0], xtol=0.0)])
    else:
        def fg(c):
            d = np.linalg.norm(c - perp, axis=-1)
            vals = hs + f(d)
            i = int(np.argmax(vals))
            if d[i] == 0.0:
                return float(vals[i]), np.zeros_like(c)
            grad = f.c * f.p * d[i] ** (f.p - 1.0) * (c - perp[i]) / d[i]
            return float(vals[i]), grad
        center = 0.5 * (lo + hi)
        radius = 0.5 * float(np.linalg.norm(hi - lo)) + 1e-12
        c, _ = _solvers.ellipsoid_minimize(fg, center, radius, tol=max(tol, 1e-15) * (1 + np.max(np.abs(hs))))
    return lowest_right_bound_above(f, P, c)


def epi_meet(f: Profile, P, tol: float = 1e-12) -> np.ndarray:
    """Meet by group inversion: ``meet(P) = -join(-P)``."""
    P = as_pointset(P)
    return -epi_join(f, -P, tol)


def epi_right_bound_witness(f: Profile, P) -> np.ndarray:
    """A point on the ``h`` axis above every element of ``P``."""
    P = as_pointset(P)
    t = float(np.max(f(np.linalg.norm(P[:, :-1], axis=-1)) + P[:, -1])) + 1.0
    w = np.zeros(P.shape[1])
    w[-1] = t
    return w


def epi_left_bound_witness(f: Profile, P) -> np.ndarray:
    P = as_pointset(P)
    return -epi_right_bound_witness(f, -P)


def certified_box(f: Profile, P, side: str) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned box that contains the join (or meet) of ``P``."""
    P = as_pointset(P)
    if side == "meet":
        lo, hi = certified_box(f, -P, "join")
        return -hi, -lo
    lo = P.min(axis=0)
    hi = P.max(axis=0)
    lo[-1] = float(P[:, -1].max())
    hi[-1] = float(epi_right_bound_witness(f, P)[-1])
    return lo, hi
