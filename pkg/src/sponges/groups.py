"""Oriented additive groups given by positive cones, and their quotients.

The concrete sponges here are the line ``R`` with the half-open cone
``[0, kappa)`` and its quotient by ``L Z`` (angles). Condition checkers work
on sampled data: cone axioms for arbitrary predicates, the refinement
condition, and the two quotient conditions for box cones in ``R^n`` modulo
closed subgroups generated by lattice and line directions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .base import AxiomReport, InvalidCone, as_pointset


@dataclass(frozen=True)
class ConeSpec1D:
    """Cone ``[0, kappa)`` on the line, optionally taken modulo ``period``.

    ``closed=True`` selects ``[0, kappa]`` instead; it exists to exhibit the
    antipodal failure of antisymmetry on the circle and is never valid
    together with ``2 kappa = period``.
    """

    kappa: float
    period: float | None = None
    closed: bool = False

    def __post_init__(self):
        if not self.kappa > 0:
            raise InvalidCone("kappa must be positive")
        if self.period is not None and not (self.period > 0 and math.isfinite(self.period)):
            raise InvalidCone("period must be positive and finite")
        if self.period is not None and not math.isfinite(self.kappa):
            raise InvalidCone("a periodic cone needs finite kappa")

    def contains(self, t):
        t = np.asarray(t, dtype=float)
        upper = t <= self.kappa if self.closed else t < self.kappa
        return (t >= 0.0) & upper

    @property
    def is_valid(self) -> bool:
        if self.period is None:
            return True
        return 2 * self.kappa < self.period if self.closed else 2 * self.kappa <= self.period

    def require_valid(self) -> None:
        if not self.is_valid:
            raise InvalidCone(
                f"cone of length {self.kappa} does not give an orientation modulo {self.period}")

    def to_json(self) -> dict:
        d = {"kappa": self.kappa, "period": self.period}
        if self.closed:
            d["closed"] = True
        return d


def canonical_angle(a, period: float):
    """Representative of ``a + period*Z`` in ``[0, period)``."""
    r = np.mod(np.asarray(a, dtype=float), period)
    r = np.where(r >= period, 0.0, r)
    return r + 0.0


def _diff(spec: ConeSpec1D, x, y):
    d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    if spec.period is not None:
        d = canonical_angle(d, spec.period)
    return d


def leq_array(spec: ConeSpec1D, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if spec.period is not None:
        x = canonical_angle(x, spec.period)
        y = canonical_angle(y, spec.period)
    return spec.contains(_diff(spec, x, y))


def line_leq(spec: ConeSpec1D, x: float, y: float) -> bool:
    """``x <= y < x + kappa`` (as ``y - x`` in the cone)."""
    return bool(spec.contains(float(y) - float(x)))


def angle_leq(spec: ConeSpec1D, a: float, b: float) -> bool:
    if spec.period is None:
        raise InvalidCone("angle_leq needs a period")
    return bool(leq_array(spec, a, b))


def _extreme(spec: ConeSpec1D, P, side: str):
    P = as_pointset(P, 1)[:, 0]
    spec.require_valid()
    if spec.period is not None:
        P = canonical_angle(P, spec.period)
    M = leq_array(spec, P[:, None], P[None, :])
    hit = np.all(M, axis=1) if side == "meet" else np.all(M, axis=0)
    idx = np.flatnonzero(hit)
    return float(P[idx[0]]) if idx.size else None


def angle_meet(spec: ConeSpec1D, P) -> float | None:
    """The element of ``P`` below all others, or ``None`` if ``P`` has no left bound."""
    return _extreme(spec, P, "meet")


def angle_join(spec: ConeSpec1D, P) -> float | None:
    return _extreme(spec, P, "join")


# --------------------------------------------------------------------------
# cone axioms and refinement


def cone_axioms_check(C: Callable, samples: int = 2000, dim: int = 1, scale: float = 2.0,
                      seed: int = 0) -> AxiomReport:
    """Check ``C`` and ``-C`` meet only in ``0`` on samples; report transitivity.

    ``C`` maps an ``(n, dim)`` array to a boolean array. ``info['transitive']``
    records whether ``C + C`` stayed inside ``C`` on the sampled members.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    grid = np.linspace(-scale, scale, 33)
    probes = np.array(list(itertools.product(grid, repeat=dim))) if dim <= 2 else np.empty((0, dim))
    X = np.concatenate([probes, rng.uniform(-scale, scale, size=(samples, dim))])
    rep = AxiomReport()
    zero = np.zeros((1, dim))
    if not bool(np.asarray(C(zero))[0]):
        rep.fail("identity in cone", zero[0].tolist())
    inC = np.asarray(C(X), dtype=bool)
    both = inC & np.asarray(C(-X), dtype=bool) & np.any(X != 0.0, axis=1)
    if np.any(both):
        rep.fail("C ∩ -C = {0}", X[int(np.argmax(both))].tolist())

    members = np.concatenate([zero, X[inC]])[: 400]
    sums = members[:, None, :] + members[None, :, :]
    closed = np.asarray(C(sums.reshape(-1, dim)), dtype=bool).reshape(len(members), len(members))
    rep.info["transitive"] = bool(np.all(closed))
    if not rep.info["transitive"]:
        i, j = np.argwhere(~closed)[0]
        rep.info["transitivity_witness"] = (members[i].tolist(), members[j].tolist())
        rep.notes.append("C + C is not contained in C: the orientation is not transitive")
    return rep


def check_refinement(base: ConeSpec1D, C: Callable, samples: int = 257, scale: float = 2.0) -> AxiomReport:
    """Sampled check of the refinement condition for a cone ``C`` inside ``base``.

    Tests ``0 in C``, ``0 <= c`` for members ``c``, and
    ``y in C and 0 <= x <= y  =>  x in C and y - x in C`` on a uniform grid
    of ``samples`` points in ``[-scale, scale]``.
    """
    xs = np.linspace(-scale, scale, samples)
    rep = AxiomReport()
    rep.info["resolution"] = float(xs[1] - xs[0])
    Cv = lambda t: np.asarray(C(np.asarray(t, dtype=float).reshape(-1, 1)), dtype=bool).reshape(np.shape(t))
    if not Cv(np.array([0.0]))[0]:
        rep.fail("identity in cone", 0.0)
    members = np.append(xs[Cv(xs)], 0.0)
    below = ~base.contains(members)
    if np.any(below):
        rep.fail("{0} <= C", float(members[np.argmax(below)]))
    for y in members:
        xcand = xs[base.contains(xs) & base.contains(y - xs)]
        if xcand.size == 0:
            continue
        bad = ~(Cv(xcand) & Cv(y - xcand))
        if np.any(bad):
            x = float(xcand[np.argmax(bad)])
            rep.fail("refinement", {"y": float(y), "x": x, "x_in_C": bool(Cv(np.array([x]))[0]),
                                    "y-x_in_C": bool(Cv(np.array([y - x]))[0])})
            break
    return rep


# --------------------------------------------------------------------------
# quotients


@dataclass(frozen=True)
class Subgroup:
    """Closed subgroup ``{sum n_i b_i + t v : n_i in Z, t in R}`` of ``R^dim``.

    At most one line direction is supported, which covers the lattices,
    coordinate axes and diagonals used as examples.
    """

    dim: int
    lattice: tuple[tuple[float, ...], ...] = ()
    line: tuple[float, ...] | None = None

    def __post_init__(self):
        for b in self.lattice:
            if len(b) != self.dim:
                raise ValueError("lattice vector has wrong dimension")
        if self.line is not None and len(self.line) != self.dim:
            raise ValueError("line direction has wrong dimension")

    @classmethod
    def integer_grid(cls, dim: int, spacing: float = 1.0) -> "Subgroup":
        return cls(dim, tuple(tuple(spacing if i == j else 0.0 for j in range(dim)) for i in range(dim)))

    def _lattice_points(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        if not self.lattice:
            return np.zeros((1, self.dim))
        B = np.array(self.lattice, dtype=float)
        gens = B if self.line is None else np.vstack([B, np.array(self.line, dtype=float)])
        pinv = np.linalg.pinv(gens.T)
        corners = np.array(list(itertools.product(*zip(lo, hi))))
        coef = corners @ pinv.T
        k = len(self.lattice)
        ranges = [range(int(math.floor(coef[:, i].min())) - 1, int(math.ceil(coef[:, i].max())) + 2)
                  for i in range(k)]
        ns = np.array(list(itertools.product(*ranges)), dtype=float)
        return ns @ B

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        hit = self.meets_boxes(x[None, :] - tol, x[None, :] + tol,
                               lo_open=False, hi_open=False)
        return bool(hit[0])

    def meets_boxes(self, lo, hi, lo_open: bool, hi_open: bool) -> np.ndarray:
        """For each box ``prod [lo_i, hi_i]`` (ends open as flagged), does it meet the subgroup?"""
        lo = np.atleast_2d(np.asarray(lo, dtype=float))
        hi = np.atleast_2d(np.asarray(hi, dtype=float))
        L = self._lattice_points(lo.min(axis=0), hi.max(axis=0))
        out = np.zeros(lo.shape[0], dtype=bool)
        v = None if self.line is None else np.array(self.line, dtype=float)
        for ell in L:
            a = lo - ell
            b = hi - ell
            if v is None:
                ok_lo = a < 0 if lo_open else a <= 0
                ok_hi = b > 0 if hi_open else b >= 0
                out |= np.all(ok_lo & ok_hi, axis=1)
                continue
            tlo = np.full(lo.shape[0], -np.inf)
            thi = np.full(lo.shape[0], np.inf)
            tlo_open = np.zeros(lo.shape[0], dtype=bool)
            thi_open = np.zeros(lo.shape[0], dtype=bool)
            feasible = np.ones(lo.shape[0], dtype=bool)
            for i in range(self.dim):
                if v[i] == 0.0:
                    ok_lo = a[:, i] < 0 if lo_open else a[:, i] <= 0
                    ok_hi = b[:, i] > 0 if hi_open else b[:, i] >= 0
                    feasible &= ok_lo & ok_hi
                    continue
                e1, e2 = a[:, i] / v[i], b[:, i] / v[i]
                o1, o2 = lo_open, hi_open
                if v[i] < 0:
                    e1, e2, o1, o2 = e2, e1, o2, o1
                up = (e1 > tlo) | ((e1 == tlo) & o1)
                tlo = np.where(up, e1, tlo)
                tlo_open = np.where(up, o1, tlo_open)
                dn = (e2 < thi) | ((e2 == thi) & o2)
                thi = np.where(dn, e2, thi)
                thi_open = np.where(dn, o2, thi_open)
            nonempty = (tlo < thi) | ((tlo == thi) & ~tlo_open & ~thi_open)
            out |= feasible & nonempty
        return out


def _box_kappa(cones: Sequence[ConeSpec1D]) -> np.ndarray:
    for c in cones:
        if c.closed or c.period is not None or not math.isfinite(c.kappa):
            raise InvalidCone("box cones are products of finite half-open line cones")
    return np.array([c.kappa for c in cones], dtype=float)


def _grid(lo: np.ndarray, hi: np.ndarray, step: float) -> np.ndarray:
    axes = [np.arange(math.ceil(a / step), math.ceil(b / step)) * step for a, b in zip(lo, hi)]
    return np.array(list(itertools.product(*axes)), dtype=float).reshape(-1, len(lo))


def check_antiH_box(cones: Sequence[ConeSpec1D], H: Subgroup, resolution: float = 1 / 16) -> AxiomReport:
    """Sampled check of: ``q, r`` in ``C`` and ``q + r`` in ``H``  =>  ``q, r`` in ``H``.

    ``C`` is the box ``prod [0, kappa_i)``. For every grid sample ``q`` of
    ``C`` the set of admissible ``r`` is decided exactly.
    """
    kappa = _box_kappa(cones)
    rep = AxiomReport()
    rep.info["resolution"] = resolution
    Q = _grid(np.zeros_like(kappa), kappa, resolution)
    # q + r in H with r in C  <=>  H meets q + C
    hits = H.meets_boxes(Q, Q + kappa, lo_open=False, hi_open=True)
    for q in Q[hits]:
        if not H.contains(q):
            h = _witness_in_box(H, q, q + kappa)
            rep.fail("antiH", {"q": q.tolist(), "r": (h - q).tolist()})
            break
    return rep


def _witness_in_box(H: Subgroup, lo, hi) -> np.ndarray:
    # sample the box for an explicit subgroup element; used only for reporting
    for s in np.linspace(0.0, 1.0, 65)[:-1]:
        x = lo + s * (hi - lo)
        if H.line is not None:
            v = np.array(H.line)
            for ell in H._lattice_points(lo, hi):
                t = (x - ell) @ v / (v @ v)
                cand = ell + t * v
                if np.all(cand >= lo) and np.all(cand < hi):
                    return cand
        else:
            for ell in H._lattice_points(lo, hi):
                if np.all(ell >= lo) and np.all(ell < hi):
                    return ell
    return lo.copy()


def check_quotient_postulate_box(cones: Sequence[ConeSpec1D], H: Subgroup, resolution: float = 1 / 16,
                                 z_range: float = 1.0) -> AxiomReport:
    """Sampled check of: for all ``z`` some ``h`` in ``H`` has ``R(z) ∩ (C + H) ⊆ R(h)``.

    ``z`` ranges over a grid of ``[-z_range, z_range]^dim`` and ``R(z)`` is
    sampled on the grid ``z + C``; for the sampled set the existence of ``h``
    is decided exactly. Use powers of two for ``resolution`` so grid sums are
    exact in binary floating point.
    """
    kappa = _box_kappa(cones)
    dim = kappa.size
    rep = AxiomReport()
    rep.info["resolution"] = resolution
    rep.info["z_range"] = z_range
    Z = _grid(np.full(dim, -z_range), np.full(dim, z_range + resolution), resolution)
    Cg = _grid(np.zeros(dim), kappa, resolution)
    for z in Z:
        U = z + Cg
        # u in C + H  <=>  H meets u - C = prod (u - kappa, u]
        inCH = H.meets_boxes(U - kappa, U, lo_open=True, hi_open=False)
        U = U[inCH]
        if U.size == 0:
            continue
        lo = U.max(axis=0) - kappa
        hi = U.min(axis=0)
        if not H.meets_boxes(lo[None], hi[None], lo_open=True, hi_open=False)[0]:
            rep.fail("quotient postulate", {"z": z.tolist()})
            break
    return rep


def check_antiH(spec: ConeSpec1D) -> AxiomReport:
    """Analytic verdict for the circle: holds iff ``2 kappa <= period`` (``<`` for closed cones)."""
    if spec.period is None:
        raise InvalidCone("check_antiH needs a period")
    rep = AxiomReport()
    L = spec.period
    rep.info["analytic"] = spec.is_valid
    if spec.is_valid:
        return rep
    for k in range(1, 10):
        r = k * L / 10.0
        q = L - r
        if spec.contains(r) and spec.contains(q):
            rep.fail("antiH", {"q": q, "r": r})
            return rep
    rep.fail("antiH", {"q": L / 2.0, "r": L / 2.0})
    return rep


def check_quotient_postulate(spec: ConeSpec1D, samples: int = 64) -> AxiomReport:
    """Sampled quotient postulate for ``[0, kappa)`` modulo ``period * Z``.

    ``samples`` grid points per period; the resolution is the largest power
    of two not exceeding ``period / samples``.
    """
    if spec.period is None:
        raise InvalidCone("check_quotient_postulate needs a period")
    L = spec.period
    res = 2.0 ** math.floor(math.log2(L / samples))
    line = ConeSpec1D(spec.kappa)
    return check_quotient_postulate_box([line], Subgroup(1, ((L,),)), resolution=res, z_range=L)


def box_cone(kappas: Sequence[float]) -> Callable:
    """Predicate for the box ``prod [0, kappa_i)`` on ``(n, dim)`` arrays."""
    k = np.asarray(kappas, dtype=float)
    return lambda X: np.all((np.asarray(X) >= 0) & (np.asarray(X) < k), axis=-1)


def angle_certified_samples(spec: ConeSpec1D, step: float) -> np.ndarray:
    spec.require_valid()
    return np.arange(0.0, spec.period, step)
