"""Family-agnostic sponge operations.

A :class:`SpongeSpec` selects a family; ``leq``, ``join`` and ``meet``
dispatch on it. On top of these sit the axiom checkers, a generic
join-by-descent routine driven by a discriminator, a product combinator
and a grid-scanning oracle used to cross-check the exact solvers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import epigraph as epi
from . import groups
from . import hyperbolic as hyp
from . import inner_product as ip
from .base import (AxiomReport, ComponentUnbounded, DimensionMismatch, GridSpec, GridTooCoarse,
                   JoinUnavailable, NoSeeds, SpongeError, as_point, as_pointset)
from .epigraph import Profile
from .groups import ConeSpec1D

FAMILIES = ("inner_product", "epigraph", "hyperbolic", "angle", "product")


@dataclass(frozen=True)
class SpongeSpec:
    """Dispatch handle for a sponge family and its parameters.

    ``cone`` describes the ``angle`` family, which includes the plain line
    cone when ``cone.period`` is ``None``.
    """

    family: str
    dim: int
    profile: Profile | None = None
    cone: ConeSpec1D | None = None
    components: tuple["SpongeSpec", ...] = field(default=())

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown sponge family {self.family!r}")
        if self.dim < 1:
            raise DimensionMismatch("dimension must be positive")
        if self.family == "epigraph" and self.profile is None:
            raise ValueError("epigraph spec needs a profile")
        if self.family == "angle":
            if self.cone is None or self.dim != 1:
                raise ValueError("angle spec needs a cone and dimension 1")
        if self.family == "product":
            if not self.components:
                raise ValueError("product spec needs components")
            if sum(c.dim for c in self.components) != self.dim:
                raise DimensionMismatch("component dimensions do not add up")
        if self.family in ("epigraph", "hyperbolic") and self.dim < 2:
            raise DimensionMismatch(f"{self.family} sponges need dimension >= 2")

    @classmethod
    def inner_product(cls, dim: int) -> "SpongeSpec":
        return cls("inner_product", dim)

    @classmethod
    def epigraph(cls, dim: int, profile: Profile | None = None, *, c: float = 1.0,
                 p: float = 2.0) -> "SpongeSpec":
        return cls("epigraph", dim, profile=profile or Profile(c=c, p=p))

    @classmethod
    def hyperbolic(cls, dim: int) -> "SpongeSpec":
        return cls("hyperbolic", dim)

    @classmethod
    def angle(cls, kappa: float, period: float | None = None, closed: bool = False) -> "SpongeSpec":
        return cls("angle", 1, cone=ConeSpec1D(kappa, period, closed))

    @classmethod
    def line(cls, kappa: float = math.inf) -> "SpongeSpec":
        return cls.angle(kappa, None)

    @classmethod
    def product(cls, components: Sequence["SpongeSpec"]) -> "SpongeSpec":
        comps = tuple(components)
        return cls("product", sum(c.dim for c in comps), components=comps)

    def blocks(self) -> list[slice]:
        out, start = [], 0
        for c in self.components:
            out.append(slice(start, start + c.dim))
            start += c.dim
        return out

    def canonical(self, P: np.ndarray) -> np.ndarray:
        """Canonical representatives (angles reduced into ``[0, period)``)."""
        if self.family == "angle" and self.cone.period is not None:
            return groups.canonical_angle(P, self.cone.period)
        if self.family == "product":
            P = np.array(P, dtype=float, copy=True)
            for c, b in zip(self.components, self.blocks()):
                P[..., b] = c.canonical(P[..., b])
        return P


# --------------------------------------------------------------------------
# relation


def _check_domain(spec: SpongeSpec, P: np.ndarray) -> None:
    if P.shape[-1] != spec.dim:
        raise DimensionMismatch(f"expected dimension {spec.dim}, got {P.shape[-1]}")
    if spec.family == "hyperbolic":
        hyp._check(P)
    elif spec.family == "product":
        for c, b in zip(spec.components, spec.blocks()):
            _check_domain(c, P[..., b])


def leq_array(spec: SpongeSpec, x, y) -> np.ndarray:
    """Vectorised relation without domain checks; broadcasts over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    fam = spec.family
    if fam == "inner_product":
        return ip.leq_array(x, y)
    if fam == "epigraph":
        return epi.leq_array(spec.profile, x, y)
    if fam == "hyperbolic":
        return hyp.leq_array(x, y)
    if fam == "angle":
        return groups.leq_array(spec.cone, x[..., 0], y[..., 0])
    out = None
    for c, b in zip(spec.components, spec.blocks()):
        r = leq_array(c, x[..., b], y[..., b])
        out = r if out is None else out & r
    return out


def leq(spec: SpongeSpec, x, y) -> bool:
    x = as_point(x, spec.dim)
    y = as_point(y, spec.dim)
    _check_domain(spec, x)
    _check_domain(spec, y)
    return bool(leq_array(spec, x, y))


def bounds_check(spec: SpongeSpec, P, y, side: str) -> bool:
    """``side='right'``: every ``p <= y``; ``side='left'``: ``y <= p`` for every ``p``."""
    P = as_pointset(P, spec.dim)
    y = as_point(y, spec.dim)
    side = side.lower()
    if side == "right":
        return bool(np.all(leq_array(spec, P, y)))
    if side == "left":
        return bool(np.all(leq_array(spec, y, P)))
    raise ValueError("side must be 'left' or 'right'")


def height(spec: SpongeSpec, x) -> np.ndarray | None:
    """The family discriminator, strictly increasing along the relation; ``None`` for cones."""
    fam = spec.family
    if fam == "inner_product":
        return ip.height(x)
    if fam == "epigraph":
        return epi.height(x)
    if fam == "hyperbolic":
        return hyp.height(x)
    if fam == "product":
        parts = [height(c, np.asarray(x)[..., b]) for c, b in zip(spec.components, spec.blocks())]
        if any(p is None for p in parts):
            return None
        return sum(parts)
    return None


# --------------------------------------------------------------------------
# join and meet


def product_join(specs: Sequence[SpongeSpec], P, tol: float = 1e-12) -> np.ndarray:
    return _product(SpongeSpec.product(specs), as_pointset(P), "join", tol)


def product_meet(specs: Sequence[SpongeSpec], P, tol: float = 1e-12) -> np.ndarray:
    return _product(SpongeSpec.product(specs), as_pointset(P), "meet", tol)


def _product(spec: SpongeSpec, P: np.ndarray, side: str, tol: float) -> np.ndarray:
    _check_domain(spec, P)
    parts = []
    for i, (c, b) in enumerate(zip(spec.components, spec.blocks())):
        r = _extremum(c, P[:, b], side, tol)
        if r is None:
            raise ComponentUnbounded(i, "right bound" if side == "join" else "left bound")
        parts.append(r)
    return np.concatenate(parts)


def _extremum(spec: SpongeSpec, P: np.ndarray, side: str, tol: float) -> np.ndarray | None:
    fam = spec.family
    if fam == "inner_product":
        return ip.ip_join(P, tol) if side == "join" else ip.ip_meet(P, tol)
    if fam == "epigraph":
        return epi.epi_join(spec.profile, P, tol) if side == "join" else epi.epi_meet(spec.profile, P, tol)
    if fam == "hyperbolic":
        return hyp.hyp_join(P, tol) if side == "join" else hyp.hyp_meet(P, tol)
    if fam == "angle":
        fn = groups.angle_join if side == "join" else groups.angle_meet
        r = fn(spec.cone, P[:, 0])
        return None if r is None else np.array([r])
    try:
        return _product(spec, P, side, tol)
    except ComponentUnbounded:
        return None


def join(spec: SpongeSpec, P, tol: float = 1e-12) -> np.ndarray | None:
    """The join of a finite nonempty set, or ``None`` when it has no right bound."""
    P = as_pointset(P, spec.dim)
    _check_domain(spec, P)
    return _extremum(spec, P, "join", tol)


def meet(spec: SpongeSpec, P, tol: float = 1e-12) -> np.ndarray | None:
    P = as_pointset(P, spec.dim)
    _check_domain(spec, P)
    return _extremum(spec, P, "meet", tol)


def _same(spec: SpongeSpec, a, b, atol: float) -> bool:
    if a is None or b is None:
        return False
    a = spec.canonical(np.asarray(a, dtype=float))
    b = spec.canonical(np.asarray(b, dtype=float))
    return bool(np.all(np.abs(a - b) <= atol * (1.0 + np.abs(b))))


# --------------------------------------------------------------------------
# axiom checkers


def check_orientation(spec: SpongeSpec, sample) -> AxiomReport:
    """Reflexivity at every sample point and antisymmetry for every pair."""
    X = as_pointset(sample, spec.dim)
    _check_domain(spec, X)
    X = spec.canonical(X)
    rep = AxiomReport()
    refl = leq_array(spec, X, X)
    if not np.all(refl):
        rep.fail("reflexivity", X[int(np.argmin(refl))].tolist())
    M = leq_array(spec, X[:, None, :], X[None, :, :])
    distinct = np.any(X[:, None, :] != X[None, :, :], axis=-1)
    both = M & M.T & distinct
    if np.any(both):
        i, j = np.argwhere(both)[0]
        rep.fail("antisymmetry", (X[i].tolist(), X[j].tolist()))
    return rep


def check_absorption(spec: SpongeSpec, P, tol: float = 1e-12, atol: float = 1e-9) -> AxiomReport:
    """For every ``x`` in ``P``: the meet of ``x`` and the join of ``P`` is ``x``."""
    P = as_pointset(P, spec.dim)
    J = join(spec, P, tol)
    if J is None:
        raise JoinUnavailable("set has no right bound")
    rep = AxiomReport()
    rep.info["join"] = J.tolist()
    for x in P:
        m = meet(spec, np.stack([x, J]), tol)
        if not _same(spec, m, x, atol):
            rep.fail("absorption", {"x": x.tolist(), "join": J.tolist(),
                                    "meet": None if m is None else m.tolist()})
    return rep


def check_part_preservation(spec: SpongeSpec, P, y, tol: float = 1e-12, atol: float = 1e-9) -> AxiomReport:
    """If the meet of ``{x, y}`` is ``y`` for each ``x`` in ``P``, the meet of ``M(P)`` and ``y`` is ``y``.

    ``info`` records the pair meets, whether the hypothesis held and the set
    meet, so the report also documents cases where it passes vacuously.
    """
    P = as_pointset(P, spec.dim)
    y = as_point(y, spec.dim)
    rep = AxiomReport()
    pair_meets = [meet(spec, np.stack([x, y]), tol) for x in P]
    hyp_ok = all(_same(spec, m, y, atol) for m in pair_meets)
    MP = meet(spec, P, tol)
    rep.info.update(pair_meets=[None if m is None else m.tolist() for m in pair_meets],
                    hypothesis=hyp_ok, set_meet=None if MP is None else MP.tolist())
    if not hyp_ok:
        rep.notes.append("hypothesis fails; passes vacuously")
        return rep
    if MP is None:
        rep.fail("part preservation: meet exists", P.tolist())
        return rep
    m = meet(spec, np.stack([MP, y]), tol)
    rep.info["final_meet"] = None if m is None else m.tolist()
    if not _same(spec, m, y, atol):
        rep.fail("part preservation", {"y": y.tolist(), "set_meet": MP.tolist()})
    return rep


def validate_spec(spec: SpongeSpec, samples: int = 10000, seed: int = 0) -> AxiomReport:
    """Run the family's validation suite."""
    rng = np.random.default_rng(seed)
    fam = spec.family
    if fam == "epigraph":
        return epi.validate_profile(spec.profile, spec.dim, samples=samples, seed=seed)
    if fam == "angle":
        cone = spec.cone
        rep = check_orientation(spec, np.linspace(-3 * (cone.period or 1.0), 3 * (cone.period or 1.0), 241))
        if cone.period is not None:
            rep.merge(groups.check_antiH(cone))
            if cone.is_valid and not cone.closed:
                rep.merge(groups.check_quotient_postulate(cone))
        return rep
    if fam == "product":
        rep = AxiomReport()
        for c in spec.components:
            rep.merge(validate_spec(c, samples, seed))
        return rep
    X = rng.normal(size=(min(samples, 400), spec.dim))
    if fam == "hyperbolic":
        X[:, -1] = np.abs(X[:, -1]) + 0.1
    return check_orientation(spec, X)


# --------------------------------------------------------------------------
# seeds and descent


def right_bound_witness(spec: SpongeSpec, P) -> np.ndarray:
    P = as_pointset(P, spec.dim)
    fam = spec.family
    if fam == "epigraph":
        return epi.epi_right_bound_witness(spec.profile, P)
    if fam == "hyperbolic":
        return hyp.right_bound_witness(P)
    if fam == "inner_product":
        J = ip.ip_join(P)
        if J is None:
            raise NoSeeds("set has no right bound")
        return 2.0 * J
    raise NoSeeds(f"no right-bound witness for family {fam}")


def raise_to_right_bound(spec: SpongeSpec, P: np.ndarray, c) -> np.ndarray | None:
    """Lowest right bound of ``P`` above ``c`` along the discriminator direction, if any."""
    c = np.asarray(c, dtype=float)
    fam = spec.family
    if fam == "epigraph":
        return epi.lowest_right_bound_above(spec.profile, P, c[:-1])
    if fam == "hyperbolic":
        return hyp.lowest_right_bound_above(P, c[:-1])
    if fam == "inner_product":
        sys = ip.HalfspaceSystem.from_points(P)
        if sys.normals.shape[0] and not np.all(sys.normals @ c > 0):
            return None
        return ip._grow_to_right_bound(c, P)
    return None


def seed_right_bounds(spec: SpongeSpec, P, count: int = 4, seed: int = 0) -> np.ndarray:
    """The canonical witness plus jittered copies raised back into the right-bound set."""
    P = as_pointset(P, spec.dim)
    rng = np.random.default_rng(seed)
    w = right_bound_witness(spec, P)
    out = [w]
    scale = float(np.ptp(P, axis=0).max()) + 1.0
    while len(out) < count:
        r = raise_to_right_bound(spec, P, w + rng.normal(scale=scale, size=w.size))
        if r is not None:
            out.append(r)
    return np.array(out)


@dataclass
class DescentResult:
    point: np.ndarray
    trace: list[float]
    iterations: int


def descent_join(spec: SpongeSpec, P, seeds, max_iter: int = 500, tol: float = 1e-9,
                 seed: int = 0, return_trace: bool = False):
    """Approximate join by driving the discriminator down over right bounds.

    The seed set is closed once under pairwise meets; then candidates are
    drawn around the incumbent, raised into the right-bound set and merged
    with it by a meet. The incumbent's discriminator never increases.
    """
    P = as_pointset(P, spec.dim)
    _check_domain(spec, P)
    if height(spec, P[0]) is None:
        raise SpongeError(f"family {spec.family} has no discriminator")
    S = np.asarray(seeds, dtype=float)
    if S.size == 0:
        raise NoSeeds("no seeds given")
    S = as_pointset(S, spec.dim)
    for s in S:
        if not bounds_check(spec, P, s, "right"):
            raise NoSeeds(f"seed {s.tolist()} is not a right bound")

    def is_bound(q):
        return q is not None and bool(np.all(leq_array(spec, P, q)))

    def meet2(a, b):
        try:
            return meet(spec, np.stack([a, b]))
        except SpongeError:
            return None

    cands = list(S)
    for a, b in itertools.combinations(S, 2):
        m = meet2(a, b)
        if is_bound(m):
            cands.append(m)
    hs = [float(height(spec, q)) for q in cands]
    best = cands[int(np.argmin(hs))].copy()
    hbest = min(hs)
    trace = [hbest]

    rng = np.random.default_rng(seed)
    step = top = float(np.ptp(np.vstack([P, S]), axis=0).max()) or 1.0
    floor = tol * (1.0 + float(np.max(np.abs(best))))
    it = 0
    for it in range(1, max_iter + 1):
        if step < floor:
            break
        c = best + rng.normal(scale=step, size=best.size)
        r = raise_to_right_bound(spec, P, c)
        improved = False
        if is_bound(r):
            hr = float(height(spec, r))
            improved = hr < hbest
            m = meet2(best, r)
            for q, hq in ((r, hr), (m, float(height(spec, m)) if is_bound(m) else math.inf)):
                if hq < hbest:
                    best, hbest = q, hq
        # only the jittered candidate steers the step; a meet with a far
        # candidate can improve slightly and would otherwise blow the step up
        step = min(step * 2.0, top) if improved else step * 0.8
        trace.append(hbest)
    if return_trace:
        return DescentResult(best, trace, it)
    return best


# --------------------------------------------------------------------------
# brute-force oracle


def certified_box(spec: SpongeSpec, P, side: str) -> tuple[np.ndarray, np.ndarray]:
    """An axis-aligned box containing the join (``side='join'``) or meet of ``P``."""
    P = as_pointset(P, spec.dim)
    fam = spec.family
    if fam == "epigraph":
        return epi.certified_box(spec.profile, P, side)
    if fam == "hyperbolic":
        return hyp.certified_box(P, side)
    if fam == "inner_product":
        if side == "meet":
            return np.minimum(P.min(axis=0), 0.0), np.maximum(P.max(axis=0), 0.0)
        norms = np.linalg.norm(P, axis=1)
        nz = norms[norms > 0]
        # heuristic radius (no right bound inside it is taken as unboundedness)
        R = 2.0 * float(nz.max() ** 2 / nz.min()) if nz.size else 1.0
        return np.full(spec.dim, -R), np.full(spec.dim, R)
    if fam == "angle":
        if spec.cone.period is not None:
            return np.array([0.0]), np.array([spec.cone.period])
        k = spec.cone.kappa if math.isfinite(spec.cone.kappa) else float(np.ptp(P)) + 1.0
        return P.min(axis=0) - k, P.max(axis=0) + k
    los, his = zip(*(certified_box(c, P[:, b], side) for c, b in zip(spec.components, spec.blocks())))
    return np.concatenate(los), np.concatenate(his)


def _scan(spec, P, grid: GridSpec, side: str, hfun):
    if spec.family == "inner_product" and side == "meet":
        return _ray_refine(spec, P, grid)
    bounds = []
    for G in grid.points(chunk=1 << 16):
        if spec.family == "hyperbolic":
            G = G[G[:, -1] > hyp.H_MIN]
            if G.size == 0:
                continue
        if side == "join":
            mask = np.all(leq_array(spec, P[None, :, :], G[:, None, :]), axis=1)
        else:
            mask = np.all(leq_array(spec, G[:, None, :], P[None, :, :]), axis=1)
        if np.any(mask):
            bounds.append(G[mask])
    if not bounds:
        return None
    B = np.concatenate(bounds)
    if hfun is None:
        return B
    if spec.family in ("epigraph", "hyperbolic"):
        return _column_refine(spec, P, B, side, grid.step)
    key = hfun(B) if side == "join" else -hfun(B)
    ties = B[key == key.min()]
    return ties[len(ties) // 2]


def _column_refine(spec, P, B: np.ndarray, side: str, step: float, iters: int = 60) -> np.ndarray:
    """Extreme bound per grid column, sharpened by bisection along ``h``.

    Bounds are up-sets (joins) or down-sets (meets) along the ``h`` axis in
    these families, so each column's extreme grid bound can be refined using
    the relation alone. The perpendicular coordinates stay on the grid.
    """
    sign = 1.0 if side == "join" else -1.0
    order = np.lexsort((sign * B[:, -1],) + tuple(B[:, k] for k in range(B.shape[1] - 2, -1, -1)))
    B = B[order]
    first = np.ones(len(B), dtype=bool)
    first[1:] = np.any(B[1:, :-1] != B[:-1, :-1], axis=1)
    cols = B[first]
    inside = cols[:, -1].copy()
    outside = inside - sign * step
    if spec.family == "hyperbolic":
        outside = np.maximum(outside, 2 * hyp.H_MIN)
    for _ in range(iters):
        mid = 0.5 * (inside + outside)
        Z = cols.copy()
        Z[:, -1] = mid
        if side == "join":
            ok = np.all(leq_array(spec, P[None, :, :], Z[:, None, :]), axis=1)
        else:
            ok = np.all(leq_array(spec, Z[:, None, :], P[None, :, :]), axis=1)
        inside = np.where(ok, mid, inside)
        outside = np.where(ok, outside, mid)
    i = int(np.argmin(sign * inside))
    out = cols[i].copy()
    out[-1] = inside[i]
    return out


def _ray_refine(spec, P, grid: GridSpec) -> np.ndarray:
    """Inner-product meet: the farthest left bound along each grid direction.

    Left bounds form a convex set containing the origin, so along a unit
    ray ``u`` they fill a segment ``[0, r(u)]``. The relation ``t u <= p``
    reads ``t <= u . p``, hence ``r(u) = min_p max(u . p, 0)``. Thin
    lens-shaped bound sets can miss every grid point, which is why grid
    points serve as directions rather than candidates.
    """
    best, rbest = np.zeros(spec.dim), 0.0
    for G in grid.points(chunk=1 << 16):
        n = np.linalg.norm(G, axis=1)
        U = G[n > 0] / n[n > 0, None]
        if U.size == 0:
            continue
        r = np.maximum(U @ P.T, 0.0).min(axis=1)
        i = int(np.argmax(r))
        if r[i] > rbest:
            z, shrink = r[i] * U[i], 1e-15
            # guard the rounding of the product against the exact relation
            while not np.all(leq_array(spec, z, P)):
                z, shrink = (1 - shrink) * r[i] * U[i], 2 * shrink
            best, rbest = z, float(r[i])
    return best


def _exhaustive_pick(spec, B: np.ndarray, side: str):
    M = leq_array(spec, B[:, None, :], B[None, :, :])
    hit = np.all(M, axis=1) if side == "join" else np.all(M, axis=0)
    # join: a bound below every other bound; meet: a bound above every other
    idx = np.flatnonzero(hit)
    return B[idx[0]] if idx.size else None


def brute_force_extremum(spec: SpongeSpec, P, grid: GridSpec | None = None, side: str = "join",
                         step: float = 0.01, max_points: int = 1 << 18) -> np.ndarray | None:
    """Grid-scanning oracle for the join or meet.

    Bounds of ``P`` on the grid are ranked by the family discriminator (the
    join is the bound of least discriminator, the meet the greatest). Large
    grids are scanned coarse-to-fine: a coarse pass locates the extremum and
    each refinement rescans a window around it at a quarter of the step, down
    to ``grid.step``. Cone families without a discriminator are decided by
    the exhaustive pairwise check over the grid bounds. Returns ``None``
    when no grid bound is extremal among the others (cone families only).
    """
    P = as_pointset(P, spec.dim)
    _check_domain(spec, P)
    side = side.lower()
    if side not in ("join", "meet"):
        raise ValueError("side must be 'join' or 'meet'")
    if grid is None:
        lo, hi = certified_box(spec, P, side)
        grid = GridSpec(tuple(lo), tuple(hi), step)
    if P.shape[0] == 1:
        return P[0].copy()
    hfun = (lambda X: height(spec, X)) if height(spec, P[:1]) is not None else None

    if hfun is None:
        B = _scan(spec, P, grid, side, None)
        if B is None:
            raise GridTooCoarse("no grid point is a bound")
        return _exhaustive_pick(spec, B, side)

    lo = np.array(grid.lo, dtype=float)
    hi = np.array(grid.hi, dtype=float)
    per_axis = max(int(max_points ** (1.0 / spec.dim)), 8)
    span = float(np.max(hi - lo))
    level = 0
    while grid.step * 4**level * per_axis < span:
        level += 1
    cur = GridSpec(tuple(lo), tuple(hi), grid.step * 4**level)
    best = _scan(spec, P, cur, side, hfun)
    while best is None and level > 0:
        level -= 1
        cur = GridSpec(tuple(lo), tuple(hi), grid.step * 4**level)
        if cur.size() > 16 * max_points:
            break
        best = _scan(spec, P, cur, side, hfun)
    if best is None:
        raise GridTooCoarse(f"no grid point at step {cur.step} is a bound")
    while level > 0:
        s = grid.step * 4**level
        level -= 1
        w_lo = np.maximum(best - 8 * s, lo)
        w_hi = np.minimum(best + 8 * s, hi)
        found = _scan(spec, P, GridSpec(tuple(w_lo), tuple(w_hi), grid.step * 4**level), side, hfun)
        if found is not None:
            hb, hf = float(hfun(best)), float(hfun(found))
            if (hf <= hb) if side == "join" else (hf >= hb):
                best = found
    return best
