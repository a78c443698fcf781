import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from sponges import core
from sponges.base import (ComponentUnbounded, DimensionMismatch, DomainError, GridSpec, GridTooCoarse,
                          JoinUnavailable, NoSeeds)
from sponges.core import SpongeSpec
import oracles

IP2 = SpongeSpec.inner_product(2)
EPI2 = SpongeSpec.epigraph(2, p=2)
HYP2 = SpongeSpec.hyperbolic(2)
CIRCLE = SpongeSpec.angle(math.pi, 2 * math.pi)
FOUR = np.array([[1.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 3.0]])


# --- relation -------------------------------------------------------------

def test_leq_examples():
    assert core.leq(IP2, (1, 0), (2, 1))
    assert not core.leq(IP2, (2, 0), (1, 3))
    for spec, x in ((IP2, (0.3, -1)), (EPI2, (1, 2)), (HYP2, (0, 0.5)), (CIRCLE, (5.0,))):
        assert core.leq(spec, x, x)


def test_leq_domain_errors():
    with pytest.raises(DimensionMismatch):
        core.leq(IP2, (1, 0, 0), (1, 0))
    with pytest.raises(DomainError):
        core.leq(HYP2, (0, -1), (0, 1))
    with pytest.raises(ValueError):
        core.leq(IP2, (math.nan, 0), (1, 0))


def test_bounds_check_examples():
    assert core.bounds_check(IP2, [(2, 0), (2, 1), (1, 3)], (1, 0), "left")
    assert not core.bounds_check(IP2, [(2, 0), (1, 3)], (2, 0), "left")
    assert core.bounds_check(EPI2, [(0.5, 0.5)], (0.5, 0.5), "left")
    assert core.bounds_check(EPI2, [(0.5, 0.5)], (0.5, 0.5), "right")
    with pytest.raises(ValueError):
        core.bounds_check(IP2, FOUR, (1, 0), "up")


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        core.join(IP2, np.empty((0, 2)))


# --- orientation ----------------------------------------------------------

def test_orientation_examples():
    assert core.check_orientation(IP2, FOUR).passed
    assert core.check_orientation(CIRCLE, [0.0, 3.0]).passed


def test_orientation_catches_antipodes_of_closed_half_circle():
    broken = SpongeSpec.angle(0.5, 1.0, closed=True)
    rep = core.check_orientation(broken, np.linspace(0, 1, 16, endpoint=False))
    assert not rep.passed
    a, b = dict(rep.violations)["antisymmetry"]
    assert abs(abs(a[0] - b[0]) - 0.5) < 1e-12


# coordinates on a 1e-4 lattice keep distinct points well clear of rounding
lattice = lambda lo, hi: st.integers(int(lo * 1e4), int(hi * 1e4)).map(lambda k: k / 1e4)


@given(st.lists(st.tuples(lattice(-5, 5), lattice(0.05, 5)), min_size=1, max_size=12))
def test_orientation_property_hyperbolic(pts):
    assert core.check_orientation(HYP2, pts).passed


@given(st.lists(st.tuples(lattice(-5, 5), lattice(-5, 5)), min_size=1, max_size=12))
def test_orientation_property_epigraph(pts):
    assert core.check_orientation(EPI2, pts).passed


# --- absorption and part preservation -------------------------------------

def test_absorption_examples():
    rep = core.check_absorption(IP2, [(1, 0), (0, 1)])
    assert rep.passed and np.allclose(rep.info["join"], (1, 1))
    rep = core.check_absorption(EPI2, [(-1, 0), (1, 0)])
    assert rep.passed and np.allclose(rep.info["join"], (0, 1))
    for spec, x in ((IP2, (0.4, 0.7)), (HYP2, (1, 2)), (CIRCLE, (1.0,))):
        assert core.check_absorption(spec, [x]).passed


def test_absorption_without_join():
    with pytest.raises(JoinUnavailable):
        core.check_absorption(IP2, [(1, 0), (-1, 0)])


def test_part_preservation_examples():
    rep = core.check_part_preservation(IP2, [(2, 0), (0, 2)], (0.5, 0.5))
    assert rep.passed and rep.info["hypothesis"]
    assert np.allclose(rep.info["set_meet"], (1, 1))
    assert core.check_part_preservation(EPI2, [(0.3, 0.1)], (0.3, 0.1)).passed


def test_part_preservation_hyperbolic():
    P = [(0, 1), (1, 1)]
    y = (0.5, 0.5)
    assert all(core.leq(HYP2, y, p) for p in P)
    rep = core.check_part_preservation(HYP2, P, y)
    assert rep.passed and rep.info["hypothesis"]
    top = oracles.circle_intersection_top(P[0], P[1])
    assert np.allclose(rep.info["set_meet"], top, atol=1e-12)


def test_part_preservation_vacuous():
    rep = core.check_part_preservation(IP2, [(2, 0), (0, 2)], (3, 3))
    assert rep.passed and not rep.info["hypothesis"]
    assert rep.notes


bounded_ip = st.lists(st.tuples(st.floats(0.2, 3), st.floats(0.2, 3)), min_size=1, max_size=6)


@given(bounded_ip)
def test_absorption_property_inner_product(P):
    assert core.check_absorption(IP2, P, atol=1e-7).passed


@given(st.lists(st.tuples(st.floats(-2, 2), st.floats(0.3, 2)), min_size=1, max_size=6))
def test_absorption_property_hyperbolic(P):
    assert core.check_absorption(HYP2, P, atol=1e-7).passed


@given(st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=1, max_size=6))
def test_absorption_property_epigraph(P):
    assert core.check_absorption(EPI2, P, atol=1e-7).passed


# --- descent --------------------------------------------------------------

def test_descent_examples():
    P = [(-1, 0), (1, 0)]
    got = core.descent_join(EPI2, P, [(0, 2), (0.5, 2.5)], tol=1e-12)
    assert np.allclose(got, (0, 1), atol=1e-3)
    assert np.array_equal(core.descent_join(EPI2, [(0.2, 0.3)], [(0.2, 0.3)]), [0.2, 0.3])


def test_descent_hyperbolic():
    P = np.array([(0.0, 1.0), (1.0, 1.0)])
    seeds = core.seed_right_bounds(HYP2, P, count=2, seed=3)
    res = core.descent_join(HYP2, P, seeds, return_trace=True)
    assert np.allclose(res.point, (0.5, math.sqrt(1.25)), atol=1e-3)
    assert core.bounds_check(HYP2, P, res.point, "right")


@pytest.mark.parametrize("spec", [EPI2, HYP2, IP2, SpongeSpec.epigraph(3, p=3)], ids=lambda s: s.family)
def test_descent_trace_nonincreasing(spec, rng):
    P = rng.normal(size=(5, spec.dim))
    if spec.family == "hyperbolic":
        P[:, -1] = np.abs(P[:, -1]) + 0.2
    if spec.family == "inner_product":
        P = np.abs(P) + 0.5
    seeds = core.seed_right_bounds(spec, P, count=3, seed=1)
    res = core.descent_join(spec, P, seeds, max_iter=200, return_trace=True)
    assert all(b <= a for a, b in zip(res.trace, res.trace[1:]))
    assert core.bounds_check(spec, P, res.point, "right")
    assert res.trace[-1] >= float(core.height(spec, core.join(spec, P))) - 1e-9


def test_descent_rejects_bad_seeds():
    with pytest.raises(NoSeeds):
        core.descent_join(EPI2, [(-1, 0), (1, 0)], [(0, 0)])
    with pytest.raises(NoSeeds):
        core.descent_join(EPI2, [(-1, 0), (1, 0)], np.empty((0, 2)))


# --- product --------------------------------------------------------------

def test_product_examples():
    torus = [SpongeSpec.angle(0.5, 1.0), SpongeSpec.angle(0.5, 1.0)]
    assert np.allclose(core.product_join(torus, [(0.1, 0.2), (0.3, 0.1)]), (0.3, 0.2))
    assert np.allclose(core.product_meet(torus, [(0.1, 0.2), (0.3, 0.1)]), (0.1, 0.1))
    assert np.allclose(core.product_join(torus, [(0.4, 0.6)]), (0.4, 0.6))


def test_product_component_unbounded():
    specs = [SpongeSpec.line(), CIRCLE]
    with pytest.raises(ComponentUnbounded) as e:
        core.product_join(specs, [(0, 0), (1, 2.5), (2, 4.5)])
    assert e.value.index == 1
    assert core.join(SpongeSpec.product(specs), [(0, 0), (1, 2.5), (2, 4.5)]) is None


def test_product_mixed_blocks():
    spec = SpongeSpec.product([EPI2, SpongeSpec.line()])
    J = core.join(spec, [(-1, 0, 3), (1, 0, -2)])
    assert np.allclose(J, (0, 1, 3))


# --- brute-force oracle ---------------------------------------------------

def test_brute_force_examples():
    assert np.allclose(core.brute_force_extremum(IP2, [(2, 0), (0, 2)], side="meet", step=0.01), (1, 1), atol=0.05)
    got = core.brute_force_extremum(EPI2, [(0, 0), (1, 0)], side="join", step=0.001)
    assert np.allclose(got, (0.5, 0.25), atol=0.005)
    assert np.array_equal(core.brute_force_extremum(HYP2, [(0.3, 0.7)]), [0.3, 0.7])


def test_brute_force_grid_too_coarse():
    # a grid that misses every right bound
    grid = GridSpec((-0.5, -0.5), (0.5, 0.5), 0.25)
    with pytest.raises(GridTooCoarse):
        core.brute_force_extremum(EPI2, [(-1, 0), (1, 0)], grid=grid, side="join")


@pytest.mark.parametrize("spec,side", [(IP2, "join"), (IP2, "meet"), (EPI2, "join"), (EPI2, "meet"),
                                       (HYP2, "join"), (HYP2, "meet")], ids=str)
def test_exact_solver_agrees_with_grid(spec, side, rng):
    step = 0.01
    for _ in range(3):
        P = rng.uniform(0.5, 1.5, size=(3, 2))
        exact = core.join(spec, P) if side == "join" else core.meet(spec, P)
        if exact is None:
            continue
        grid = core.brute_force_extremum(spec, P, side=side, step=step)
        assert np.max(np.abs(grid - exact)) <= 5 * step


def test_duality_meet_is_join_of_left_bounds():
    # the meet of P equals the join of P's left bounds, here sampled on a grid
    P = np.array([(2.0, 0.0), (0.0, 2.0)])
    g = GridSpec((-0.5, -0.5), (2.5, 2.5), 0.05).points()
    Q = np.concatenate(list(g))
    Q = Q[core.leq_array(IP2, Q[:, None, :], P[None, :, :]).all(axis=1)]
    assert np.allclose(core.join(IP2, Q), core.meet(IP2, P), atol=0.05)

    P = np.array([(-1.0, 0.0), (1.0, 0.5)])
    g = np.concatenate(list(GridSpec((-1.5, -3.0), (1.5, 0.5), 0.02).points()))
    Q = g[core.leq_array(EPI2, g[:, None, :], P[None, :, :]).all(axis=1)]
    assert np.allclose(core.join(EPI2, Q), core.meet(EPI2, P), atol=0.1)


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    Q = np.eye(3)
    Q[:2, :2] = [[c, -s], [s, c]]
    return Q


@given(st.floats(0, 2 * math.pi), st.integers(0, 2**16))
def test_isometry_equivariance(theta, seed):
    rng = np.random.default_rng(seed)
    Q = _rotation(theta)
    for spec in (SpongeSpec.epigraph(3, p=2), SpongeSpec.hyperbolic(3)):
        P = rng.normal(size=(4, 3))
        P[:, -1] = np.abs(P[:, -1]) + 0.3
        J = core.join(spec, P)
        assert np.allclose(core.join(spec, P @ Q.T), Q @ J, atol=1e-8)
