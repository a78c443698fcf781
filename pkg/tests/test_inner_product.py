import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from sponges import inner_product as ip
from sponges.base import DimensionMismatch
from sponges.core import SpongeSpec, brute_force_extremum
import oracles

coord = st.floats(-2, 2, allow_nan=False, allow_infinity=False)
# the conic oracle loses accuracy over huge dynamic ranges; keep comparisons well scaled
scaled = coord.filter(lambda v: v == 0.0 or abs(v) > 1e-3)


def points(dim, lo=1, hi=6, elements=coord):
    return st.lists(st.lists(elements, min_size=dim, max_size=dim), min_size=lo, max_size=hi).map(np.array)


# --- relation ---------------------------------------------------------------

@pytest.mark.parametrize("x,y,expected", [
    ((2, 0), (2, 1), True),
    ((2, 1), (1, 3), True),
    ((1, 0), (2, 0), True),
    ((2, 0), (1, 3), False),
    ((0, 0), (-5, 7), True),
])
def test_leq_examples(x, y, expected):
    assert ip.ip_leq(x, y) is expected


def test_leq_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        ip.ip_leq((1, 0), (1, 0, 0))


@pytest.mark.parametrize("x,y,expected", [((2, 0), (1, 1), True), ((3, -1), (0, 0), True), ((2, 0), (1, 3), False)])
def test_left_cone_examples(x, y, expected):
    assert ip.ip_left_cone_contains(x, y) is expected


@given(points(3, 2, 2))
def test_left_cone_is_reversed_relation(P):
    x, y = P
    assert ip.ip_left_cone_contains(x, y) == ip.ip_leq(y, x)


@given(points(2, 2, 2), st.floats(0.01, 0.99))
def test_strict_norm_growth(P, t):
    x, _ = P
    assume(np.linalg.norm(x) > 1e-3)
    # points of the form y = x + s*v with (x, v) >= 0 are right of x
    v = P[1] - (P[1] @ x) / (x @ x) * x
    y = x * (1 + t) + v
    assert ip.ip_leq(x, y)
    assert np.linalg.norm(x) < np.linalg.norm(y)


def test_no_cycles_on_samples(rng):
    X = rng.normal(size=(60, 2))
    M = ip.leq_array(X[:, None], X[None])
    np.fill_diagonal(M, False)
    # a strict orientation with norm growth has an acyclic comparability graph
    order = np.argsort(np.linalg.norm(X, axis=1))
    pos = np.empty_like(order)
    pos[order] = np.arange(len(order))
    i, j = np.nonzero(M)
    assert np.all(pos[i] < pos[j])


# --- meet ---------------------------------------------------------------------

@pytest.mark.parametrize("P,expected", [
    ([(2, 0), (0, 2)], (1, 1)),
    ([(-1, 0), (1, 0)], (0, 0)),
    ([(2, 0), (2, 1)], (2, 0)),
    ([(3, 4)], (3, 4)),
])
def test_meet_examples(P, expected):
    assert np.allclose(ip.ip_meet(P), expected, atol=1e-12)


@pytest.mark.parametrize("P,expected", [
    ([(2, 0), (0, 2)], (1, 1)),
    ([(3, 4)], (3, 4)),
    ([(1, 1), (2, 2), (1, 2)], (1, 1)),
])
def test_min_norm_point_examples(P, expected):
    r = ip.min_norm_point(P)
    assert np.allclose(r.point, expected, atol=1e-12)
    assert np.isclose(r.weights.sum(), 1.0) and np.all(r.weights >= 0)
    assert np.allclose(r.weights @ np.asarray(P, float), r.point)


@given(points(2, elements=scaled) | points(3, elements=scaled))
def test_meet_matches_hull_projection(P):
    m = ip.ip_meet(P)
    assert np.allclose(m, oracles.min_norm_hull(P), atol=1e-6)
    assert np.all(ip.leq_array(m, P))


@given(points(3), st.floats(0.1, 10))
def test_meet_scale_equivariance(P, lam):
    assert np.allclose(ip.ip_meet(lam * P), lam * ip.ip_meet(P), atol=1e-9 * lam * (1 + np.abs(P).max()))


@given(points(2, 2, 5))
def test_meet_certificate_in_hull(P):
    r = ip.min_norm_point(P)
    assert np.all(r.weights >= 0) and np.isclose(r.weights.sum(), 1.0)
    assert np.allclose(r.weights @ P, r.point, atol=1e-12)


# --- join ---------------------------------------------------------------------

@pytest.mark.parametrize("P,expected", [
    ([(1, 0), (0, 1)], (1, 1)),
    ([(3, 4)], (3, 4)),
    ([(0, 0), (3, 4)], (3, 4)),
    ([(1, 0), (-1, 0)], None),
])
def test_join_examples(P, expected):
    J = ip.ip_join(P)
    if expected is None:
        assert J is None
    else:
        assert np.allclose(J, expected, atol=1e-12)
        assert np.all(ip.leq_array(np.asarray(P, float), J))


@given(points(2, elements=scaled) | points(3, elements=scaled))
def test_join_matches_qp(P):
    J = ip.ip_join(P)
    ref = oracles.ip_join_qp(P)
    assert (J is None) == (ref is None)
    if J is not None:
        assert np.allclose(J, ref, atol=1e-6 * (1 + np.abs(ref).max()))
        assert np.all(ip.leq_array(P, J))


def test_join_handles_extreme_scales():
    assert ip.ip_join([(0.0, 4.2e-122), (0.0, -1.0)]) is None
    J = ip.ip_join([(1e-150, 0.0), (0.0, 1e-150)])
    assert np.allclose(J / 1e-150, [1.0, 1.0])


def test_dykstra_route_agrees(rng):
    for _ in range(20):
        P = rng.uniform(0.2, 2, size=(4, 2))
        assert np.allclose(ip.ip_join(P, method="dykstra", tol=1e-13), ip.ip_join(P), atol=1e-6)
    assert ip.ip_join([(1, 0), (-1, 0)], method="dykstra") is None


def test_join_below_sampled_right_bounds(rng):
    P = np.array([[1.0, 0.2], [0.3, 1.0], [0.8, 0.8]])
    J = ip.ip_join(P)
    U = rng.uniform(-4, 4, size=(20000, 2))
    U = U[np.all(ip.leq_array(P[None], U[:, None]), axis=1)]
    assert len(U) > 100
    assert np.all(ip.leq_array(J, U))


def test_join_agrees_with_grid_oracle(rng):
    spec = SpongeSpec.inner_product(2)
    for _ in range(5):
        P = rng.uniform(0.3, 1.5, size=(3, 2))
        J = ip.ip_join(P)
        G = brute_force_extremum(spec, P, side="join", step=0.01)
        assert np.max(np.abs(G - J)) <= 0.05


def test_right_cones_disjoint():
    assert ip.right_cones_disjoint((1, 0), (-2, 0))
    assert not ip.right_cones_disjoint((1, 0), (0, 1))
    assert not ip.right_cones_disjoint((0, 0), (-2, 0))


def test_halfspace_system_drops_zero_rows():
    sys = ip.HalfspaceSystem.from_points([(0, 0), (1, 2)])
    assert sys.normals.shape == (1, 2) and sys.offsets.tolist() == [5.0]
    assert sys.contains((1, 2)) and not sys.contains((0, 0))
