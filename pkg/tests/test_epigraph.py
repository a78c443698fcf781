import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from sponges import epigraph as epi
from sponges.base import DimensionMismatch, InvalidProfile
from sponges.core import SpongeSpec, brute_force_extremum
import oracles

SQ = epi.Profile(c=1.0, p=2.0)


def random_set(rng, n, dim, spread=1.5):
    return rng.uniform(-spread, spread, size=(n, dim))


# --- profile and frame ----------------------------------------------------

def test_profile_rejects_bad_parameters():
    for kw in ({"c": 0.0}, {"p": -1.0}, {"kind": "exp"}, {"c": np.inf}):
        with pytest.raises(InvalidProfile):
            epi.Profile(**kw)


def test_profile_json_round_trip():
    f = epi.Profile(c=0.5, p=3.0)
    assert epi.Profile.from_json(f.to_json()) == f


@pytest.mark.parametrize("p,dim,ok", [(1, 2, True), (1, 3, False), (2, 3, True), (1.5, 4, False), (3, 4, True)])
def test_analytic_acceptance(p, dim, ok):
    assert epi.Profile(p=p).accepts(dim) is ok


def test_decompose_examples():
    h, perp = epi.decompose((3, 4, 5))
    assert h == 5 and perp.tolist() == [3, 4]
    h, perp = epi.decompose((0, 0, 2.5))
    assert h == 2.5 and perp.tolist() == [0, 0]


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=5), st.integers(-5, 4))
def test_recompose_inverts_decompose(x, k):
    frame = epi.Frame(k % len(x))
    h, perp = epi.decompose(x, frame)
    assert epi.recompose(h, perp, frame).tolist() == list(map(float, x))


# --- relation ---------------------------------------------------------------

@pytest.mark.parametrize("x,y,expected", [((0, 0), (1, 2), True), ((0, 0), (2, 1), False), ((1, 1), (1, 1), True)])
def test_leq_examples(x, y, expected):
    assert epi.epi_leq(SQ, x, y) is expected


def test_leq_needs_dimension_two():
    with pytest.raises(DimensionMismatch):
        epi.epi_leq(SQ, (1,), (2,))


@given(st.integers(0, 10_000), st.sampled_from([1.0, 2.0, 3.0]))
def test_strict_h_monotonicity(seed, p):
    rng = np.random.default_rng(seed)
    f = epi.Profile(p=p)
    X = rng.normal(size=(40, 3))
    M = epi.leq_array(f, X[:, None], X[None])
    np.fill_diagonal(M, False)
    i, j = np.nonzero(M)
    assert np.all(X[i, -1] < X[j, -1])


# --- validation -----------------------------------------------------------

def test_validation_truth_table():
    assert epi.validate_profile(epi.Profile(p=2), 3).passed
    assert epi.validate_profile(epi.Profile(p=1), 2).passed
    rep = epi.validate_profile(epi.Profile(p=1), 3)
    assert "square-superadditive" in rep.failed_axioms()
    assert dict(rep.violations)["square-superadditive"] == (1.0, 1.0)
    # at the witness: f(sqrt 2) = sqrt 2 < f(1) + f(1) = 2
    assert np.sqrt(2) < 2


def test_sub_linear_profile_fails_in_plane():
    rep = epi.validate_profile(epi.Profile(p=0.5), 2)
    assert "superadditive" in rep.failed_axioms()


# --- joins ----------------------------------------------------------------

@pytest.mark.parametrize("x,y,expected", [
    ((-1, 0), (1, 0), (0, 1)),
    ((0, 0), (1, 0), (0.5, 0.25)),
    ((0, 0), (0, 3), (0, 3)),
])
def test_pair_join_examples(x, y, expected):
    J = epi.epi_join_pair(SQ, x, y)
    assert np.allclose(J, expected, atol=1e-12)
    assert epi.epi_leq(SQ, x, J) and epi.epi_leq(SQ, y, J)


def test_set_join_examples():
    assert np.allclose(epi.epi_join(SQ, [(-1, 0, 0), (1, 0, 0), (0, 1, 0)]), (0, 0, 1), atol=1e-12)
    assert np.allclose(epi.epi_join(SQ, [(2, 3, 4)]), (2, 3, 4))
    assert np.allclose(epi.epi_join(SQ, [(-1, 0), (1, 0)]), epi.epi_join_pair(SQ, (-1, 0), (1, 0)))


def test_meet_examples():
    assert np.allclose(epi.epi_meet(SQ, [(-1, 0), (1, 0)]), (0, -1), atol=1e-12)
    assert np.allclose(epi.epi_meet(SQ, [(0, 0), (1, 0)]), (0.5, -0.25), atol=1e-12)
    assert np.allclose(epi.epi_meet(SQ, [(7, 1)]), (7, 1))


def test_witness_examples():
    assert epi.epi_right_bound_witness(SQ, [(1, 0)]).tolist() == [0, 2]
    assert epi.epi_right_bound_witness(SQ, [(0, 3.5)]).tolist() == [0, 4.5]
    assert epi.epi_right_bound_witness(SQ, [(1, 0), (2, -1)]).tolist() == [0, 4]


def test_invalid_profile_is_rejected_by_solvers():
    with pytest.raises(InvalidProfile):
        epi.epi_join(epi.Profile(p=1), [(0, 0, 0), (1, 0, 0)])


@pytest.mark.parametrize("p,dim", [(1.0, 2), (1.5, 2), (2.0, 2), (2.0, 3), (3.0, 3), (2.5, 4)])
def test_join_matches_conic_program(p, dim, rng):
    f = epi.Profile(c=0.7, p=p)
    for n in (2, 3, 5):
        P = random_set(rng, n, dim)
        J = epi.epi_join(f, P)
        ref = oracles.epi_join_cvx(0.7, p, P)
        assert np.all(epi.leq_array(f, P, J))
        assert abs(J[-1] - ref[-1]) < 1e-6
        assert np.allclose(J, ref, atol=1e-3)


@given(st.integers(0, 10_000), st.integers(2, 4))
def test_join_translation_equivariance(seed, n):
    rng = np.random.default_rng(seed)
    P = random_set(rng, n, 3)
    v = rng.normal(size=3)
    assert np.allclose(epi.epi_join(SQ, P + v), epi.epi_join(SQ, P) + v, atol=1e-9)


@given(st.integers(0, 10_000))
def test_join_perp_rotation_equivariance(seed):
    rng = np.random.default_rng(seed)
    P = random_set(rng, 4, 3)
    a = rng.uniform(0, 2 * np.pi)
    Q = np.array([[np.cos(a), -np.sin(a), 0], [np.sin(a), np.cos(a), 0], [0, 0, 1]])
    assert np.allclose(epi.epi_join(SQ, P @ Q.T), Q @ epi.epi_join(SQ, P), atol=1e-9)


@given(st.integers(0, 10_000))
def test_pair_join_lies_in_vertical_plane(seed):
    rng = np.random.default_rng(seed)
    x, y = random_set(rng, 2, 4)
    f = epi.Profile(p=3.0)
    J = epi.epi_join_pair(f, x, y)
    # J_perp lies on the segment between x_perp and y_perp
    d = y[:-1] - x[:-1]
    t = (J[:-1] - x[:-1]) @ d / (d @ d)
    assert -1e-12 <= t <= 1 + 1e-12
    assert np.allclose(x[:-1] + t * d, J[:-1], atol=1e-9)


def test_join_is_lowest_right_bound(rng):
    f = epi.Profile(p=2.0)
    P = random_set(rng, 4, 3)
    J = epi.epi_join(f, P)
    W = epi.epi_right_bound_witness(f, P)
    U = rng.uniform(-2, 2, size=(5000, 3))
    U[:, -1] = rng.uniform(J[-1] - 1, W[-1], size=5000)
    U = U[np.all(epi.leq_array(f, P[None], U[:, None]), axis=1)][:1000]
    assert len(U) > 100
    assert np.all(J[-1] <= U[:, -1])
    assert np.all(epi.leq_array(f, J, U))


def test_join_agrees_with_grid_oracle(rng):
    spec = SpongeSpec.epigraph(2, p=2.0)
    for _ in range(3):
        P = random_set(rng, 3, 2, 1.0)
        G = brute_force_extremum(spec, P, side="join", step=0.005)
        assert np.max(np.abs(G - epi.epi_join(spec.profile, P))) <= 5 * 0.005


def test_linear_profile_gives_lattice_join(rng):
    f = epi.Profile(p=1.0)
    for _ in range(20):
        P = random_set(rng, 4, 2)
        u, v = P[:, 1] + P[:, 0], P[:, 1] - P[:, 0]
        lattice = np.array([(u.max() - v.max()) / 2, (u.max() + v.max()) / 2])
        assert np.allclose(epi.epi_join(f, P), lattice, atol=1e-8)
