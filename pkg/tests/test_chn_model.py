import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twisted_chn.chn_model import (
    DomainError,
    ModelParams,
    christoffel,
    christoffel_contract,
    complex_structure,
    curvature_algebraic,
    curvature_algebraic_block,
    curvature_numeric,
    curvature_operator,
    geodesic_acceleration,
    holomorphic_sectional_curvature,
    metric,
    metric_derivative,
    riemann_numeric,
)
from twisted_chn.exterior import jacobian_fd
from twisted_chn.sampling import random_base_point, random_unit_vector
from twisted_chn.verify import christoffel_from_fd_metric


def hermitian_metric(c, x):
    """Independent route: the complex Hermitian matrix, then its real form."""
    z = x[0::2] + 1j * x[1::2]
    r2 = np.vdot(z, z).real
    H = (4.0 / c) * ((1 - r2) * np.eye(z.size) + np.outer(z, z.conj())) / (1 - r2) ** 2
    n = z.size
    G = np.zeros((2 * n, 2 * n))
    for i in range(n):
        for j in range(n):
            P, Q = H[i, j].real, H[i, j].imag
            G[2 * i:2 * i + 2, 2 * j:2 * j + 2] = [[P, -Q], [Q, P]]
    return G


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(0, 1.0)
    with pytest.raises(ValueError):
        ModelParams(1, -1.0)
    with pytest.raises(ValueError):
        ModelParams(1, 1.0, fd_step=2.0)


@pytest.mark.parametrize("n, c, x, expected", [
    (1, 1.0, [0.0, 0.0], 4.0 * np.eye(2)),
    (2, 2.0, [0.0] * 4, 2.0 * np.eye(4)),
    (1, 1.0, [0.5, 0.0], (4 / 0.75**2) * np.eye(2)),
])
def test_metric_examples(n, c, x, expected):
    assert np.allclose(metric(ModelParams(n, c), x), expected, atol=1e-12)


def test_metric_n1_value():
    assert metric(ModelParams(1, 1.0), [0.5, 0.0])[0, 0] == pytest.approx(7.1111111111, rel=1e-9)


def test_metric_matches_hermitian_form(params, rng):
    for _ in range(20):
        x = random_base_point(params, rng)
        assert np.allclose(metric(params, x), hermitian_metric(params.c, x), rtol=1e-12)


def test_metric_spd(params, rng):
    for _ in range(20):
        G = metric(params, random_base_point(params, rng))
        assert np.allclose(G, G.T, atol=1e-12)
        assert np.linalg.eigvalsh(G).min() > 0


def test_metric_out_of_domain():
    with pytest.raises(DomainError):
        metric(ModelParams(1, 1.0), [1.0, 0.0])
    with pytest.raises(DomainError):
        christoffel(ModelParams(2, 1.0), [0.8, 0.0, 0.7, 0.0])


def test_complex_structure(params, rng):
    J = complex_structure(params)
    assert np.array_equal(J @ J, -np.eye(params.dim))
    assert np.array_equal(J[:2, :2], [[0, -1], [1, 0]])
    x = random_base_point(params, rng)
    G = metric(params, x)
    X, Y = rng.normal(size=(2, params.dim))
    assert (J @ X) @ G @ (J @ Y) == pytest.approx(X @ G @ Y, rel=1e-12)


def test_metric_derivative_matches_fd(params, rng):
    x = random_base_point(params, rng)
    fd = jacobian_fd(lambda y: metric(params, y), x, 1e-5)
    assert np.allclose(metric_derivative(params, x), fd, atol=1e-7)


def test_christoffel_vanishes_at_origin(params):
    origin = np.zeros(params.dim)
    assert np.max(np.abs(christoffel(params, origin))) == 0.0
    assert np.max(np.abs(christoffel_from_fd_metric(params, origin))) < 1e-10


def test_christoffel_torsion_free_and_compatible(params, rng):
    x = random_base_point(params, rng)
    gamma = christoffel(params, x)
    assert np.allclose(gamma, np.transpose(gamma, (0, 2, 1)), atol=1e-13)
    # d_k G_ij = Gamma^l_ki G_lj + Gamma^l_kj G_il
    G = metric(params, x)
    dG = jacobian_fd(lambda y: metric(params, y), x, params.fd_step)
    compat = np.einsum("lki,lj->kij", gamma, G) + np.einsum("lkj,il->kij", gamma, G)
    assert np.max(np.abs(dG - compat)) < params.tol_fd * (1 + np.max(np.abs(dG)))


def test_nabla_J_vanishes(params, rng):
    J = complex_structure(params)
    gamma = christoffel_from_fd_metric(params, random_base_point(params, rng))
    nablaJ = np.einsum("akc,cb->kab", gamma, J) - np.einsum("ac,ckb->kab", J, gamma)
    assert np.max(np.abs(nablaJ)) < params.tol_fd


def test_algebraic_holomorphic_curvature(params, rng):
    x = random_base_point(params, rng)
    X = random_unit_vector(params, rng, x)
    J = complex_structure(params)
    assert curvature_algebraic(params, x, X, J @ X, X, J @ X) == pytest.approx(-params.c, rel=1e-12)


def test_algebraic_totally_real_plane():
    params = ModelParams(2, 1.7)
    x = np.array([0.1, -0.2, 0.3, 0.05])
    G = metric(params, x)
    J = complex_structure(params)
    X = np.array([1.0, 0, 0, 0])
    X /= np.sqrt(X @ G @ X)
    Y = np.array([0, 0, 1.0, 0])
    for f in (X, J @ X):
        Y = Y - (f @ G @ Y) * f
    Y /= np.sqrt(Y @ G @ Y)
    assert curvature_algebraic(params, x, X, Y, X, Y) == pytest.approx(-params.c / 4, rel=1e-12)


def test_algebraic_symmetries(params, rng):
    x = random_base_point(params, rng)
    X, Y, Z, W = rng.normal(size=(4, params.dim))
    R = curvature_algebraic(params, x, X, Y, Z, W)
    assert R == pytest.approx(-curvature_algebraic(params, x, Y, X, Z, W), abs=1e-10)
    assert R == pytest.approx(-curvature_algebraic(params, x, X, Y, W, Z), abs=1e-10)
    assert R == pytest.approx(curvature_algebraic(params, x, Z, W, X, Y), abs=1e-10)


def test_block_and_operator_agree_with_scalar(params, rng):
    x = random_base_point(params, rng)
    G = metric(params, x)
    X, Y, Z, W = rng.normal(size=(4, params.dim))
    U = rng.normal(size=(params.dim, 3))
    block = curvature_algebraic_block(params, x, X, Y, U)
    for i in range(3):
        for j in range(3):
            assert block[i, j] == pytest.approx(curvature_algebraic(params, x, X, Y, U[:, i], U[:, j]), abs=1e-10)
    op = curvature_operator(params, x, X, Y, Z)
    assert op @ G @ W == pytest.approx(-curvature_algebraic(params, x, X, Y, Z, W), abs=1e-10)


def test_numeric_at_origin():
    for n, c in [(1, 1.0), (2, 2.5)]:
        params = ModelParams(n, c)
        x = np.zeros(params.dim)
        e1 = np.eye(params.dim)[0] * np.sqrt(c) / 2
        Je1 = complex_structure(params) @ e1
        assert curvature_numeric(params, x, e1, Je1, e1, Je1) == pytest.approx(-c, abs=params.tol_fd)


def test_numeric_matches_algebraic(params, rng):
    for _ in range(10):
        x = random_base_point(params, rng)
        Rm = riemann_numeric(params, x)
        X, Y, Z, W = (random_unit_vector(params, rng, x) for _ in range(4))
        alg = curvature_algebraic(params, x, X, Y, Z, W)
        num = curvature_numeric(params, x, X, Y, Z, W, riemann=Rm)
        assert abs(num - alg) / (1 + abs(alg)) < params.tol_fd
        assert num == pytest.approx(curvature_numeric(params, x, Z, W, X, Y, riemann=Rm), abs=params.tol_fd)


def test_numeric_near_boundary_rejected():
    with pytest.raises(DomainError):
        riemann_numeric(ModelParams(1, 1.0, fd_step=0.1), [0.95, 0.0])


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(1, 3),
    c=st.floats(0.2, 5.0),
    seed=st.integers(0, 2**31),
)
def test_holomorphic_sectional_constant(n, c, seed):
    params = ModelParams(n, c)
    rng = np.random.default_rng(seed)
    x = random_base_point(params, rng)
    X = rng.normal(size=params.dim)
    assert holomorphic_sectional_curvature(params, x, X) == pytest.approx(-c, rel=1e-10)
    assert holomorphic_sectional_curvature(params, x, X, numeric=True) == pytest.approx(-c, rel=1e-5)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 3), seed=st.integers(0, 2**31))
def test_geodesic_acceleration_matches_tensor(n, seed):
    params = ModelParams(n, 1.3)
    rng = np.random.default_rng(seed)
    x = random_base_point(params, rng, radius=0.9)
    v = rng.normal(size=params.dim)
    full = christoffel_contract(christoffel(params, x), v, v)
    assert np.allclose(geodesic_acceleration(params, x, v), full, rtol=1e-10, atol=1e-10)
