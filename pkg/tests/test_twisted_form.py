import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twisted_chn.chn_model import DomainError, ModelParams, complex_structure, metric
from twisted_chn.sampling import random_phase_point
from twisted_chn.sasaki import (
    COORDINATE,
    SASAKI_FRAME,
    BasisMismatchError,
    PhasePoint,
    adapted_frame,
    change_basis,
    horizontal_lift,
    vertical,
)
from twisted_chn.twisted_form import (
    assemble_dbeta,
    beta,
    dbeta_fd_oracle,
    dbeta_vertical,
    kahler_pullback,
    omega_magnetic,
    omega_total,
    pfaffian,
)
from twisted_chn.verify import closedness_residual, expected_omega_block


def test_beta_examples(params, rng):
    p = random_phase_point(params, rng)
    J = complex_structure(params)
    assert beta(params, p, horizontal_lift(params, p, rng.normal(size=params.dim))) == pytest.approx(0, abs=1e-13)
    assert beta(params, p, vertical(J @ p.v)) == pytest.approx(1.0, rel=1e-12)
    assert beta(params, p, vertical(p.v)) == pytest.approx(0.0, abs=1e-13)


def test_beta_zero_section():
    params = ModelParams(1, 1.0)
    p = PhasePoint([0.1, 0.2], [0.0, 0.0])
    with pytest.raises(DomainError):
        beta(params, p, vertical([1.0, 0.0]))
    with pytest.raises(DomainError):
        assemble_dbeta(params, p)


def test_omega_magnetic_frame_entries(params, rng):
    p = random_phase_point(params, rng)
    F = adapted_frame(params, p)
    c = params.c
    assert omega_magnetic(params, p, F[0], F[1]) == pytest.approx(c, rel=1e-10)
    for i in range(1, params.n):
        assert omega_magnetic(params, p, F[2 * i], F[2 * i + 1]) == pytest.approx(c / 2, rel=1e-10)
        assert omega_magnetic(params, p, F[0], F[2 * i]) == pytest.approx(0, abs=1e-10)
        assert omega_magnetic(params, p, F[0], F[2 * i + 1]) == pytest.approx(0, abs=1e-10)


def test_frozen_block_n2():
    """Omega entries {0.5, 0.25} for n = 2, c = 0.5."""
    params = ModelParams(2, 0.5)
    p = PhasePoint([0.1, -0.3, 0.2, 0.05], [0.7, 0.2, -0.4, 1.1])
    omega_h = assemble_dbeta(params, p).omega_h
    assert omega_h[0, 1] == pytest.approx(0.5, abs=1e-10)
    assert omega_h[2, 3] == pytest.approx(0.25, abs=1e-10)
    assert np.max(np.abs(omega_h - expected_omega_block(params))) < 1e-10


def test_dbeta_vertical_examples():
    params = ModelParams(2, 1.0)
    p = PhasePoint([0.2, 0.1, -0.1, 0.3], [0.5, -0.2, 0.3, 0.4])
    F = adapted_frame(params, p)
    w = np.random.default_rng(0).normal(size=4)
    assert dbeta_vertical(params, p, p.v, w) == pytest.approx(0, abs=1e-12)
    assert dbeta_vertical(params, p, complex_structure(params) @ p.v, w) == pytest.approx(0, abs=1e-12)
    e = p.v @ metric(params, p.x) @ p.v
    assert dbeta_vertical(params, p, F[2], F[3]) == pytest.approx(2 / e, rel=1e-12)


def test_decomposition_blocks(params, rng):
    p = random_phase_point(params, rng)
    dec = assemble_dbeta(params, p)
    assert np.max(np.abs(dec.mixed_block())) == 0.0
    assert np.max(np.abs(dec.dbeta_v[:2])) < 1e-10
    if params.n == 1:
        assert np.max(np.abs(dec.dbeta_v)) < 1e-10
        target = params.c * kahler_pullback(params, p, dec.frame).matrix
        assert np.max(np.abs(dec.assembled.matrix - target)) < 1e-10


def test_fd_oracle(params, rng):
    for _ in range(5):
        p = random_phase_point(params, rng)
        fd = dbeta_fd_oracle(params, p)
        assert fd.basis == COORDINATE
        assert np.max(np.abs(fd.matrix + fd.matrix.T)) < 1e-12
        frame = adapted_frame(params, p)
        assert change_basis(params, p, fd, SASAKI_FRAME, frame).max_abs_diff(
            assemble_dbeta(params, p, frame).assembled) < params.tol_fd


def test_basis_mismatch_is_hard_error(params, rng):
    p = random_phase_point(params, rng)
    with pytest.raises(BasisMismatchError):
        omega_total(params, p) - dbeta_fd_oracle(params, p)


def test_omega_closed(params, rng):
    assert closedness_residual(params, random_phase_point(params, rng)) < params.tol_fd


@pytest.mark.parametrize("m", [2, 4, 6])
def test_pfaffian_known(m):
    A = np.zeros((m, m))
    vals = np.arange(1, m // 2 + 1, dtype=float)
    for i, a in enumerate(vals):
        A[2 * i, 2 * i + 1], A[2 * i + 1, 2 * i] = a, -a
    assert pfaffian(A) == pytest.approx(np.prod(vals))
    assert pfaffian(np.zeros((3, 3))) == 0.0


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 3), c=st.floats(0.2, 5.0), seed=st.integers(0, 2**31))
def test_pfaffian_squared_is_det(n, c, seed):
    params = ModelParams(n, c)
    W = omega_total(params, random_phase_point(params, np.random.default_rng(seed))).matrix
    det = np.linalg.det(W)
    assert pfaffian(W) ** 2 == pytest.approx(det, rel=1e-8, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 3), c=st.floats(0.2, 5.0), ratio=st.floats(0.1, 10.0), seed=st.integers(0, 2**31))
def test_determinant_law(n, c, ratio, seed):
    """det omega = (1 - c/|v|^2)^(2(n-1)) in the orthonormal frame."""
    params = ModelParams(n, c)
    p = random_phase_point(params, np.random.default_rng(seed), energy=ratio * c)
    det = np.linalg.det(omega_total(params, p).matrix)
    assert det == pytest.approx((1 - 1 / ratio) ** (2 * (n - 1)), rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_degenerate_on_critical_level(n):
    """At |v|^2 = c and n >= 2 the frame vector (v1, (c/2) Jv1) lies in the kernel."""
    params = ModelParams(n, 1.0)
    p = random_phase_point(params, np.random.default_rng(1), energy=1.0)
    W = omega_total(params, p).matrix
    k = np.zeros(2 * params.dim)
    k[2], k[params.dim + 3] = 1.0, params.c / 2
    assert np.max(np.abs(k @ W)) < 1e-12
    assert abs(np.linalg.det(W)) < 1e-12
