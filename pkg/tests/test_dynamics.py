import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twisted_chn.chn_model import ModelParams
from twisted_chn.dynamics import (
    ConditioningError,
    dH_frame,
    hamiltonian,
    integrate_flow,
    interior_residual,
    rk4_step,
    solve_interior,
    xh_closed,
    xh_solve,
)
from twisted_chn.contact import dH_of
from twisted_chn.sampling import on_level, random_phase_point
from twisted_chn.sasaki import PhasePoint, adapted_frame, frame_components


def test_hamiltonian_examples():
    params = ModelParams(1, 1.0)
    assert hamiltonian(params, PhasePoint([0.0, 0.0], [0.0, 0.0])) == 0.0
    assert hamiltonian(params, PhasePoint([0.0, 0.0], [0.5, 0.0])) == pytest.approx(0.5, abs=1e-15)


def test_hamiltonian_field_residual(params, rng):
    for _ in range(20):
        p = random_phase_point(params, rng)
        frame = adapted_frame(params, p)
        XH = xh_closed(params, p)
        assert interior_residual(params, p, XH, dH_frame(params, p, frame), frame) < params.tol_exact
        assert dH_of(params, p, XH, frame) == pytest.approx(0.0, abs=1e-12)


def test_solve_matches_closed_form(params, rng):
    for _ in range(20):
        p = random_phase_point(params, rng)
        frame = adapted_frame(params, p)
        diff = frame_components(params, p, xh_solve(params, p, frame), frame) - \
            frame_components(params, p, xh_closed(params, p), frame)
        assert np.linalg.norm(diff) < 1e-8


def test_solve_is_linear(params, rng):
    p = random_phase_point(params, rng)
    frame = adapted_frame(params, p)
    cov = dH_frame(params, p, frame)
    a = solve_interior(params, p, cov, frame).array()
    b = solve_interior(params, p, 3.5 * cov, frame).array()
    assert np.allclose(b, 3.5 * a, rtol=1e-10, atol=1e-12)


def test_critical_level_n1_solvable():
    params = ModelParams(1, 1.0)
    p = random_phase_point(params, np.random.default_rng(3), energy=1.0)
    frame = adapted_frame(params, p)
    diff = frame_components(params, p, xh_solve(params, p, frame), frame) - \
        frame_components(params, p, xh_closed(params, p), frame)
    assert np.linalg.norm(diff) < 1e-8


@pytest.mark.parametrize("n", [2, 3])
def test_critical_level_solve_raises(n):
    params = ModelParams(n, 2.0)
    p = random_phase_point(params, np.random.default_rng(3), energy=2.0)
    with pytest.raises(ConditioningError) as info:
        xh_solve(params, p)
    assert info.value.condition > 1e12


def test_geodesic_speed_conserved():
    params = ModelParams(2, 1.0)
    p0 = random_phase_point(params, np.random.default_rng(5), energy=1.0, radius=0.3)
    traj = integrate_flow(params, p0, 10.0, 1e-3, magnetic=False, record_every=50)
    speeds = np.sqrt(traj.energies)
    assert np.max(np.abs(speeds - speeds[0])) < 1e-8


def test_energy_drift():
    params = ModelParams(1, 1.0)
    p0 = on_level(params, [0.1, -0.2], [0.3, 1.0], 0.7)
    traj = integrate_flow(params, p0, 10.0, 1e-3, record_every=100)
    assert not traj.truncated
    assert traj.times[-1] == pytest.approx(10.0)
    assert traj.drift < 1e-7


@pytest.mark.parametrize("c, energy", [(1.0, 0.25), (3.0, 0.75), (0.5, 0.3)])
def test_bounded_orbit_n1(c, energy):
    """Below the critical level the n=1 orbit is a circle reaching |z| = sqrt(e/c) from the origin."""
    params = ModelParams(1, c)
    p0 = on_level(params, [0.0, 0.0], [1.0, 0.0], energy)
    traj = integrate_flow(params, p0, 50.0, 5e-3)
    assert not traj.truncated
    r = np.array([np.linalg.norm(s[1].x) for s in traj.samples])
    assert r.max() == pytest.approx(np.sqrt(energy / c), abs=1e-4)


def test_escaping_orbit_n1():
    params = ModelParams(1, 1.0)
    p0 = on_level(params, [0.0, 0.0], [1.0, 0.0], 4.0)
    traj = integrate_flow(params, p0, 50.0, 1e-3, record_every=10)
    assert traj.truncated and traj.stop_reason == "exit_radius"
    r = np.array([np.linalg.norm(s[1].x) for s in traj.samples])
    assert np.all(np.diff(r) > 0)
    assert traj.drift < 1e-7


def test_order_under_halving():
    params = ModelParams(2, 1.0)
    p0 = random_phase_point(params, np.random.default_rng(2), energy=0.8, radius=0.3)

    def endpoint(dt, T=1.0):
        s = p0.coords
        for _ in range(int(round(T / dt))):
            s = rk4_step(params, s, dt)
        return s

    ref = endpoint(0.0025)
    e1, e2 = (np.linalg.norm(endpoint(h) - ref) for h in (0.02, 0.01))
    assert 12 < e1 / e2 < 20


def test_integrate_argument_errors():
    params = ModelParams(1, 1.0)
    p0 = on_level(params, [0.0, 0.0], [1.0, 0.0], 1.0)
    with pytest.raises(ValueError):
        integrate_flow(params, p0, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate_flow(params, PhasePoint([0.96, 0.0], [1.0, 0.0]), 1.0)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 3), c=st.floats(0.2, 5.0), seed=st.integers(0, 2**31))
def test_short_flow_conserves_energy(n, c, seed):
    params = ModelParams(n, c)
    p0 = random_phase_point(params, np.random.default_rng(seed), radius=0.5, energy_range=(0.1, 2.0))
    traj = integrate_flow(params, p0, 0.2, 1e-3, record_every=20)
    assert traj.drift < 1e-7
