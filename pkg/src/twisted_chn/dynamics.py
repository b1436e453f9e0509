"""Kinetic-energy Hamiltonian, its vector field for the twisted form, and the flow."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chn_model import ModelParams, complex_structure, geodesic_acceleration, metric
from .sasaki import (
    SASAKI,
    AdaptedFrame,
    PhasePoint,
    TangentTT,
    adapted_frame,
    frame_components,
    from_frame_components,
    norm2,
    require_nonzero,
)
from .twisted_form import omega_total

# condition number above which a dense solve against omega is refused
MAX_CONDITION = 1e12


class ConditioningError(np.linalg.LinAlgError):
    """omega is singular or too ill-conditioned at the requested point."""

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


def hamiltonian(params: ModelParams, p: PhasePoint) -> float:
    return 0.5 * norm2(params, p)


def dH_frame(params: ModelParams, p: PhasePoint, frame: AdaptedFrame | None = None) -> np.ndarray:
    """``dH(xi) = <v, K xi>`` as a covector in the sasaki-frame basis."""
    if frame is None:
        frame = adapted_frame(params, p)
    G = metric(params, p.x)
    m = params.dim
    return np.concatenate([np.zeros(m), frame.vectors.T @ G @ p.v])


def xh_closed(params: ModelParams, p: PhasePoint) -> TangentTT:
    """Hamiltonian vector field ``(v, c Jv)`` in the Sasaki split."""
    require_nonzero(params, p)
    J = complex_structure(params)
    return TangentTT(SASAKI, p.v.copy(), params.c * (J @ p.v))


def solve_interior(params: ModelParams, p: PhasePoint, covector, frame: AdaptedFrame | None = None) -> TangentTT:
    """Solve ``omega(xi, .) = covector`` (covector in sasaki-frame components)."""
    if frame is None:
        frame = adapted_frame(params, p)
    W = omega_total(params, p, frame=frame).matrix
    cond = float(np.linalg.cond(W))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise ConditioningError("omega is degenerate at this phase point", cond)
    # omega(xi, eta) = xi^T W eta, so i_xi omega = W^T xi
    comps = np.linalg.solve(W.T, np.asarray(covector, dtype=float))
    return from_frame_components(params, p, comps, frame)


def xh_solve(params: ModelParams, p: PhasePoint, frame: AdaptedFrame | None = None) -> TangentTT:
    """Hamiltonian vector field by a dense solve of ``i_X omega = dH``."""
    require_nonzero(params, p)
    if frame is None:
        frame = adapted_frame(params, p)
    return solve_interior(params, p, dH_frame(params, p, frame), frame)


def interior_residual(params: ModelParams, p: PhasePoint, xi: TangentTT, covector,
                      frame: AdaptedFrame | None = None) -> float:
    """``|i_xi omega - covector|`` with everything in the sasaki-frame basis."""
    if frame is None:
        frame = adapted_frame(params, p)
    W = omega_total(params, p, frame=frame).matrix
    comps = frame_components(params, p, xi, frame)
    return float(np.linalg.norm(comps @ W - np.asarray(covector)))


def flow_rhs(params: ModelParams, state: np.ndarray, magnetic: bool = True) -> np.ndarray:
    """Coordinate ODE ``x' = v``, ``v' = c Jv - Gamma_x(v, v)``."""
    m = params.dim
    x, v = state[:m], state[m:]
    acc = -geodesic_acceleration(params, x, v)
    if magnetic:
        # J(v_x, v_y) = (-v_y, v_x) pairwise
        acc[0::2] -= params.c * v[1::2]
        acc[1::2] += params.c * v[0::2]
    return np.concatenate([v, acc])


def rk4_step(params: ModelParams, state: np.ndarray, dt: float, magnetic: bool = True) -> np.ndarray:
    k1 = flow_rhs(params, state, magnetic)
    k2 = flow_rhs(params, state + 0.5 * dt * k1, magnetic)
    k3 = flow_rhs(params, state + 0.5 * dt * k2, magnetic)
    k4 = flow_rhs(params, state + dt * k3, magnetic)
    return state + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass
class Trajectory:
    """Samples ``(t, PhasePoint, energy)`` of an integrated orbit.

    ``energy`` is ``|v|^2``; ``drift`` is the largest relative deviation from
    the initial energy seen along the orbit.
    """

    samples: list = field(default_factory=list)
    dt: float = 0.0
    integrator: str = "rk4"
    truncated: bool = False
    stop_reason: str = ""

    @property
    def energies(self) -> np.ndarray:
        return np.array([s[2] for s in self.samples])

    @property
    def times(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def drift(self) -> float:
        E = self.energies
        return float(np.max(np.abs(E - E[0])) / E[0])

    @property
    def final(self) -> PhasePoint:
        return self.samples[-1][1]


def integrate_flow(params: ModelParams, p0: PhasePoint, T: float, dt: float = 1e-3,
                   magnetic: bool = True, exit_radius: float = 0.95,
                   record_every: int = 1) -> Trajectory:
    """Fixed-step RK4 integration of the magnetic (or geodesic) flow.

    Integration stops early, with ``truncated`` set, when ``|z|`` reaches
    ``exit_radius`` or a nonfinite value appears.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not T >= 0:
        raise ValueError("T must be non-negative")
    m = params.dim
    if not np.sqrt(p0.x @ p0.x) < exit_radius:
        raise ValueError("initial point lies outside the integration region")
    require_nonzero(params, p0)
    steps = int(round(T / dt))
    state = p0.coords.copy()
    traj = Trajectory(dt=dt)
    traj.samples.append((0.0, p0, norm2(params, p0)))
    accepted = 0
    for i in range(1, steps + 1):
        new = rk4_step(params, state, dt, magnetic)
        if not np.all(np.isfinite(new)):
            traj.truncated, traj.stop_reason = True, "nonfinite"
            break
        if np.sqrt(new[:m] @ new[:m]) >= exit_radius:
            traj.truncated, traj.stop_reason = True, "exit_radius"
            break
        state, accepted = new, i
        if i % record_every == 0 or i == steps:
            p = PhasePoint(state[:m].copy(), state[m:].copy())
            traj.samples.append((i * dt, p, norm2(params, p)))
    if traj.truncated and accepted and traj.samples[-1][0] != accepted * dt:
        p = PhasePoint(state[:m].copy(), state[m:].copy())
        traj.samples.append((accepted * dt, p, norm2(params, p)))
    return traj
