"""The 1-form beta, its differential, and the twisted form omega = omega0 + d beta.

``beta_(x,v)(xi) = <Jv, K xi> / |v|^2`` on TM minus the zero section. Its
differential splits into a horizontal block ``Omega`` given by curvature and
a vertical block coming from the fibrewise form ``<Jv, w> / |v|^2``; the mixed
blocks vanish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chn_model import (
    ModelParams,
    christoffel,
    complex_structure,
    curvature_algebraic,
    curvature_algebraic_block,
    metric,
)
from .exterior import d_oneform
from .sasaki import (
    COORDINATE,
    SASAKI_FRAME,
    AdaptedFrame,
    PhasePoint,
    TangentTT,
    TwoFormMatrix,
    adapted_frame,
    change_basis,
    omega0_matrix,
    require_nonzero,
)


def beta(params: ModelParams, p: PhasePoint, xi: TangentTT) -> float:
    e = require_nonzero(params, p)
    G = metric(params, p.x)
    J = complex_structure(params)
    k = xi.to_sasaki(params, p).second
    return float((J @ p.v) @ G @ k) / e


def beta_covector(params: ModelParams, p: PhasePoint) -> np.ndarray:
    """Coordinate components of beta at ``p``.

    The dv-part is ``G Jv / |v|^2``; the dx-part picks up the Christoffel
    term of the connection map.
    """
    e = require_nonzero(params, p)
    G = metric(params, p.x)
    J = complex_structure(params)
    gamma_v = np.einsum("kij,j->ki", christoffel(params, p.x), p.v)
    w = G @ (J @ p.v) / e
    return np.concatenate([gamma_v.T @ w, w])


def omega_magnetic(params: ModelParams, p: PhasePoint, u, w) -> float:
    """Horizontal block ``Omega(u, w) = -R(v, Jv/|v|^2, u, w)``."""
    e = require_nonzero(params, p)
    J = complex_structure(params)
    return -curvature_algebraic(params, p.x, p.v, J @ p.v / e, u, w)


def dbeta_vertical(params: ModelParams, p: PhasePoint, u, w) -> float:
    """Vertical block of d beta evaluated on ``(0, u)`` and ``(0, w)``.

    Writing the fibre restriction as ``f * bbar`` with ``f = 1/|v|^2`` and
    ``bbar(w) = <Jv, w>``, the differential is ``df ^ bbar + f dbbar`` where
    ``dbbar(u, w) = 2 <Ju, w>``.
    """
    e = require_nonzero(params, p)
    G = metric(params, p.x)
    J = complex_structure(params)
    v, Jv = p.v, J @ p.v
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    df_wedge_bbar = (-2.0 / e**2) * ((v @ G @ u) * (Jv @ G @ w) - (v @ G @ w) * (Jv @ G @ u))
    return float(df_wedge_bbar + (2.0 / e) * ((J @ u) @ G @ w))


@dataclass(frozen=True)
class MagneticDecomposition:
    """d beta in the sasaki-frame basis together with its two diagonal blocks."""

    omega_h: np.ndarray
    dbeta_v: np.ndarray
    assembled: TwoFormMatrix
    frame: AdaptedFrame

    def mixed_block(self) -> np.ndarray:
        m = self.omega_h.shape[0]
        return self.assembled.matrix[:m, m:]


def dbeta_vertical_block(params: ModelParams, p: PhasePoint, U) -> np.ndarray:
    """Matrix of :func:`dbeta_vertical` over the columns of ``U``."""
    e = require_nonzero(params, p)
    G = metric(params, p.x)
    J = complex_structure(params)
    U = np.asarray(U, dtype=float)
    a = U.T @ G @ p.v
    b = U.T @ G @ (J @ p.v)
    return (-2.0 / e**2) * (np.outer(a, b) - np.outer(b, a)) + (2.0 / e) * ((J @ U).T @ G @ U)


def assemble_dbeta(params: ModelParams, p: PhasePoint, frame: AdaptedFrame | None = None) -> MagneticDecomposition:
    e = require_nonzero(params, p)
    if frame is None:
        frame = adapted_frame(params, p)
    F = frame.vectors
    J = complex_structure(params)
    omega_h = -curvature_algebraic_block(params, p.x, p.v, J @ p.v / e, F)
    dbeta_v = dbeta_vertical_block(params, p, F)
    m = params.dim
    zero = np.zeros((m, m))
    assembled = TwoFormMatrix(SASAKI_FRAME, np.block([[omega_h, zero], [zero, dbeta_v]]))
    return MagneticDecomposition(omega_h, dbeta_v, assembled, frame)


def dbeta_fd_oracle(params: ModelParams, p: PhasePoint) -> TwoFormMatrix:
    """d beta by central differences of the coordinate components of beta."""
    require_nonzero(params, p)
    m = params.dim

    def field(q):
        return beta_covector(params, PhasePoint(q[:m], q[m:]))

    return TwoFormMatrix(COORDINATE, d_oneform(field, p.coords, params.fd_step))


def omega_total(params: ModelParams, p: PhasePoint, basis: str = SASAKI_FRAME,
                frame: AdaptedFrame | None = None) -> TwoFormMatrix:
    """``omega = omega0 + d beta`` in the requested basis."""
    if frame is None:
        frame = adapted_frame(params, p)
    total = omega0_matrix(params, p, SASAKI_FRAME) + assemble_dbeta(params, p, frame).assembled
    return change_basis(params, p, total, basis, frame)


def pfaffian(A: np.ndarray) -> float:
    """Pfaffian of an antisymmetric matrix via skew Gaussian elimination."""
    A = np.array(A, dtype=float)
    m = A.shape[0]
    if m % 2:
        return 0.0
    result = 1.0
    for k in range(0, m - 1, 2):
        piv = k + 1 + int(np.argmax(np.abs(A[k, k + 1:])))
        if piv != k + 1:
            A[[k + 1, piv]] = A[[piv, k + 1]]
            A[:, [k + 1, piv]] = A[:, [piv, k + 1]]
            result = -result
        if A[k, k + 1] == 0.0:
            return 0.0
        result *= A[k, k + 1]
        if k + 2 < m:
            tau = A[k, k + 2:] / A[k, k + 1]
            A[k + 2:, k + 2:] += np.outer(tau, A[k + 2:, k + 1]) - np.outer(A[k + 2:, k + 1], tau)
    return float(result)


def kahler_pullback(params: ModelParams, p: PhasePoint, frame: AdaptedFrame | None = None) -> TwoFormMatrix:
    """Pullback of the Kahler form ``<J., .>`` under ``pi``, in the sasaki-frame basis."""
    if frame is None:
        frame = adapted_frame(params, p)
    G = metric(params, p.x)
    J = complex_structure(params)
    F = frame.vectors
    m = params.dim
    zero = np.zeros((m, m))
    return TwoFormMatrix(SASAKI_FRAME, np.block([[(J @ F).T @ G @ F, zero], [zero, zero]]))
