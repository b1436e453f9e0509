"""Pointwise geometry of the tangent bundle TM.

A tangent vector to TM at ``(x, v)`` is stored either in coordinates
``(dx, dv)`` or in the Sasaki split ``(pi_* xi, K xi)``. ``K`` is the
connection map ``dv + Gamma_x(dx, v)``, whose kernel is the horizontal
subbundle. Two-form matrices carry a basis tag: ``"coordinate"`` refers to
``(d/dx_1, ..., d/dx_2n, d/dv_1, ..., d/dv_2n)``, ``"sasaki-frame"`` to the
horizontal lifts of an adapted frame followed by its vertical copies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chn_model import (
    DomainError,
    ModelParams,
    christoffel,
    christoffel_contract,
    complex_structure,
    metric,
)

COORDINATE = "coordinate"
SASAKI = "sasaki"
SASAKI_FRAME = "sasaki-frame"

# candidates whose residual norm falls below this are dropped during frame extension
FRAME_DEPENDENCE_THRESHOLD = 1e-8


class BasisMismatchError(ValueError):
    """Two objects expressed in different bases were combined."""


@dataclass(frozen=True)
class PhasePoint:
    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        if self.x.shape != self.v.shape or self.x.ndim != 1:
            raise ValueError("x and v must be 1-d arrays of equal length")

    @property
    def coords(self) -> np.ndarray:
        return np.concatenate([self.x, self.v])

    @classmethod
    def from_coords(cls, q) -> "PhasePoint":
        q = np.asarray(q, dtype=float)
        m = q.size // 2
        return cls(q[:m], q[m:])


@dataclass(frozen=True)
class TangentTT:
    """Tangent vector to TM; ``rep`` is ``"coordinate"`` or ``"sasaki"``."""

    rep: str
    first: np.ndarray
    second: np.ndarray

    def __post_init__(self):
        if self.rep not in (COORDINATE, SASAKI):
            raise ValueError(f"unknown representation {self.rep!r}")
        object.__setattr__(self, "first", np.asarray(self.first, dtype=float))
        object.__setattr__(self, "second", np.asarray(self.second, dtype=float))

    def to_sasaki(self, params: ModelParams, p: PhasePoint) -> "TangentTT":
        if self.rep == SASAKI:
            return self
        gamma = christoffel(params, p.x)
        return TangentTT(SASAKI, self.first, self.second + christoffel_contract(gamma, self.first, p.v))

    def to_coordinate(self, params: ModelParams, p: PhasePoint) -> "TangentTT":
        if self.rep == COORDINATE:
            return self
        gamma = christoffel(params, p.x)
        return TangentTT(COORDINATE, self.first, self.second - christoffel_contract(gamma, self.first, p.v))

    def array(self) -> np.ndarray:
        return np.concatenate([self.first, self.second])


def vertical(u) -> TangentTT:
    """The vertical vector ``(0, u)``; identical in both representations."""
    u = np.asarray(u, dtype=float)
    return TangentTT(SASAKI, np.zeros_like(u), u)


@dataclass(frozen=True)
class AdaptedFrame:
    """Columns ``[v0, Jv0, v1, Jv1, ...]``, orthonormal for ``metric(x)``."""

    vectors: np.ndarray

    def __getitem__(self, i) -> np.ndarray:
        return self.vectors[:, i]

    def __len__(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class TwoFormMatrix:
    basis: str
    matrix: np.ndarray

    def __post_init__(self):
        if self.basis not in (COORDINATE, SASAKI_FRAME):
            raise ValueError(f"unknown basis {self.basis!r}")
        M = np.asarray(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("two-form matrix must be square")
        scale = max(1.0, float(np.max(np.abs(M), initial=0.0)))
        if np.max(np.abs(M + M.T), initial=0.0) > 1e-8 * scale:
            raise ValueError("two-form matrix is not antisymmetric")
        object.__setattr__(self, "matrix", M)

    def _check(self, other: "TwoFormMatrix"):
        if self.basis != other.basis:
            raise BasisMismatchError(f"cannot combine {self.basis!r} with {other.basis!r}")

    def __add__(self, other: "TwoFormMatrix") -> "TwoFormMatrix":
        self._check(other)
        return TwoFormMatrix(self.basis, self.matrix + other.matrix)

    def __sub__(self, other: "TwoFormMatrix") -> "TwoFormMatrix":
        self._check(other)
        return TwoFormMatrix(self.basis, self.matrix - other.matrix)

    def max_abs_diff(self, other: "TwoFormMatrix") -> float:
        self._check(other)
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def __call__(self, a, b) -> float:
        return float(np.asarray(a) @ self.matrix @ np.asarray(b))


def norm2(params: ModelParams, p: PhasePoint) -> float:
    """Squared metric norm ``|v|^2`` at ``x``."""
    return float(p.v @ metric(params, p.x) @ p.v)


def require_nonzero(params: ModelParams, p: PhasePoint) -> float:
    e = norm2(params, p)
    if not e > 0:
        raise DomainError("v = 0: the 1-form beta is only defined off the zero section")
    return e


def connection_map(params: ModelParams, p: PhasePoint, xi: TangentTT) -> np.ndarray:
    """Vertical part ``K xi = dv + Gamma_x(dx, v)``.

    Called the curvature operator in some references; it is the connection map.
    """
    return xi.to_sasaki(params, p).second


def projection(xi: TangentTT) -> np.ndarray:
    """``pi_* xi``, the same in both representations."""
    return xi.first


def horizontal_lift(params: ModelParams, p: PhasePoint, u) -> TangentTT:
    u = np.asarray(u, dtype=float)
    gamma = christoffel(params, p.x)
    return TangentTT(COORDINATE, u, -christoffel_contract(gamma, u, p.v))


def sasaki_inner(params: ModelParams, p: PhasePoint, xi: TangentTT, eta: TangentTT) -> float:
    G = metric(params, p.x)
    a = xi.to_sasaki(params, p)
    b = eta.to_sasaki(params, p)
    return float(a.first @ G @ b.first + a.second @ G @ b.second)


def omega0(params: ModelParams, p: PhasePoint, xi: TangentTT, eta: TangentTT) -> float:
    """``omega0(xi, eta) = <pi_* xi, K eta> - <K xi, pi_* eta>``."""
    G = metric(params, p.x)
    a = xi.to_sasaki(params, p)
    b = eta.to_sasaki(params, p)
    return float(a.first @ G @ b.second - a.second @ G @ b.first)


def liouville(params: ModelParams, p: PhasePoint, xi: TangentTT) -> float:
    """``lambda(xi) = -<v, pi_* xi>``."""
    return -float(p.v @ metric(params, p.x) @ xi.first)


def liouville_covector(params: ModelParams, p: PhasePoint) -> np.ndarray:
    """Coordinate components of the Liouville form, ``(-G v, 0)``."""
    return np.concatenate([-metric(params, p.x) @ p.v, np.zeros(p.v.size)])


def almost_cx_W(params: ModelParams, p: PhasePoint, xi: TangentTT) -> TangentTT:
    """``W(xi_h, xi_v) = (-xi_v, xi_h)`` in the Sasaki split."""
    s = xi.to_sasaki(params, p)
    return TangentTT(SASAKI, -s.second, s.first)


def adapted_frame(params: ModelParams, p: PhasePoint) -> AdaptedFrame:
    """J-adapted orthonormal frame starting at ``v / |v|``.

    The frame is completed by running coordinate vectors ``e_0, e_1, ...``
    through Gram-Schmidt against every vector chosen so far; each accepted
    candidate contributes itself and its J-image.
    """
    G = metric(params, p.x)
    J = complex_structure(params)
    e = float(p.v @ G @ p.v)
    if not e > 0:
        raise DomainError("adapted frame is undefined at v = 0")
    v0 = p.v / np.sqrt(e)
    vectors = [v0, J @ v0]
    for k in range(params.dim):
        if len(vectors) == params.dim:
            break
        cand = np.zeros(params.dim)
        cand[k] = 1.0
        for f in vectors:
            cand = cand - (f @ G @ cand) * f
        nrm = np.sqrt(cand @ G @ cand)
        if nrm < FRAME_DEPENDENCE_THRESHOLD:
            continue
        cand = cand / nrm
        vectors.extend([cand, J @ cand])
    return AdaptedFrame(np.column_stack(vectors))


def frame_to_coordinate(params: ModelParams, p: PhasePoint, frame: AdaptedFrame | None = None) -> np.ndarray:
    """Matrix whose columns are the sasaki-frame basis vectors in coordinates.

    Column ``i`` is the horizontal lift of ``frame[i]``, column ``2n + i`` the
    vertical vector ``(0, frame[i])``. A form with coordinate matrix ``M`` has
    frame matrix ``C^T M C``.
    """
    if frame is None:
        frame = adapted_frame(params, p)
    F = frame.vectors
    m = params.dim
    gamma_v = np.einsum("kij,j->ki", christoffel(params, p.x), p.v)
    return np.block([[F, np.zeros((m, m))], [-gamma_v @ F, F]])


def change_basis(params: ModelParams, p: PhasePoint, form: TwoFormMatrix, basis: str,
                 frame: AdaptedFrame | None = None) -> TwoFormMatrix:
    """Congruence transform of a two-form matrix between the two tagged bases."""
    if form.basis == basis:
        return form
    C = frame_to_coordinate(params, p, frame)
    if basis == SASAKI_FRAME:
        return TwoFormMatrix(SASAKI_FRAME, C.T @ form.matrix @ C)
    Cinv = np.linalg.inv(C)
    return TwoFormMatrix(COORDINATE, Cinv.T @ form.matrix @ Cinv)


def frame_components(params: ModelParams, p: PhasePoint, xi: TangentTT,
                     frame: AdaptedFrame | None = None) -> np.ndarray:
    """Components of ``xi`` in the sasaki-frame basis."""
    if frame is None:
        frame = adapted_frame(params, p)
    G = metric(params, p.x)
    s = xi.to_sasaki(params, p)
    FtG = frame.vectors.T @ G
    return np.concatenate([FtG @ s.first, FtG @ s.second])


def from_frame_components(params: ModelParams, p: PhasePoint, comps,
                          frame: AdaptedFrame | None = None) -> TangentTT:
    if frame is None:
        frame = adapted_frame(params, p)
    comps = np.asarray(comps, dtype=float)
    m = params.dim
    F = frame.vectors
    return TangentTT(SASAKI, F @ comps[:m], F @ comps[m:])


def omega0_matrix(params: ModelParams, p: PhasePoint, basis: str = SASAKI_FRAME) -> TwoFormMatrix:
    m = params.dim
    if basis == SASAKI_FRAME:
        # frame is orthonormal, so omega0 takes the standard block form
        eye = np.eye(m)
        zero = np.zeros((m, m))
        return TwoFormMatrix(SASAKI_FRAME, np.block([[zero, eye], [-eye, zero]]))
    if basis != COORDINATE:
        raise ValueError(f"unknown basis {basis!r}")
    G = metric(params, p.x)
    gamma_v = np.einsum("kij,j->ki", christoffel(params, p.x), p.v)
    # (h, k) = S (dx, dv), with S = [[I, 0], [Gamma_v, I]]
    S = np.block([[np.eye(m), np.zeros((m, m))], [gamma_v, np.eye(m)]])
    zero = np.zeros((m, m))
    sasaki = np.block([[zero, G], [-G, zero]])
    return TwoFormMatrix(COORDINATE, S.T @ sasaki @ S)
