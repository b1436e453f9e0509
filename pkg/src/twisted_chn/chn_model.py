"""Ball model of complex hyperbolic space with holomorphic sectional curvature -c.

Real coordinates are interleaved, ``(x1, y1, ..., xn, yn)`` for ``z_k = x_k + i y_k``,
so the complex structure is the constant block-diagonal matrix with 2x2 blocks
``[[0, -1], [1, 0]]``.

The metric is the scaled Bergman metric

    g = (4/c) * [ I / (1 - |z|^2) + (x x^T + Jx (Jx)^T) / (1 - |z|^2)^2 ],

which is the real form of ``(4/c) [(1-|z|^2) delta_ij + conj(z_i) z_j] / (1-|z|^2)^2``.
Connection and curvature are available both in closed form and by central
differences, so each can be checked against the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Raised when a point or vector lies outside the domain of a formula."""


@dataclass(frozen=True)
class ModelParams:
    """Complex dimension, curvature constant and numerical tolerances.

    Attributes
    ----------
    n : int
        Complex dimension; the real dimension of the base is ``2n``.
    c : float
        Holomorphic sectional curvature is ``-c``.
    fd_step : float
        Central-difference step used by every finite-difference oracle.
    tol_fd : float
        Tolerance for comparisons against finite-difference oracles.
    tol_exact : float
        Tolerance for algebraic identities.
    """

    n: int = 1
    c: float = 1.0
    fd_step: float = 1e-5
    tol_fd: float = 1e-5
    tol_exact: float = 1e-10

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"complex dimension must be a positive integer, got {self.n!r}")
        if not self.c > 0:
            raise ValueError(f"curvature constant must be positive, got {self.c!r}")
        if not 0 < self.fd_step < 1:
            raise ValueError(f"fd_step must lie in (0, 1), got {self.fd_step!r}")
        if not (self.tol_fd > 0 and self.tol_exact > 0):
            raise ValueError("tolerances must be positive")

    @property
    def dim(self) -> int:
        """Real dimension ``2n`` of the base."""
        return 2 * self.n


def complex_structure(params: ModelParams) -> np.ndarray:
    """Constant matrix of multiplication by ``i`` in interleaved coordinates."""
    m = params.dim
    J = np.zeros((m, m))
    for k in range(params.n):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return J


def _check_point(params: ModelParams, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (params.dim,):
        raise ValueError(f"base point must have shape ({params.dim},), got {x.shape}")
    r2 = float(x @ x)
    if not r2 < 1.0:
        raise DomainError(f"base point outside the unit ball: |z|^2 = {r2:.6g}")
    return x


def metric(params: ModelParams, x) -> np.ndarray:
    """Metric matrix ``G(x)`` (symmetric positive definite, ``2n x 2n``)."""
    x = _check_point(params, x)
    J = complex_structure(params)
    s = 1.0 - x @ x
    Jx = J @ x
    rank2 = np.outer(x, x) + np.outer(Jx, Jx)
    return (4.0 / params.c) * (np.eye(params.dim) / s + rank2 / s**2)


def metric_derivative(params: ModelParams, x) -> np.ndarray:
    """Closed-form partial derivatives, ``dG[k, i, j] = d G_ij / d x_k``."""
    x = _check_point(params, x)
    m = params.dim
    J = complex_structure(params)
    s = 1.0 - x @ x
    Jx = J @ x
    rank2 = np.outer(x, x) + np.outer(Jx, Jx)
    eye = np.eye(m)
    # d_rank2[k] = e_k x^T + x e_k^T + (J e_k)(Jx)^T + Jx (J e_k)^T
    d_rank2 = (np.einsum("ki,j->kij", eye, x) + np.einsum("i,kj->kij", x, eye)
               + np.einsum("ik,j->kij", J, Jx) + np.einsum("i,jk->kij", Jx, J))
    dG = (2 * x[:, None, None] * eye / s**2 + 4 * x[:, None, None] * rank2 / s**3 + d_rank2 / s**2)
    return (4.0 / params.c) * dG


def christoffel(params: ModelParams, x) -> np.ndarray:
    """Levi-Civita symbols ``Gamma[k, i, j]`` (upper index first).

    Built from :func:`metric_derivative`; symmetric in the two lower indices.
    """
    G = metric(params, x)
    dG = metric_derivative(params, x)
    # lowered[l, i, j] = d_i G_lj + d_j G_li - d_l G_ij
    lowered = np.transpose(dG, (1, 0, 2)) + np.transpose(dG, (1, 2, 0)) - dG
    return 0.5 * np.einsum("kl,lij->kij", np.linalg.inv(G), lowered)


def christoffel_contract(gamma: np.ndarray, a, b) -> np.ndarray:
    """The vector ``Gamma(a, b)^k = Gamma[k, i, j] a^i b^j``."""
    return np.einsum("kij,i,j->k", gamma, a, b)


def geodesic_acceleration(params: ModelParams, x, v) -> np.ndarray:
    """``Gamma_x(v, v)`` without forming the full tensor.

    In complex notation it is ``2 <v, z> v / (1 - |z|^2)`` with
    ``<v, z> = sum conj(z_i) v_i``; the scale ``c`` drops out.
    """
    x = _check_point(params, x)
    v = np.asarray(v, dtype=float)
    z = x[0::2] + 1j * x[1::2]
    w = v[0::2] + 1j * v[1::2]
    g = (2.0 * np.vdot(z, w) / (1.0 - float(x @ x))) * w
    out = np.empty(params.dim)
    out[0::2], out[1::2] = g.real, g.imag
    return out


def inner(G: np.ndarray, a, b) -> float:
    return float(np.asarray(a) @ G @ np.asarray(b))


def curvature_algebraic(params: ModelParams, x, X, Y, Z, W) -> float:
    """Closed-form curvature 4-tensor of constant holomorphic sectional curvature -c.

    ``R(X,Y,Z,W) = -(c/4) (<X,Z><Y,W> - <X,W><Y,Z> + <X,JZ><Y,JW>
    - <X,JW><Y,JZ> + 2<X,JY><Z,JW>)``, inner products taken with ``metric(x)``.
    With this convention ``R(X, JX, X, JX) = -c`` for a unit vector ``X``.
    """
    G = metric(params, x)
    J = complex_structure(params)

    def ip(a, b):
        return inner(G, a, b)

    return -(params.c / 4.0) * (
        ip(X, Z) * ip(Y, W)
        - ip(X, W) * ip(Y, Z)
        + ip(X, J @ Z) * ip(Y, J @ W)
        - ip(X, J @ W) * ip(Y, J @ Z)
        + 2.0 * ip(X, J @ Y) * ip(Z, J @ W)
    )


def curvature_algebraic_block(params: ModelParams, x, X, Y, U) -> np.ndarray:
    """Matrix ``R(X, Y, U[:, i], U[:, j])`` of :func:`curvature_algebraic` over the columns of ``U``."""
    G = metric(params, x)
    J = complex_structure(params)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    U = np.asarray(U, dtype=float)
    a, b = U.T @ G @ X, U.T @ G @ Y
    aJ, bJ = (J @ U).T @ G @ X, (J @ U).T @ G @ Y
    UJU = U.T @ G @ (J @ U)
    return -(params.c / 4.0) * (
        np.outer(a, b) - np.outer(b, a) + np.outer(aJ, bJ) - np.outer(bJ, aJ)
        + 2.0 * inner(G, X, J @ Y) * UJU
    )


def curvature_operator(params: ModelParams, x, X, Y, Z) -> np.ndarray:
    """The vector ``R(X,Y)Z`` with ``<R(X,Y)Z, W> = -R(X,Y,Z,W)``.

    This is the usual ``[nabla_X, nabla_Y] - nabla_[X,Y]`` operator.
    """
    G = metric(params, x)
    J = complex_structure(params)
    X, Y, Z = (np.asarray(a, dtype=float) for a in (X, Y, Z))

    def ip(a, b):
        return inner(G, a, b)

    return (params.c / 4.0) * (
        ip(X, Z) * Y
        - ip(Y, Z) * X
        - ip(X, J @ Z) * (J @ Y)
        + ip(Y, J @ Z) * (J @ X)
        - 2.0 * ip(X, J @ Y) * (J @ Z)
    )


def riemann_numeric(params: ModelParams, x) -> np.ndarray:
    """Riemann tensor ``Rm[l, k, i, j]`` from central differences of the Christoffels.

    ``R(e_i, e_j) e_k = Rm[l, k, i, j] e_l`` with
    ``Rm = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik``.
    """
    x = _check_point(params, x)
    m = params.dim
    h = params.fd_step
    if x @ x + 2 * h * np.sqrt(x @ x) + h * h >= 1.0:
        raise DomainError("finite-difference stencil leaves the unit ball")
    gamma = christoffel(params, x)
    # dgamma[i, l, j, k] = d_i Gamma^l_jk
    dgamma = np.empty((m, m, m, m))
    for i in range(m):
        e = np.zeros(m)
        e[i] = h
        dgamma[i] = (christoffel(params, x + e) - christoffel(params, x - e)) / (2 * h)
    deriv = np.einsum("iljk->lkij", dgamma)
    quad = np.einsum("lim,mjk->lkij", gamma, gamma)
    return deriv - np.transpose(deriv, (0, 1, 3, 2)) + quad - np.transpose(quad, (0, 1, 3, 2))


def curvature_numeric(params: ModelParams, x, X, Y, Z, W, riemann=None) -> float:
    """Finite-difference evaluation of the same 4-tensor as :func:`curvature_algebraic`.

    A precomputed ``riemann_numeric(params, x)`` may be passed to avoid
    recomputation when many quadruples share a base point.
    """
    if riemann is None:
        riemann = riemann_numeric(params, x)
    G = metric(params, x)
    RXY_Z = np.einsum("lkij,i,j,k->l", riemann, X, Y, Z)
    return -inner(G, RXY_Z, W)


def holomorphic_sectional_curvature(params: ModelParams, x, X, numeric: bool = False) -> float:
    """``R(X, JX, X, JX) / |X|^4``; equal to ``-c`` everywhere."""
    J = complex_structure(params)
    X = np.asarray(X, dtype=float)
    JX = J @ X
    norm2 = inner(metric(params, x), X, X)
    if norm2 <= 0:
        raise DomainError("holomorphic sectional curvature needs a nonzero vector")
    func = curvature_numeric if numeric else curvature_algebraic
    return func(params, x, X, JX, X, JX) / norm2**2
