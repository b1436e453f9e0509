"""Primitive alpha = lambda + beta, its Liouville field, and the boundary verdict.

On the shell ``{a <= |v|^2 <= b}`` the Liouville field ``X`` (``i_X omega = alpha``)
satisfies ``dH(X) = |v|^2 - c``. It therefore leaves through the outer wall
when ``b > c`` and through the inner wall when ``a < c``.
"""

from __future__ import annotations

import functools
import zlib
from dataclasses import asdict, dataclass, field

import numpy as np

from .chn_model import ModelParams, complex_structure, metric
from .dynamics import ConditioningError, dH_frame, solve_interior, xh_closed
from .exterior import d_oneform
from .sampling import random_phase_point
from .sasaki import (
    COORDINATE,
    SASAKI_FRAME,
    AdaptedFrame,
    PhasePoint,
    TangentTT,
    TwoFormMatrix,
    adapted_frame,
    change_basis,
    frame_components,
    liouville,
    liouville_covector,
    norm2,
    require_nonzero,
    vertical,
)
from .twisted_form import beta, beta_covector, omega_total

CONTACT = "contact_disconnected"
DEGENERATE = "degenerate"
FAILS = "fails"


def alpha(params: ModelParams, p: PhasePoint, xi: TangentTT) -> float:
    return liouville(params, p, xi) + beta(params, p, xi)


def alpha_covector(params: ModelParams, p: PhasePoint) -> np.ndarray:
    """Coordinate components of ``alpha``."""
    return liouville_covector(params, p) + beta_covector(params, p)


def alpha_frame(params: ModelParams, p: PhasePoint, frame: AdaptedFrame | None = None) -> np.ndarray:
    """``alpha`` in the sasaki-frame basis: ``(-F^T G v, F^T G Jv / |v|^2)``."""
    e = require_nonzero(params, p)
    if frame is None:
        frame = adapted_frame(params, p)
    G = metric(params, p.x)
    J = complex_structure(params)
    FtG = frame.vectors.T @ G
    return np.concatenate([-FtG @ p.v, FtG @ (J @ p.v) / e])


def dalpha_fd(params: ModelParams, p: PhasePoint) -> TwoFormMatrix:
    """Exterior derivative of ``alpha`` by central differences, coordinate basis."""
    require_nonzero(params, p)
    m = params.dim

    def field_(q):
        return alpha_covector(params, PhasePoint(q[:m], q[m:]))

    return TwoFormMatrix(COORDINATE, d_oneform(field_, p.coords, params.fd_step))


def liouville_field(params: ModelParams, p: PhasePoint, frame: AdaptedFrame | None = None) -> TangentTT:
    """The field ``X`` with ``i_X omega = alpha`` (dense solve)."""
    if frame is None:
        frame = adapted_frame(params, p)
    return solve_interior(params, p, alpha_frame(params, p, frame), frame)


def dH_of(params: ModelParams, p: PhasePoint, xi: TangentTT, frame: AdaptedFrame | None = None) -> float:
    if frame is None:
        frame = adapted_frame(params, p)
    return float(dH_frame(params, p, frame) @ frame_components(params, p, xi, frame))


def omega_eval(params: ModelParams, p: PhasePoint, xi: TangentTT, eta: TangentTT,
               frame: AdaptedFrame | None = None) -> float:
    if frame is None:
        frame = adapted_frame(params, p)
    W = omega_total(params, p, frame=frame)
    return W(frame_components(params, p, xi, frame), frame_components(params, p, eta, frame))


@dataclass
class Transversality:
    energy: float
    dH_X: float
    outward_outer: bool
    outward_inner: bool
    ambiguous: bool


def transversality_check(params: ModelParams, p: PhasePoint) -> Transversality:
    """Sign of ``dH(X)`` on the level through ``p``.

    Positive means ``X`` leaves an outer wall ``|v|^2 = b``; negative means it
    leaves an inner wall ``|v|^2 = a``. Values below ``tol_exact`` (scaled by
    the energy) are flagged ambiguous.
    """
    frame = adapted_frame(params, p)
    X = liouville_field(params, p, frame)
    value = dH_of(params, p, X, frame)
    e = norm2(params, p)
    ambiguous = abs(value) < params.tol_exact * (1.0 + e + params.c)
    return Transversality(e, value, value > 0 and not ambiguous, value < 0 and not ambiguous, ambiguous)


@dataclass
class LevelResult:
    role: str
    energy: float
    samples: int
    min_dH_X: float
    max_dH_X: float
    max_identity_residual: float
    max_dalpha_residual: float
    outward: bool
    ambiguous: bool


@dataclass
class ContactReport:
    a: float
    b: float
    c: float
    n: int
    verdict: str
    boundary_components: int
    explanation: str
    level_results: list = field(default_factory=list)
    interior_symplectic: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


@functools.lru_cache(maxsize=256)
def _level_samples(params: ModelParams, energy: float, count: int, seed: int):
    """dH(X) values and identity residuals on one level, or None if omega degenerates there."""
    rng = np.random.default_rng([seed, zlib.crc32(repr(float(energy)).encode())])
    values, identity, dalpha = [], [], []
    ambiguous = False
    for _ in range(count):
        p = random_phase_point(params, rng, energy=energy)
        frame = adapted_frame(params, p)
        try:
            check = transversality_check(params, p)
        except ConditioningError:
            return None
        values.append(check.dH_X)
        ambiguous |= check.ambiguous
        identity.append(abs(check.dH_X - (check.energy - params.c)))
        fd = change_basis(params, p, dalpha_fd(params, p), SASAKI_FRAME, frame)
        dalpha.append(fd.max_abs_diff(omega_total(params, p, frame=frame)))
    return np.array(values), max(identity), max(dalpha), ambiguous


def _level(params: ModelParams, energy: float, role: str, count: int, seed: int) -> LevelResult:
    data = _level_samples(params, float(energy), count, seed)
    if data is None:
        nan = float("nan")
        return LevelResult(role, float(energy), count, nan, nan, nan, nan, False, True)
    values, identity, dalpha, ambiguous = data
    if role == "outer":
        outward = bool(np.all(values > 0)) and not ambiguous
    else:
        outward = bool(np.all(values < 0)) and not ambiguous
    return LevelResult(role, float(energy), count, float(values.min()), float(values.max()),
                       float(identity), float(dalpha), outward, ambiguous)


def contact_report(params: ModelParams, a: float, b: float, sample_count: int = 20, seed: int = 0) -> ContactReport:
    """Check that the Liouville field exits both walls of ``{a <= |v|^2 <= b}``.

    Each level is sampled from its own generator seeded by ``(seed, energy)``,
    so a level shared by several ``(a, b)`` pairs is sampled once. Degenerate
    and failing configurations are reported through ``verdict`` rather than
    raised.
    """
    if not (a > 0 and b > 0):
        raise ValueError("energy levels must be positive")
    report = ContactReport(float(a), float(b), params.c, params.n, FAILS, 0, "")
    if not a < b:
        report.verdict = DEGENERATE
        report.explanation = "a >= b: the shell has empty interior"
        return report
    if a < params.c < b:
        # the shell contains the critical level; omega must stay nondegenerate there too
        p = random_phase_point(params, np.random.default_rng(seed), energy=params.c)
        report.interior_symplectic = bool(abs(np.linalg.det(omega_total(params, p).matrix)) > params.tol_exact)
    inner = _level(params, a, "inner", sample_count, seed)
    outer = _level(params, b, "outer", sample_count, seed)
    report.level_results = [inner, outer]
    if inner.ambiguous or outer.ambiguous:
        report.verdict = DEGENERATE
        report.explanation = ("a boundary level is critical: the Liouville field is tangent to it "
                              "or omega degenerates there")
    elif inner.outward and outer.outward:
        report.verdict = CONTACT
        report.boundary_components = 2
        report.explanation = "Liouville field exits through both boundary components"
        if not report.interior_symplectic:
            report.explanation += "; omega is degenerate on the critical level |v|^2 = c inside the shell"
    else:
        walls = [lvl.role for lvl in (inner, outer) if not lvl.outward]
        report.explanation = "Liouville field points inward on the " + " and ".join(walls) + " wall"
    return report


def radial_pairing(params: ModelParams, p: PhasePoint) -> float:
    """``omega((0, v), X_H)``; equals ``-|v|^2``."""
    return omega_eval(params, p, vertical(p.v), xh_closed(params, p))
