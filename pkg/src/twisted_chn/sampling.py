"""Seeded random phase points for property checks and reports."""

from __future__ import annotations

import numpy as np

from .chn_model import ModelParams, metric
from .sasaki import PhasePoint

DEFAULT_RADIUS = 0.8


def random_base_point(params: ModelParams, rng: np.random.Generator, radius: float = DEFAULT_RADIUS) -> np.ndarray:
    """Uniform sample from the ball ``|z| <= radius``."""
    m = params.dim
    d = rng.normal(size=m)
    d /= np.linalg.norm(d)
    return d * radius * rng.uniform() ** (1.0 / m)


def on_level(params: ModelParams, x, v, energy: float) -> PhasePoint:
    """Rescale ``v`` so that ``|v|^2`` equals ``energy`` at ``x``."""
    v = np.asarray(v, dtype=float)
    e = float(v @ metric(params, x) @ v)
    return PhasePoint(x, v * np.sqrt(energy / e))


def random_phase_point(params: ModelParams, rng: np.random.Generator, energy: float | None = None,
                       energy_range: tuple[float, float] = (0.1, 10.0),
                       radius: float = DEFAULT_RADIUS) -> PhasePoint:
    """Random ``(x, v)``; ``|v|^2`` is ``energy`` if given, else log-uniform in ``energy_range * c``."""
    x = random_base_point(params, rng, radius)
    v = rng.normal(size=params.dim)
    if energy is None:
        lo, hi = energy_range
        energy = params.c * float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
    return on_level(params, x, v, energy)


def random_unit_vector(params: ModelParams, rng: np.random.Generator, x) -> np.ndarray:
    v = rng.normal(size=params.dim)
    return v / np.sqrt(v @ metric(params, x) @ v)
