"""Central-difference exterior derivatives of coordinate 1-forms and 2-forms.

Exterior derivatives default to the five-point stencil: at low energy the
coordinate velocity is small and the forms vary on that scale, which makes the
three-point truncation error visible at the default step.
"""

from __future__ import annotations

from typing import Callable

import numpy as np


def jacobian_fd(field: Callable[[np.ndarray], np.ndarray], q, h: float, order: int = 2) -> np.ndarray:
    """``D[a, ...] = d field[...] / d q_a`` by central differences.

    ``order`` selects the three-point (2) or five-point (4) stencil.
    """
    q = np.asarray(q, dtype=float)
    rows = []
    for a in range(q.size):
        e = np.zeros_like(q)
        e[a] = h
        if order == 2:
            rows.append((np.asarray(field(q + e)) - np.asarray(field(q - e))) / (2 * h))
        elif order == 4:
            f1 = np.asarray(field(q + e)) - np.asarray(field(q - e))
            f2 = np.asarray(field(q + 2 * e)) - np.asarray(field(q - 2 * e))
            rows.append((8 * f1 - f2) / (12 * h))
        else:
            raise ValueError(f"unsupported stencil order {order}")
    return np.array(rows)


def d_oneform(oneform: Callable[[np.ndarray], np.ndarray], q, h: float, order: int = 4) -> np.ndarray:
    """Matrix of ``d alpha`` for a 1-form given by its coordinate components.

    ``(d alpha)_ab = d_a alpha_b - d_b alpha_a``.
    """
    D = jacobian_fd(oneform, q, h, order)
    return D - D.T


def d_twoform(twoform: Callable[[np.ndarray], np.ndarray], q, h: float, order: int = 4) -> np.ndarray:
    """Components ``(d w)_abc = d_a w_bc + d_b w_ca + d_c w_ab``."""
    D = jacobian_fd(twoform, q, h, order)
    return D + np.transpose(D, (1, 2, 0)) + np.transpose(D, (2, 0, 1))
