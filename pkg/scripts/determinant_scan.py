"""det(omega) and its smallest singular value across energy levels.

In an adapted orthonormal frame the determinant follows
(1 - c/|v|^2)^(2(n-1)), so for n >= 2 the form degenerates on |v|^2 = c.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from twisted_chn import ModelParams
from twisted_chn.sampling import random_phase_point
from twisted_chn.twisted_form import omega_total


@dataclass
class ScanConfig:
    c: float = 1.0
    ratios: tuple = (0.25, 0.5, 0.9, 0.99, 1.0, 1.01, 1.1, 2.0, 4.0)
    dims: tuple = (1, 2, 3)
    samples: int = 20
    seed: int = 0


def run(cfg: ScanConfig):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'n':>2} {'e/c':>6} {'min|det|':>11} {'predicted':>11} {'min sigma':>11}")
    for n in cfg.dims:
        params = ModelParams(n, cfg.c)
        for ratio in cfg.ratios:
            dets, sigmas = [], []
            for _ in range(cfg.samples):
                W = omega_total(params, random_phase_point(params, rng, energy=ratio * cfg.c)).matrix
                dets.append(abs(np.linalg.det(W)))
                sigmas.append(np.linalg.svd(W, compute_uv=False)[-1])
            pred = abs(1 - 1 / ratio) ** (2 * (n - 1))
            print(f"{n:2d} {ratio:6.2f} {min(dets):11.3e} {pred:11.3e} {min(sigmas):11.3e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", type=float, default=1.0)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    run(ScanConfig(c=args.c, samples=args.samples, seed=args.seed))
