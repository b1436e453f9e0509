"""Magnetic orbits through the origin for n = 1 on both sides of |v|^2 = c.

Below the critical level the orbit closes up and its farthest point from the
origin sits at |z| = sqrt(e/c); at or above it the orbit runs off to the
boundary. Prints one row per energy.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from twisted_chn import ModelParams
from twisted_chn.dynamics import integrate_flow
from twisted_chn.sampling import on_level


@dataclass
class FlowExperiment:
    c: float = 1.0
    energies: tuple = (0.1, 0.25, 0.5, 0.9, 1.0, 1.5, 4.0)
    T: float = 50.0
    dt: float = 5e-3


def run(cfg: FlowExperiment):
    params = ModelParams(1, cfg.c)
    print(f"{'e/c':>6} {'max|z|':>10} {'sqrt(e/c)':>10} {'t_end':>8} {'truncated':>9} {'drift':>10}")
    for e in cfg.energies:
        p0 = on_level(params, [0.0, 0.0], [1.0, 0.0], e * cfg.c)
        traj = integrate_flow(params, p0, cfg.T, cfg.dt)
        r = max(np.linalg.norm(s[1].x) for s in traj.samples)
        pred = f"{np.sqrt(e):10.6f}" if e < 1 else f"{'-':>10}"
        print(f"{e:6.2f} {r:10.6f} {pred} {traj.times[-1]:8.2f} {str(traj.truncated):>9} {traj.drift:10.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", type=float, default=1.0)
    ap.add_argument("--T", type=float, default=50.0)
    ap.add_argument("--dt", type=float, default=5e-3)
    args = ap.parse_args()
    run(FlowExperiment(c=args.c, T=args.T, dt=args.dt))
