"""Command-line entry point.

    twisted-chn verify --n 2 --c 0.5 --samples 500
    twisted-chn flow --n 1 --c 1 --energy 0.25 --T 50 --out orbit.csv
    twisted-chn contact-scan --c 1 --a 0.5 --b 2
    twisted-chn curvature-check --n 2 --c 3

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .chn_model import ModelParams
from .contact import CONTACT, contact_report
from .dynamics import integrate_flow
from .sampling import on_level
from .verify import check_curvature, check_holomorphic, run_checks

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240611

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    n: int = 1
    c: float = 1.0
    seed: int = DEFAULT_SEED
    samples: int = 200
    fd_step: float = 1e-5
    tol_fd: float = 1e-5
    tol_exact: float = 1e-10
    dt: float = 1e-3
    T: float = 10.0
    a: float | None = None
    b: float | None = None
    output_path: str | None = None
    format: str = "json"

    def params(self) -> ModelParams:
        return ModelParams(self.n, self.c, self.fd_step, self.tol_fd, self.tol_exact)

    def validate(self):
        self.params()
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if not (self.dt > 0 and self.T >= 0):
            raise ValueError("dt must be positive and T non-negative")
        for name in ("a", "b"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be positive")


def _clean(obj):
    """Replace non-finite floats by None so the report stays strict JSON."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _config_echo(cfg: RunConfig) -> dict:
    echo = asdict(cfg)
    echo.pop("output_path")
    return echo


def _emit(text: str, cfg: RunConfig):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records_text(report: dict, records: list[dict], cfg: RunConfig) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        if records:
            writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(records)
        return buf.getvalue()
    return json.dumps(_clean(report), indent=2, ensure_ascii=False) + "\n"


def cmd_verify(cfg: RunConfig) -> int:
    results = run_checks(cfg.params(), cfg.samples, cfg.seed)
    records = [r.to_dict() for r in results]
    all_passed = all(r.passed for r in results)
    report = {"schema_version": SCHEMA_VERSION, "command": "verify", "config": _config_echo(cfg),
              "checks": records, "all_passed": all_passed}
    _emit(_records_text(report, _clean(records), cfg), cfg)
    return EXIT_OK if all_passed else EXIT_FAIL


def cmd_curvature_check(cfg: RunConfig) -> int:
    params = cfg.params()
    results = [check_curvature(params, cfg.samples, cfg.seed), check_holomorphic(params, cfg.samples, cfg.seed)]
    records = [r.to_dict() for r in results]
    passed = all(r.passed for r in results)
    report = {"schema_version": SCHEMA_VERSION, "command": "curvature-check", "config": _config_echo(cfg),
              "max_relative_deviation": results[0].max_residual, "checks": records, "all_passed": passed}
    _emit(_records_text(report, _clean(records), cfg), cfg)
    return EXIT_OK if passed else EXIT_FAIL


def _scan_values(explicit, default):
    return [explicit] if explicit is not None else default


def cmd_contact_scan(cfg: RunConfig, a_values=None, b_values=None) -> int:
    params = cfg.params()
    c = params.c
    if a_values is None:
        a_values = _scan_values(cfg.a, [c * k / 4 for k in range(1, 8)])
    if b_values is None:
        b_values = _scan_values(cfg.b, [c * k / 2 for k in range(1, 8)])
    reports, records, consistent = [], [], True
    for a in a_values:
        for b in b_values:
            rep = contact_report(params, a, b, sample_count=cfg.samples, seed=cfg.seed)
            expected = 0 < a < c < b
            consistent &= (rep.verdict == CONTACT) == expected
            reports.append(rep.to_dict())
            records.append({"a": a, "b": b, "verdict": rep.verdict,
                            "boundary_components": rep.boundary_components,
                            "expected_contact": expected})
    report = {"schema_version": SCHEMA_VERSION, "command": "contact-scan", "config": _config_echo(cfg),
              "reports": reports, "grid_matches_prediction": consistent}
    _emit(_records_text(report, records, cfg), cfg)
    return EXIT_OK if consistent else EXIT_FAIL


def trajectory_csv(cfg: RunConfig, traj, extra: dict) -> str:
    buf = io.StringIO()
    m = 2 * cfg.n
    buf.write("# config: " + json.dumps(_clean({**_config_echo(cfg), **extra}), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", *[f"x{i}" for i in range(m)], *[f"v{i}" for i in range(m)], "energy", "drift"])
    e0 = traj.samples[0][2]
    for t, p, e in traj.samples:
        writer.writerow([repr(float(t)), *map(repr, p.x.tolist()), *map(repr, p.v.tolist()),
                         repr(float(e)), repr(float(abs(e - e0) / e0))])
    buf.write(f"# truncated={str(traj.truncated).lower()} reason={traj.stop_reason or 'none'} "
              f"max_drift={traj.drift!r}\n")
    return buf.getvalue()


def cmd_flow(cfg: RunConfig, energy: float | None = None, x0=None, geodesic: bool = False,
             record_every: int = 10) -> int:
    params = cfg.params()
    if energy is None:
        energy = 0.5 * params.c
    if not energy > 0:
        raise ValueError("energy must be positive")
    x = np.zeros(params.dim) if x0 is None else np.asarray(x0, dtype=float)
    if x.shape != (params.dim,):
        raise ValueError(f"x0 needs {params.dim} components")
    v = np.zeros(params.dim)
    v[0] = 1.0
    p0 = on_level(params, x, v, energy)
    traj = integrate_flow(params, p0, cfg.T, cfg.dt, magnetic=not geodesic, record_every=record_every)
    extra = {"energy": energy, "geodesic": geodesic, "record_every": record_every}
    if cfg.format == "json":
        text = json.dumps(_clean({
            "schema_version": SCHEMA_VERSION, "command": "flow", "config": {**_config_echo(cfg), **extra},
            "truncated": traj.truncated, "stop_reason": traj.stop_reason, "max_drift": traj.drift,
            "samples": [{"t": t, "x": p.x.tolist(), "v": p.v.tolist(), "energy": e} for t, p, e in traj.samples],
        }), indent=2) + "\n"
    else:
        text = trajectory_csv(cfg, traj, extra)
    _emit(text, cfg)
    return EXIT_OK


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twisted-chn", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1, help="complex dimension")
    common.add_argument("--c", type=float, default=1.0, help="holomorphic sectional curvature is -c")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--fd-step", type=float, default=1e-5)
    common.add_argument("--tol-fd", type=float, default=1e-5)
    common.add_argument("--tol-exact", type=float, default=1e-10)
    common.add_argument("--dt", type=float, default=1e-3)
    common.add_argument("--T", type=float, default=10.0)
    common.add_argument("--a", type=float, default=None, help="inner energy level |v|^2 = a")
    common.add_argument("--b", type=float, default=None, help="outer energy level |v|^2 = b")
    common.add_argument("--out", dest="output_path", default=None)
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default: csv for flow, json otherwise)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run every identity check")
    flow = sub.add_parser("flow", parents=[common], help="integrate the magnetic flow")
    flow.add_argument("--energy", type=float, default=None, help="initial |v|^2 (default c/2)")
    flow.add_argument("--x0", type=_floats, default=None, help="comma-separated base point")
    flow.add_argument("--geodesic", action="store_true", help="switch the magnetic term off")
    flow.add_argument("--record-every", type=int, default=10)
    scan = sub.add_parser("contact-scan", parents=[common], help="contact verdicts over (a, b)")
    scan.add_argument("--a-values", type=_floats, default=None)
    scan.add_argument("--b-values", type=_floats, default=None)
    sub.add_parser("curvature-check", parents=[common], help="closed-form vs finite-difference curvature")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    names = {f.name for f in RunConfig.__dataclass_fields__.values()}
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in names})
    if cfg.format is None:
        cfg.format = "csv" if args.command == "flow" else "json"
    try:
        cfg.validate()
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "curvature-check":
            return cmd_curvature_check(cfg)
        if args.command == "contact-scan":
            return cmd_contact_scan(cfg, args.a_values, args.b_values)
        return cmd_flow(cfg, args.energy, args.x0, args.geodesic, args.record_every)
    except ValueError as exc:
        print(f"twisted-chn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
