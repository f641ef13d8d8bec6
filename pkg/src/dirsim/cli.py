"""Command-line front end: experiment sweeps to CSV plus JSON run manifests.

Subcommands: ``sweep-se``, ``outage``, ``prelog``, ``design``, ``validate``.
Exit codes: 0 success, 1 config error, 2 usage error, 3 validation failure,
4 numerical failure.  Plotting is out of scope: output is plot-ready CSV.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import NumericalError, design_rule, prelog_factor
from .engine import run_outage, run_sum_se
from .scenario import ConfigError, ScenarioConfig, load_config
from .validate import run_all_checks

EX_OK = 0
EX_CONFIG = 1
EX_USAGE = 2
EX_VALIDATION = 3
EX_NUMERICAL = 4

OUT_DIR_ENV = "DIRSIM_OUT_DIR"


class UsageError(ValueError):
    """Bad command-line input (beyond what argparse catches)."""


def _utcnow() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _resolve_config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    if getattr(args, "seed", None) is not None:
        cfg = cfg.replace(master_seed=args.seed)
    return cfg


def _resolve_out_dir(args) -> Path:
    out = getattr(args, "out_dir", None) or os.environ.get(OUT_DIR_ENV) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _write_manifest(out_dir: Path, stem: str, command: str, cfg: ScenarioConfig,
                    params: dict, outputs: list[str], started: str) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "seed": cfg.master_seed,
        "config": cfg.to_dict(),
        "params": params,
        "outputs": outputs,
        "started_utc": started,
        "finished_utc": _utcnow(),
    }
    path = out_dir / f"{stem}.manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _paths_for_delta(n_total: int, delta: float) -> int:
    """Integer path count closest to N**delta (at least 1)."""
    if delta < 0:
        raise UsageError(f"delta must be >= 0, got {delta}")
    return max(1, round(n_total**delta))


def _grid_configs(cfg: ScenarioConfig, n_list, s_list):
    """Validate an (N, S) grid upfront and yield per-point configs."""
    for n in n_list:
        for s in s_list:
            if s == 0:
                continue
            if n % s != 0:
                raise UsageError(f"S={s} does not divide N={n}")
    for n in n_list:
        for s in s_list:
            if s == 0:
                yield n, 0, cfg.replace(num_irs=0, elements_per_irs=1)
            else:
                yield n, s, cfg.replace(num_irs=s, elements_per_irs=n // s)


def cmd_sweep_se(args) -> int:
    cfg = _resolve_config(args)
    out_dir = _resolve_out_dir(args)
    started = _utcnow()
    rows = []
    for n, s, point_cfg in _grid_configs(cfg, args.n, args.s):
        res = run_sum_se(point_cfg, workers=args.workers)
        m = point_cfg.elements_per_irs if s else 0
        rows.append([n, s, m,
                     res.se_x_mc, res.se_x_cf, res.se_y_mc, res.se_y_cf,
                     res.stderr_x, res.stderr_y])
    csv_path = out_dir / "sweep_se.csv"
    _write_csv(csv_path, ["N", "S", "M", "se_x_mc", "se_x_cf", "se_y_mc",
                          "se_y_cf", "stderr_x", "stderr_y"], rows)
    _write_manifest(out_dir, "sweep_se", "sweep-se", cfg,
                    {"n": args.n, "s": args.s, "workers": args.workers},
                    [csv_path.name], started)
    print(f"wrote {csv_path}")
    return EX_OK


def cmd_outage(args) -> int:
    cfg = _resolve_config(args)
    # Outage studies use unit path losses so the threshold is scale-free.
    cfg = cfg.replace(normalize_pathloss=True)
    out_dir = _resolve_out_dir(args)
    started = _utcnow()
    if args.rho < 0:
        raise UsageError(f"rho must be >= 0, got {args.rho}")
    n_total = cfg.n_total
    if n_total < 1:
        raise UsageError("config must define at least one surface element")
    rows = []
    for s in args.s:
        if s < 1 or n_total % s != 0:
            raise UsageError(f"S={s} must be >= 1 and divide N={n_total}")
    for s in args.s:
        for delta in args.delta:
            l = _paths_for_delta(n_total, delta)
            point = cfg.replace(num_irs=s, elements_per_irs=n_total // s, paths=l)
            rep = run_outage(point, args.rho, args.trials, workers=args.workers)
            rows.append([s, delta, l, rep.p_mc, rep.ci_lo, rep.ci_hi, rep.p_cf])
    csv_path = out_dir / "outage.csv"
    _write_csv(csv_path, ["S", "delta", "L", "p_out_mc", "ci_lo", "ci_hi",
                          "p_out_cf"], rows)
    _write_manifest(out_dir, "outage", "outage", cfg,
                    {"s": args.s, "delta": args.delta, "rho": args.rho,
                     "trials": args.trials, "workers": args.workers},
                    [csv_path.name], started)
    print(f"wrote {csv_path}")
    return EX_OK


def cmd_prelog(args) -> int:
    cfg = _resolve_config(args)
    out_dir = _resolve_out_dir(args)
    started = _utcnow()
    n_total = cfg.n_total
    if n_total < 2:
        raise UsageError("prelog needs a config with at least two elements")
    rows = []
    for s in args.s:
        if s != 0 and n_total % s != 0:
            raise UsageError(f"S={s} must divide N={n_total}")
    for s in args.s:
        for delta in args.delta:
            l = _paths_for_delta(n_total, delta)
            rule = design_rule(n_total, l)
            if s == 0:
                # Without surfaces neither SE grows with N: zero by convention.
                rows.append([0, delta, 0.0, 0.0, rule.s_star])
                continue
            point = cfg.replace(num_irs=s, elements_per_irs=n_total // s, paths=l)
            res = run_sum_se(point, workers=args.workers)
            rows.append([s, delta,
                         prelog_factor(res.se_y_mc, n_total),
                         prelog_factor(res.se_x_mc, n_total),
                         rule.s_star])
    csv_path = out_dir / "prelog.csv"
    _write_csv(csv_path, ["S", "delta", "tau_oob", "tau_inband", "s_star"], rows)
    _write_manifest(out_dir, "prelog", "prelog", cfg,
                    {"s": args.s, "delta": args.delta, "workers": args.workers},
                    [csv_path.name], started)
    print(f"wrote {csv_path}")
    return EX_OK


def cmd_design(args) -> int:
    rule = design_rule(args.n, args.l)
    print(json.dumps({"delta_star": rule.delta_star, "m_star": rule.m_star,
                      "s_star": rule.s_star}))
    return EX_OK


def cmd_validate(args) -> int:
    cfg = _resolve_config(args)
    results = run_all_checks(
        cfg,
        orthogonality_tol=args.orthogonality_tol,
        identity_tol=args.identity_tol,
        binomial_tol=args.binomial_tol,
        i0_tol=args.i0_tol,
    )
    for res in results:
        print(res.describe())
    return EX_OK if all(r.passed for r in results) else EX_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario config file")
    common.add_argument("--seed", type=int, help="override the master seed")
    common.add_argument("--workers", type=int, default=1,
                        help="worker processes (results are worker-invariant)")
    common.add_argument("--out-dir",
                        help=f"output directory (default: ${OUT_DIR_ENV} or .)")

    parser = argparse.ArgumentParser(
        prog="dirsim",
        description="Distributed reflecting-surface link simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-se", parents=[common],
                       help="ergodic sum-SE over an (N, S) grid")
    p.add_argument("--n", type=int, nargs="+", required=True,
                   help="total element counts")
    p.add_argument("--s", type=int, nargs="+", required=True,
                   help="surface counts (0 = no surfaces)")
    p.set_defaults(fn=cmd_sweep_se)

    p = sub.add_parser("outage", parents=[common],
                       help="bystander outage over an (S, delta) grid")
    p.add_argument("--s", type=int, nargs="+", required=True)
    p.add_argument("--delta", type=float, nargs="+", required=True,
                   help="path-richness exponents (L = round(N**delta))")
    p.add_argument("--rho", type=float, default=0.5, help="outage threshold")
    p.add_argument("--trials", type=int, default=100000)
    p.set_defaults(fn=cmd_outage)

    p = sub.add_parser("prelog", parents=[common],
                       help="SE pre-log factor over an (S, delta) grid")
    p.add_argument("--s", type=int, nargs="+", required=True)
    p.add_argument("--delta", type=float, nargs="+", required=True)
    p.set_defaults(fn=cmd_prelog)

    p = sub.add_parser("design", help="sizing rule for full bystander gain")
    p.add_argument("n", type=int, help="total element count")
    p.add_argument("l", type=int, help="cascaded path count")
    p.set_defaults(fn=cmd_design)

    p = sub.add_parser("validate", parents=[common],
                       help="run the fast invariant checks")
    p.add_argument("--orthogonality-tol", type=float, default=1e-12)
    p.add_argument("--identity-tol", type=float, default=1e-9)
    p.add_argument("--binomial-tol", type=float, default=0.02)
    p.add_argument("--i0-tol", type=float, default=1e-6)
    p.set_defaults(fn=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EX_CONFIG
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EX_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
