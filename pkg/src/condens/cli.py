"""Command-line interface.

Subcommands:
  points    write a (randomized) point set as CSV
  run       run an experiment config and persist results/density CSVs
  rate      refit the log-log rate from a results.csv
  density   summarize a density dump (grid stats and total mass)
  quantile  quantile + expected-shortfall report as JSON
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .experiments import POINTSET_KINDS, fit_rate, read_config, run_experiment
from .models import make_model
from .pointsets import (
    baker_transform,
    mc_points,
    rank1_lattice,
    random_shift,
    sobol_lms_shift,
)
from .quantile import cmc_quantile_report
from .rng import UniformStream


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _cmd_points(args) -> int:
    stream = UniformStream(args.seed, 0)
    n, s = args.n, args.dim
    if args.kind == "mc":
        pts = mc_points(n, s, stream)
    elif args.kind in ("lat-s", "lat-s-b"):
        if args.gen_file:
            with open(args.gen_file) as f:
                payload = json.load(f)
            if int(payload["n"]) != n:
                raise SystemExit(f"generating vector file is for n={payload['n']}, not {n}")
            lat = rank1_lattice(n, z=[int(v) for v in payload["z"]], s=s)
        elif args.gen:
            lat = rank1_lattice(n, a=args.gen, s=s)
        else:
            from .merit import korobov_parameter
            lat = rank1_lattice(n, a=korobov_parameter(n, s, 0.6), s=s)
        pts = random_shift(lat, stream)
        if args.kind == "lat-s-b":
            pts = baker_transform(pts)
    elif args.kind == "sobol-lms":
        pts = sobol_lms_shift(n, s, stream)
    else:  # pragma: no cover
        raise SystemExit(f"unknown kind {args.kind}")
    mat = pts.matrix(s)
    lines = [",".join(_fmt(v) for v in row) for row in mat]
    out = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(out)
    else:
        sys.stdout.write(out)
    return 0


def _cmd_run(args) -> int:
    cfg = read_config(args.config)
    if args.out:
        cfg.out = args.out
    if args.full:
        cfg.n_list = tuple(2 ** k for k in range(14, 20))
        cfg.n_r = 100
    curve = run_experiment(cfg)
    for n, v, se in curve.rows:
        print(f"n={n}: {curve.metric}={v:.6e} (se {se:.2e})")
    tag = " (extrapolated)" if curve.extrapolated else ""
    print(f"nu_hat={curve.nu_hat:.4f} e19={curve.e19:.2f}{tag}")
    return 0


def _cmd_rate(args) -> int:
    rows = _read_csv(args.infile)
    pairs = [(int(r["n"]), float(r["iv"])) for r in rows]
    nu, k, e19, extrapolated = fit_rate(pairs)
    tag = " (extrapolated)" if extrapolated else ""
    print(f"nu_hat={nu:.4f} k_hat={k:.6e} e19={e19:.2f}{tag}")
    return 0


def _cmd_density(args) -> int:
    rows = _read_csv(args.infile)
    x = np.array([float(r["x"]) for r in rows])
    f = np.array([float(r["fhat"]) for r in rows])
    se = np.array([float(r["stderr"]) for r in rows])
    mass = float(np.trapezoid(f, x))
    print(f"points={x.size} x-range=[{x.min():.6g}, {x.max():.6g}]")
    print(f"grid mass={mass:.6f} max fhat={f.max():.6g} max stderr={se.max():.3g}")
    return 0


def _cmd_quantile(args) -> int:
    cfg = read_config(args.config)
    model = make_model(cfg.model, cfg.variant, cfg.interval, cfg.model_params)
    if model.cde_dim is None:
        raise SystemExit("quantile reports need a fixed-dimension model")
    n = cfg.n_list[-1]
    stream = UniformStream(cfg.seed, (3,))
    u = mc_points(n, model.cde_dim, stream).matrix()
    report = cmc_quantile_report(model, u, args.q, args.level)
    report.update({"model": cfg.model, "variant": model.variant, "seed": cfg.seed})
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def _read_csv(path: str) -> list[dict]:
    import csv

    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        rows = list(reader)
    if not rows:
        raise SystemExit(f"{path}: no data rows")
    return rows


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="condens", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("points", help="write a point set as CSV")
    pp.add_argument("--kind", choices=POINTSET_KINDS, required=True)
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--dim", type=int, required=True)
    pp.add_argument("--seed", type=int, default=12345)
    pp.add_argument("--gen", type=int, help="Korobov parameter a")
    pp.add_argument("--gen-file", help='JSON {"n":..., "z":[...]} generating vector')
    pp.add_argument("--out")
    pp.set_defaults(func=_cmd_points)

    pr = sub.add_parser("run", help="run an experiment config")
    pr.add_argument("--config", required=True)
    pr.add_argument("--full", action="store_true",
                    help="paper-scale n=2^14..2^19 with n_r=100")
    pr.add_argument("--out")
    pr.set_defaults(func=_cmd_run)

    pt = sub.add_parser("rate", help="fit the log-log rate from results.csv")
    pt.add_argument("--in", dest="infile", required=True)
    pt.set_defaults(func=_cmd_rate)

    pd = sub.add_parser("density", help="summarize a density dump")
    pd.add_argument("--in", dest="infile", required=True)
    pd.set_defaults(func=_cmd_density)

    pq = sub.add_parser("quantile", help="quantile + shortfall report (JSON)")
    pq.add_argument("--config", required=True)
    pq.add_argument("--q", type=float, default=0.95)
    pq.add_argument("--level", type=float, default=0.95)
    pq.set_defaults(func=_cmd_quantile)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
