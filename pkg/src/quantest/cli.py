"""Command-line interface.

Five subcommands: `design` (threshold sets and their information), `fi`
(evaluate user-supplied thresholds), `table` (the embedded reference tables
recomputed), `simulate` (Monte Carlo runs), and `coeffs` (static quantizer
coefficient tables).  All results go to files; stdout carries one summary
line per run.  Exit codes: 0 success, 2 invalid domain or usage, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from ._version import __version__
from .adaptive import make_static_quantizer
from .design import (
    DesignSpec,
    asymptotic_fi,
    exhaustive_optimal_thresholds,
    optimal_density,
    optimal_uniform_quantizer,
    practical_thresholds,
    thresholds_from_density_numeric,
)
from .distributions import Distribution, Family, FamilyTag, ParamKind
from .errors import ConvergenceError, DomainError, NumericalError
from .quantizer import Quantizer, export_cell_table_csv, quantized_fi
from .reference_tables import get_table
from .sim import SimConfig, reproduce_table, run_simulation

_TABLE_COLUMNS = ("optimal", "uniform", "practical")


def _dist_from_args(args) -> Distribution:
    return Distribution(Family(FamilyTag(args.family), args.beta),
                        args.mu, args.delta)


def _kind_from_args(args) -> ParamKind:
    return ParamKind(args.param)


def _add_dist_flags(p: argparse.ArgumentParser, with_loc_scale: bool = True):
    p.add_argument("--family", choices=["ggd", "std"], required=True,
                   help="noise family: generalized Gaussian or Student's t")
    p.add_argument("--beta", type=float, required=True,
                   help="shape parameter of the family")
    if with_loc_scale:
        p.add_argument("--mu", type=float, default=0.0,
                       help="location parameter (default 0)")
        p.add_argument("--delta", type=float, default=1.0,
                       help="scale parameter (default 1)")


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def cmd_design(args) -> int:
    dist = _dist_from_args(args)
    kind = _kind_from_args(args)
    spec = DesignSpec(dist, kind, args.bits)
    if args.method == "closed":
        q = practical_thresholds(spec)
    elif args.method == "numeric":
        q = thresholds_from_density_numeric(optimal_density(spec), spec.n_intervals)
    elif args.method == "exhaustive":
        q, _ = exhaustive_optimal_thresholds(spec, symmetric=not args.asymmetric)
    else:
        q, _ = optimal_uniform_quantizer(spec)
    fi_exact = quantized_fi(q, dist, kind)
    fi_asym = asymptotic_fi(spec)
    payload = {
        "spec": {
            "family": args.family, "beta": args.beta, "mu": args.mu,
            "delta": args.delta, "param": kind.value, "bits": args.bits,
            "method": args.method,
        },
        "thresholds": q.to_json_list(),
        "fi_exact": fi_exact,
        "fi_asymptotic": fi_asym,
    }
    _write_json(f"{args.out}.json", payload)
    export_cell_table_csv(f"{args.out}.csv", q, dist, kind)
    print(f"design {args.family} beta={args.beta:g} {kind.value} bits={args.bits} "
          f"method={args.method}: N_I={q.n_intervals} fi_exact={fi_exact:.8f} "
          f"fi_asymptotic={fi_asym:.8f} -> {args.out}.json, {args.out}.csv")
    return 0


def cmd_fi(args) -> int:
    dist = _dist_from_args(args)
    kind = _kind_from_args(args)
    if args.thresholds is not None:
        vals = [float(tok) for tok in args.thresholds.split(",") if tok.strip()]
    else:
        with open(args.thresholds_file) as fh:
            vals = [float(v) for v in json.load(fh)]
    q = Quantizer(np.asarray(vals, dtype=float))
    fi = quantized_fi(q, dist, kind)
    if args.out:
        _write_json(args.out, {
            "family": args.family, "beta": args.beta, "mu": args.mu,
            "delta": args.delta, "param": kind.value,
            "thresholds": q.to_json_list(), "fi_exact": fi,
        })
        dest = f" -> {args.out}"
    else:
        dest = ""
    print(f"fi {args.family} beta={args.beta:g} {kind.value}: "
          f"N_I={q.n_intervals} fi_exact={fi:.8f}{dest}")
    return 0


def cmd_table(args) -> int:
    table = reproduce_table(args.which)
    ref = get_table(args.which)
    out_path = args.out or f"table{args.which}.csv"
    header = ["n_bits"]
    for dist_name in ("gaussian", "cauchy"):
        for col in _TABLE_COLUMNS:
            header.append(f"{dist_name}_{col}")
            header.append(f"{dist_name}_{col}_delta_vs_reference")
        header.append(f"{dist_name}_asymptotic")
    max_delta = 0.0
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i, nb in enumerate(table["n_bits"]):
            row = [nb]
            for dist_name in ("gaussian", "cauchy"):
                for col in _TABLE_COLUMNS:
                    val = table[dist_name][col][i]
                    dv = val - ref[dist_name][col][i]
                    max_delta = max(max_delta, abs(dv))
                    row.append(repr(float(val)))
                    row.append(repr(float(dv)))
                row.append(repr(float(table[dist_name]["asymptotic"][i])))
            w.writerow(row)
    print(f"table {args.which} ({table['kind']}): "
          f"max|delta_vs_reference|={max_delta:.3e} -> {out_path}")
    return 0


def _merged_sim_config(args) -> SimConfig:
    merged: dict = {}
    if args.config:
        with open(args.config) as fh:
            merged.update(json.load(fh))
    overrides = {
        "family": args.family, "beta": args.beta, "mu": args.mu,
        "delta": args.delta, "mode": args.mode, "bits": args.bits,
        "realizations": args.realizations, "block": args.block,
        "mu0": args.mu0, "delta0": args.delta0, "seed": args.seed,
        "warm_switch": args.warm_switch, "threads": args.threads,
        "offset": args.offset,
    }
    if args.grid:
        overrides["grid"] = [int(tok) for tok in args.grid.split(",") if tok.strip()]
    for key, val in overrides.items():
        if val is not None:
            merged[key] = val
    if merged.get("threads") is None:
        merged["threads"] = int(os.environ.get("QUANTEST_THREADS", "1"))
    for key, default in (("mu", 0.0), ("delta", 1.0), ("mu0", 0.0),
                         ("delta0", 1.0), ("seed", 0)):
        merged.setdefault(key, default)
    return SimConfig.from_config_dict(merged)


def cmd_simulate(args) -> int:
    cfg = _merged_sim_config(args)
    res = run_simulation(cfg)
    csv_path = f"{args.out}.csv"
    res.write_csv(csv_path)
    res.write_manifest(f"{args.out}.manifest.json")
    extra = ""
    if args.svg:
        res.write_svg(f"{args.out}.svg")
        extra = f", {args.out}.svg"
    k_last = int(res.k[-1])
    tails = []
    if res.mse_mu is not None:
        tails.append(f"k*mse_mu={k_last * res.mse_mu[-1]:.6f}")
    if res.mse_delta is not None:
        tails.append(f"k*mse_delta={k_last * res.mse_delta[-1]:.6f}")
    print(f"simulate {cfg.mode.value} {cfg.dist.family.tag.value} "
          f"beta={cfg.dist.family.beta:g} bits={cfg.n_bits} "
          f"k_max={k_last} {' '.join(tails)} "
          f"({res.wall_time_s:.1f}s, {res.backend}) -> {csv_path}{extra}")
    return 0


def cmd_coeffs(args) -> int:
    dist = Distribution(Family(FamilyTag(args.family), args.beta), 0.0, 1.0)
    kind = _kind_from_args(args)
    spec = DesignSpec(dist, kind, args.bits)
    s = make_static_quantizer(spec, include_scale_coefficients=args.joint)
    out_path = args.out or "coeffs.csv"
    thr = s.normalized_thresholds
    lower = np.concatenate(([-np.inf], thr))
    upper = np.concatenate((thr, [np.inf]))
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["i", "tau_lower", "tau_upper", "coefficient"]
        if args.joint:
            header.append("scale_coefficient")
        w.writerow(header)
        for i in range(s.n_intervals):
            row = [i + 1, repr(float(lower[i])), repr(float(upper[i])),
                   repr(float(s.coefficients[i]))]
            if args.joint:
                row.append(repr(float(s.scale_coefficients[i])))
            w.writerow(row)
    fi_note = f"fi_ref={s.fi_ref:.8f}"
    if args.joint:
        fi_note += f" scale_fi_ref={s.scale_fi_ref:.8f}"
    print(f"coeffs {args.family} beta={args.beta:g} {kind.value} "
          f"bits={args.bits}: N_I={s.n_intervals} {fi_note} -> {out_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantest",
        description="Quantizer design and adaptive estimation under "
                    "generalized Gaussian and Student's t noise.")
    parser.add_argument("--version", action="version",
                        version=f"quantest {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="design a threshold set and report its information")
    _add_dist_flags(p)
    p.add_argument("--param", choices=["location", "scale"], required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--method", choices=["closed", "numeric", "exhaustive", "uniform"],
                   default="closed",
                   help="closed/numeric threshold maps, exhaustive search, "
                        "or best uniform spacing (default closed)")
    p.add_argument("--asymmetric", action="store_true",
                   help="exhaustive search without the symmetry constraint")
    p.add_argument("--out", default="design", help="output path prefix")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("fi", help="exact quantized information of given thresholds")
    _add_dist_flags(p)
    p.add_argument("--param", choices=["location", "scale"], required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--thresholds", help="comma-separated interior thresholds")
    g.add_argument("--thresholds-file", help="JSON file with a threshold array")
    p.add_argument("--out", help="optional JSON output path")
    p.set_defaults(func=cmd_fi)

    p = sub.add_parser("table", help="recompute an embedded reference table")
    p.add_argument("--which", type=int, choices=[1, 2], required=True,
                   help="1 location, 2 scale")
    p.add_argument("--out", help="CSV output path (default tableN.csv)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("simulate", help="Monte Carlo run of an adaptive estimator")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--mode", choices=["location", "scale", "joint"])
    p.add_argument("--family", choices=["ggd", "std"])
    p.add_argument("--beta", type=float)
    p.add_argument("--mu", type=float, help="true location (default 0)")
    p.add_argument("--delta", type=float, help="true scale (default 1)")
    p.add_argument("--bits", type=int)
    p.add_argument("--realizations", type=int)
    p.add_argument("--block", type=int, help="samples per realization")
    p.add_argument("--mu0", type=float, help="initial location estimate (default 0)")
    p.add_argument("--delta0", type=float, help="initial scale estimate (default 1)")
    p.add_argument("--seed", type=int, help="root seed (default 0)")
    p.add_argument("--grid", help="comma-separated step counts to record")
    p.add_argument("--warm-switch", type=int, dest="warm_switch",
                   help="steps on uniform thresholds before switching")
    p.add_argument("--threads", type=int,
                   help="worker processes (default QUANTEST_THREADS or 1)")
    p.add_argument("--offset", type=int, help="realization index offset")
    p.add_argument("--svg", action="store_true", help="also write a log-log plot")
    p.add_argument("--out", default="sim", help="output path prefix")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("coeffs", help="static quantizer coefficient table")
    _add_dist_flags(p, with_loc_scale=False)
    p.add_argument("--param", choices=["location", "scale"], required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--joint", action="store_true",
                   help="also emit scale coefficients on the location design")
    p.add_argument("--out", help="CSV output path (default coeffs.csv)")
    p.set_defaults(func=cmd_coeffs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
