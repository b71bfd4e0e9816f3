"""Command-line front end: bound tables, rate regions, gap sweeps,
sum-set minimum distances and the modulo-fold SER experiment.

dB inputs are converted to linear scale in ``db_to_linear`` only. Output
is CSV (RFC 4180, units in the column names) or JSON with a top-level
``schema_version``.

Exit codes: 0 success, 2 invalid arguments, 3 regime or precondition
rejection, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .constellation import exact_min_distance, pam, sum_set
from .mi_bounds import (
    MiBoundKind,
    dtd_full_lower,
    dtd_reduced_points,
    dtd_simple_lower,
    ig,
    nd,
    ow_a_lower,
    ow_b_lower,
    pam_received,
)
from .montecarlo import McConfig, mi_discrete_awgn, mi_mixed_input, ser_modulo_decoder
from .regions import (
    ChannelGains,
    DminPolicy,
    RegimeError,
    gap_report,
    gdof_gamma,
    inner_rate_pair_bound,
)
from .sumset_geometry import NonOverlapError, prop2_boundary, prop3_bound

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ARGS, EXIT_REGIME, EXIT_IO = 0, 2, 3, 4
DTD_FULL_MAX_POINTS = 2048


class ArgError(ValueError):
    """Invalid command-line arguments detected after parsing."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (float(db) / 10.0)


# ---------------------------------------------------------------------------
# commands: each returns (rows, columns, document) where document is the JSON body


def cmd_bounds(args) -> tuple[list, list, dict]:
    cols = ["snr_db", "snr_linear", "n_points", "capacity_bits", "ow_b_bits", "ow_a_bits",
            "dtd_simple_points", "dtd_simple_bits", "dtd_full_bits", "mc_bits", "mc_std_bits"]
    rows = []
    for k, s_db in enumerate(args.snr_db):
        S = db_to_linear(s_db)
        n = args.n_points or nd(S)
        c = pam_received(n, S)
        n_red = dtd_reduced_points(S) if args.n_points is None else n
        c_red = pam_received(n_red, S)
        row = {
            "snr_db": s_db, "snr_linear": S, "n_points": n, "capacity_bits": ig(S),
            "ow_b_bits": ow_b_lower(c).value if n > 1 else 0.0,
            "ow_a_bits": ow_a_lower(c).value if n > 1 else 0.0,
            "dtd_simple_points": n_red,
            "dtd_simple_bits": dtd_simple_lower(c_red).value if n_red > 1 else 0.0,
            "dtd_full_bits": dtd_full_lower(c).value if n <= DTD_FULL_MAX_POINTS else math.nan,
            "mc_bits": math.nan, "mc_std_bits": math.nan,
        }
        if args.samples > 0:
            est = mi_discrete_awgn(c, McConfig(args.samples, args.seed, k))
            row["mc_bits"], row["mc_std_bits"] = est.value, est.std_error
        rows.append(row)
    return rows, cols, {"rows": rows}


def _policy(args) -> DminPolicy:
    if args.policy in ("prop3", "auto") and args.gamma is None:
        raise ArgError(f"--policy {args.policy} needs --gamma")
    return DminPolicy.parse(args.policy, args.gamma)


def _interference(args, S: float) -> float:
    if (args.inr_db is None) == (args.alpha is None):
        raise ArgError("give exactly one of --inr-db and --alpha")
    if args.inr_db is not None:
        return db_to_linear(args.inr_db)
    return S ** args.alpha


def _require_points(rep):
    if not rep.params_trace and rep.skipped:
        raise RegimeError(f"no admissible parameter point: {rep.skipped[0][2]}")


def cmd_region(args) -> tuple[list, list, dict]:
    S = db_to_linear(args.snr_db)
    I = _interference(args, S)
    g = ChannelGains.symmetric(S, I)
    rep = gap_report(g, args.gamma or 1.0, args.t_grid, _policy(args))
    _require_points(rep)
    cols = ["kind", "t", "n1", "n2", "delta1", "delta2", "r1_bits", "r2_bits",
            "r1_std_bits", "r2_std_bits", "regime", "analytic_gap_bits", "numeric_gap_bits"]
    base = {"regime": rep.regime.value, "analytic_gap_bits": rep.analytic_gap_bits,
            "numeric_gap_bits": rep.numeric_gap_bits}
    blank = dict(t="", n1="", n2="", delta1="", delta2="", r1_std_bits="", r2_std_bits="")
    rows = []
    for c in rep.outer.corners:
        rows.append({**blank, "kind": "outer_corner", "r1_bits": c[0], "r2_bits": c[1], **base})
    for c in rep.inner.corners:
        rows.append({**blank, "kind": "inner_corner", "r1_bits": c[0], "r2_bits": c[1], **base})
    trace = []
    for k, tp in enumerate(rep.params_trace):
        p = tp.params
        pinfo = {"t": tp.t, "n1": p.n1, "n2": p.n2, "delta1": p.delta1, "delta2": p.delta2}
        entry = {**pinfo, "ow_b": [tp.r1, tp.r2]}
        rows.append({**blank, **pinfo, "kind": "trace_ow_b", "r1_bits": tp.r1, "r2_bits": tp.r2, **base})
        if p.n1 * p.n2 <= DTD_FULL_MAX_POINTS:
            d1, d2 = inner_rate_pair_bound(g, p, MiBoundKind.DtdFull)
            entry["dtd_full"] = [d1, d2]
            rows.append({**blank, **pinfo, "kind": "trace_dtd_full", "r1_bits": d1, "r2_bits": d2, **base})
        if args.samples > 0:
            e1 = mi_mixed_input(g, p, 1, McConfig(args.samples, args.seed, 2 * k))
            e2 = mi_mixed_input(g, p, 2, McConfig(args.samples, args.seed, 2 * k + 1))
            entry["mc"] = [e1.value, e2.value]
            entry["mc_std"] = [e1.std_error, e2.std_error]
            rows.append({**pinfo, "kind": "trace_mc", "r1_bits": e1.value, "r2_bits": e2.value,
                         "r1_std_bits": e1.std_error, "r2_std_bits": e2.std_error, **base})
        trace.append(entry)
    doc = {
        "inputs": {"snr_db": args.snr_db, "snr_linear": S, "inr_linear": I,
                   "gamma": args.gamma, "t_grid": args.t_grid, "policy": args.policy},
        **base,
        "outer": rep.outer.to_dict(),
        "inner": rep.inner.to_dict(),
        "trace": trace,
        "skipped": [[t, p.as_list() if p else None, why] for t, p, why in rep.skipped],
    }
    return rows, cols, doc


def cmd_gap_sweep(args) -> tuple[list, list, dict]:
    if not args.alpha:
        raise ArgError("gap-sweep needs --alpha")
    cols = ["snr_db", "alpha", "snr_linear", "inr_linear", "gamma", "regime",
            "analytic_gap_bits", "numeric_gap_bits", "normalized_gap"]
    rows = []
    for a in args.alpha:
        for s_db in args.snr_db:
            S = db_to_linear(s_db)
            gamma = gdof_gamma(S, a) if args.gamma is None else args.gamma
            policy = DminPolicy.parse(args.policy, gamma)
            rep = gap_report(ChannelGains.symmetric(S, S ** a), gamma, args.t_grid, policy)
            _require_points(rep)
            rows.append({"snr_db": s_db, "alpha": a, "snr_linear": S, "inr_linear": S ** a,
                         "gamma": gamma, "regime": rep.regime.value,
                         "analytic_gap_bits": rep.analytic_gap_bits,
                         "numeric_gap_bits": rep.numeric_gap_bits,
                         "normalized_gap": rep.numeric_gap_bits / ig(S) if S > 0 else math.nan})
    return rows, cols, {"rows": rows}


def cmd_minimum_distance(args) -> tuple[list, list, dict]:
    X, Y = pam(args.nx, args.dx), pam(args.ny, args.dy)
    gammas = args.gamma_list
    cols = ["hx_linear", "exact_dmin", "prop2_valid"] + [f"prop3_dmin_gamma_{g:g}" for g in gammas]
    lo, hi = prop2_boundary(X, args.hy, Y)
    rows = []
    for hx in np.linspace(args.hx_min, args.hx_max, args.hx_steps):
        hx = float(hx)
        s = sum_set(hx, X, args.hy, Y)
        row = {"hx_linear": hx, "exact_dmin": exact_min_distance(s) if s.size > 1 else math.nan,
               "prop2_valid": int(hx > 0 and (hx <= lo or hx >= hi))}
        for gm in gammas:
            row[f"prop3_dmin_gamma_{gm:g}"] = prop3_bound(hx, X, args.hy, Y, gm).dmin_lower
        rows.append(row)
    doc = {"inputs": {"hy": args.hy, "nx": args.nx, "dx": args.dx, "ny": args.ny, "dy": args.dy,
                      "gamma_list": gammas},
           "prop2_boundary": {"hx_low": lo, "hx_high": hi}, "rows": rows}
    return rows, cols, doc


def cmd_ser(args) -> tuple[list, list, dict]:
    S, I = db_to_linear(args.snr_db), db_to_linear(args.inr_db)
    res = ser_modulo_decoder(S, I, args.n_points, McConfig(args.samples, args.seed),
                             args.normalization)
    row = {"snr_db": args.snr_db, "inr_db": args.inr_db, "n_points": args.n_points,
           "samples": args.samples, "ser": res.ser, "ser_std": res.ser_std,
           "ser_bound": res.bound, "ser_interference_free": res.ser_free,
           "ser_interference_free_std": res.free_std}
    return [row], list(row), {"rows": [row], "normalization": args.normalization}


# ---------------------------------------------------------------------------


def _gamma_arg(text: str) -> float:
    v = float(text)
    if not (0 < v <= 1):
        raise argparse.ArgumentTypeError(f"gamma must lie in (0, 1], got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tinmix", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bounds", help="mutual-information bounds for PAM over AWGN")
    p.add_argument("--snr-db", type=float, nargs="+", required=True)
    p.add_argument("--n-points", type=int, default=None)
    p.add_argument("--samples", type=_positive_int, default=0, help="Monte Carlo samples (0 skips)")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("region", help="inner and outer regions for symmetric gains")
    p.add_argument("--snr-db", type=float, required=True)
    p.add_argument("--inr-db", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--gamma", type=_gamma_arg, default=None)
    p.add_argument("--t-grid", type=int, default=65)
    p.add_argument("--policy", choices=["exact", "prop2", "prop3", "auto"], default="exact")
    p.add_argument("--samples", type=_positive_int, default=0)
    common(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("gap-sweep", help="gap table over SNR and interference level")
    p.add_argument("--snr-db", type=float, nargs="+", required=True)
    p.add_argument("--alpha", type=float, nargs="+", required=True)
    p.add_argument("--gamma", type=_gamma_arg, default=None,
                   help="outage measure; default 1/log2 min(S, S^alpha)")
    p.add_argument("--t-grid", type=int, default=65)
    p.add_argument("--policy", choices=["exact", "prop2", "prop3", "auto"], default="exact")
    common(p)
    p.set_defaults(func=cmd_gap_sweep)

    p = sub.add_parser("min-distance", help="sum-set minimum distance against hx")
    p.add_argument("--hy", type=float, default=1.0)
    p.add_argument("--hx-min", type=float, default=0.0)
    p.add_argument("--hx-max", type=float, default=10.0)
    p.add_argument("--hx-steps", type=int, default=1001)
    p.add_argument("--nx", type=int, default=10)
    p.add_argument("--dx", type=float, default=1.0)
    p.add_argument("--ny", type=int, default=10)
    p.add_argument("--dy", type=float, default=1.0)
    p.add_argument("--gamma", dest="gamma_list", type=_gamma_arg, nargs="+", default=[0.1, 0.3, 0.7])
    common(p)
    p.set_defaults(func=cmd_minimum_distance)

    p = sub.add_parser("ser", help="modulo-fold receiver symbol error rate")
    p.add_argument("--snr-db", type=float, required=True)
    p.add_argument("--inr-db", type=float, required=True)
    p.add_argument("--n-points", type=int, default=5)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--normalization", choices=["unit_spacing", "unit_energy"], default="unit_spacing")
    common(p)
    p.set_defaults(func=cmd_ser)
    return ap


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x


def render(rows: list, cols: list, doc: dict, fmt: str, command: str) -> str:
    if fmt == "json":
        body = {"schema_version": SCHEMA_VERSION, "command": command, **doc}
        return json.dumps(_jsonable(body), indent=2) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\r\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if isinstance(v, float) and math.isnan(v) else (repr(v) if isinstance(v, float) else v))
                    for k, v in r.items()})
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        rows, cols, doc = args.func(args)
    except ArgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (RegimeError, NonOverlapError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    text = render(rows, cols, doc, args.format, args.command)
    try:
        if args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
