"""Command-line entry point ``cardrec``.

Commands: ``validate-family``, ``fundamental``, ``recover``, ``sweep``.
Exit codes: 0 success, 1 a mathematical check failed, 2 usage or config
error, 3 numerical failure (a tolerance that cannot be certified).
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
import warnings

import numpy as np

from .approximand import (
    approximand_from_samples,
    approximand_spectral,
    convergence_sweep,
    default_eval_points,
    error_report,
    thread_count,
)
from .config import ConfigError, RunConfig, config_hash, load_config, parse_config, parse_range
from .errors import NumericalFailure, ParameterError
from .families import InterpolatorFamily, SmallAlphaWarning, synthetic_h2_failure, verify_conditions
from .fundamental import fundamental_spatial, fundamental_spectrum, leakage
from .modulation import evaluate, make_test_function, sample_block
from .spectral import make_grid

logger = logging.getLogger("cardrec")

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
KINDS = ("polyharmonic", "gaussian", "multiquadric", "synthetic-h2fail")


class UsageError(Exception):
    pass


def fmt(v) -> str:
    """Shortest round-trip decimal for floats; integers and strings verbatim."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows, comment: str):
    """Write one CSV; ``path`` of ``-`` or None means stdout."""
    fh = sys.stdout if path in (None, "-") else open(path, "w", newline="", encoding="utf-8")
    try:
        fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _comment(digest, cfg_like: dict) -> str:
    parts = [f"config_hash={digest}"]
    parts += [f"{k}={fmt(v)}" for k, v in cfg_like.items()]
    return " ".join(parts)


def _params(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse parameter list {text!r}") from None


def _family(kind, dim, param, args) -> InterpolatorFamily:
    if kind not in KINDS:
        raise UsageError(f"unknown family {kind!r}; expected one of {KINDS}")
    if kind == "synthetic-h2fail":
        return synthetic_h2_failure(dim)
    beta = args.mq_exponent if kind == "multiquadric" else None
    try:
        return InterpolatorFamily(kind, dim, param, beta, allow_small_alpha=args.allow_small_alpha)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


def _points_from_range(text, dim):
    ranges = text.split(",")
    if len(ranges) == 1:
        ranges = ranges * dim
    if len(ranges) != dim:
        raise UsageError("--x-range needs one range or one per axis")
    try:
        axes = [parse_range(r) for r in ranges]
    except ConfigError as exc:
        raise UsageError("; ".join(exc.problems)) from None
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _grid(args):
    try:
        return make_grid(args.dim, args.grid)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


def cmd_validate_family(args) -> int:
    if args.family not in KINDS:
        raise UsageError(f"unknown family {args.family!r}; expected one of {KINDS}")
    grid = _grid(args)
    if args.family == "synthetic-h2fail":
        fams = [synthetic_h2_failure(args.dim)]
    else:
        params = _params(args.params or args.param or "")
        if not params:
            raise UsageError("validate-family needs --params")
        fams = [_family(args.family, args.dim, p, args) for p in sorted(params)]
    report = verify_conditions(fams, grid, args.j_range, r1_threshold=args.r1_threshold)
    meta = {"family": args.family, "params": ";".join(fmt(f.parameter) for f in fams),
            "dim": args.dim, "grid": args.grid, "j_range": args.j_range}
    write_csv(args.out, ["field", "j", "param", "value"], report.rows(),
              _comment(config_hash(meta), meta))
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_fundamental(args) -> int:
    grid = _grid(args)
    if args.param is None:
        raise UsageError("fundamental needs --param")
    fam = _family(args.family, args.dim, float(args.param), args)
    F = fundamental_spectrum(fam, grid, args.window, args.tol)
    meta = {"family": args.family, "param": fmt(fam.parameter), "dim": args.dim,
            "grid": args.grid, "W": args.window, "tol": args.tol, "J": F.truncation_radius}
    comment = _comment(config_hash(meta), meta)
    prefix = args.out or "fundamental"
    n = grid.n
    xi_cols = [f"xi_{a + 1}" for a in range(n)]
    block_cols = ["w[" + " ".join(str(v) for v in k) + "]" for k in F.block_indices]
    leak, _ = leakage(F)
    rows_s = ([*grid.nodes[i], *F.weights[:, i], leak.values[i].real, F.row_sums()[i]]
              for i in range(grid.size))
    write_csv(f"{prefix}_spectrum.csv", xi_cols + block_cols + ["leakage", "row_sum"],
              rows_s, comment)
    pts = _points_from_range(args.x_range, n)
    L = fundamental_spatial(F, pts)
    x_cols = [f"x_{a + 1}" for a in range(n)]
    write_csv(f"{prefix}_spatial.csv", x_cols + ["L", "tail_certificate"],
              ([*pts[i], L[i], F.tail_certificate] for i in range(len(pts))), comment)
    return EXIT_OK


def _config_from_flags(args) -> RunConfig:
    if args.config:
        return load_config(args.config)
    params = _params(args.params or args.param or "")
    raw = {"dim": args.dim, "grid": args.grid,
           "family": {"kind": args.family, "params": params, "mq_exponent": args.mq_exponent,
                      "allow_small_alpha": args.allow_small_alpha},
           "windows": {"W": args.window, "out_window": args.out_window,
                       "J_s": args.sample_window},
           "tol": args.tol}
    if args.x_range:
        raw["eval_points"] = {"range": args.x_range.split(",") if "," in args.x_range
                              else args.x_range}
    return parse_config(raw)


def _meta(cfg: RunConfig) -> dict:
    return {"dim": cfg.dim, "grid": cfg.grid, "family": cfg.kind, "W": cfg.W,
            "out_window": "auto" if cfg.out_window is None else cfg.out_window,
            "J_s": cfg.J_s, "tol": cfg.tol, "path": cfg.path}


def _report_row(rep):
    return [rep.parameter, rep.fw_errors[1.0], rep.fw_errors[2.0], rep.fw_errors[np.inf],
            rep.pointwise_sup, rep.leakage_l1, rep.interp_residual, rep.tail_certificate]


REPORT_COLS = ["param", "fw_1", "fw_2", "fw_inf", "pointwise_sup", "leakage_l1",
               "interp_residual", "tail_certificate"]


def cmd_recover(args) -> int:
    if not args.config:
        raise UsageError("recover needs --config")
    cfg = load_config(args.config)
    if len(cfg.params) != 1:
        raise ConfigError(["family: recover takes exactly one parameter"])
    grid = make_grid(cfg.dim, cfg.grid)
    fam = cfg.families()[0]
    F = fundamental_spectrum(fam, grid, cfg.W, cfg.tol)
    f = make_test_function(cfg.test_function, grid)
    if args.self_test:
        Jf = f
    elif cfg.path == "samples":
        samples = {k: sample_block(f, k, cfg.J_s) for k in f.support}
        Jf = approximand_from_samples(samples, F, cfg.out_window)
    else:
        Jf = approximand_spectral(f, F, cfg.out_window)
    pts = default_eval_points(cfg.dim) if cfg.eval_points is None else cfg.eval_points
    rep = error_report(f, Jf, F, pts)
    if args.self_test:
        rep.fw_errors = dict(rep.fw_errors_computed)
    comment = _comment(cfg.digest, _meta(cfg))
    prefix = args.out
    err_path = f"{prefix}_errors.csv" if prefix else cfg.outputs.get("errors", "errors.csv")
    pts_path = f"{prefix}_points.csv" if prefix else cfg.outputs.get("points", "points.csv")
    check_cols = [f"check_{b.name}" for b in rep.bound_checks]
    write_csv(err_path, REPORT_COLS + check_cols,
              [_report_row(rep) + [b.passed for b in rep.bound_checks]], comment)
    fx, jx = evaluate(f, pts), evaluate(Jf, pts)
    x_cols = [f"x_{a + 1}" for a in range(cfg.dim)]
    write_csv(pts_path, x_cols + ["re_f", "re_J", "abs_diff"],
              ([*pts[i], fx[i].real, jx[i].real, abs(fx[i] - jx[i])] for i in range(len(pts))),
              comment)
    return EXIT_OK if rep.all_bounds_hold else EXIT_CHECK


def _strictly_decreasing(vals):
    return all(b < a for a, b in zip(vals, vals[1:]))


def cmd_sweep(args) -> int:
    cfg = _config_from_flags(args)
    if len(cfg.params) < 2:
        raise ConfigError(["family.params: a sweep needs at least two parameters"])
    cfg.params = sorted(cfg.params)
    grid = make_grid(cfg.dim, cfg.grid)
    reports = convergence_sweep(cfg.families(), cfg.test_function, grid, cfg.W, cfg.out_window,
                                cfg.eval_points, tol=cfg.tol, path=cfg.path,
                                sample_window=cfg.J_s, threads=thread_count())
    rows = [_report_row(r) for r in reports]
    cols = list(zip(*rows))
    checked = {"fw_1": 1, "fw_2": 2, "fw_inf": 3, "leakage_l1": 5}
    flags = ["monotone"] + [
        int(_strictly_decreasing(cols[i])) if name in checked else ""
        for i, name in enumerate(REPORT_COLS) if i > 0]
    ok = all(_strictly_decreasing(cols[i]) for i in checked.values())
    path = args.out or (args.config and cfg.outputs.get("sweep")) or "-"
    write_csv(path, REPORT_COLS, rows + [flags], _comment(cfg.digest, _meta(cfg)))
    return EXIT_OK if ok else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=1)
    common.add_argument("--grid", type=int, default=256)
    common.add_argument("--family", default="gaussian")
    common.add_argument("--param")
    common.add_argument("--params")
    common.add_argument("--mq-exponent", type=float, default=0.5)
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--window", type=int, default=3)
    common.add_argument("--out-window", type=int)
    common.add_argument("--sample-window", type=int, default=8)
    common.add_argument("--out")
    common.add_argument("--config")
    common.add_argument("--x-range")
    common.add_argument("--self-test", action="store_true")
    common.add_argument("--allow-small-alpha", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cardrec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate-family", parents=[common], help="check H2/H4/R1/R2")
    p.add_argument("--j-range", type=int, default=5)
    p.add_argument("--r1-threshold", type=float, default=1.0)
    p.set_defaults(func=cmd_validate_family)
    p = sub.add_parser("fundamental", parents=[common], help="emit fundamental-function CSVs")
    p.set_defaults(func=cmd_fundamental, x_range_default="-3:3:0.05")
    p = sub.add_parser("recover", parents=[common], help="one recovery run from a config")
    p.set_defaults(func=cmd_recover)
    p = sub.add_parser("sweep", parents=[common], help="convergence sweep over parameters")
    p.set_defaults(func=cmd_sweep)
    return parser


def _join_negative_values(argv):
    # "--x-range -3:3:0.05" would otherwise read the range as a flag
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--x-range":
            out.append(f"{tok}={next(it, '')}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    if args.command == "fundamental" and not args.x_range:
        args.x_range = args.x_range_default
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.allow_small_alpha:
        warnings.simplefilter("ignore", SmallAlphaWarning)
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"cardrec {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"cardrec {args.command}: invalid config:", file=sys.stderr)
        for item in exc.problems:
            print(f"  - {item}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"cardrec {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
