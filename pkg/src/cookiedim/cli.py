"""``cookie-dim`` command line interface.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 depth cap exhausted without permission to fall back.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import time

import numpy as np

from . import verify
from .boxdim import box_dimension_regression
from .config import RunConfig, load_sequence_file, load_sweep_file, load_system_file
from .errors import ConfigError, CookieDimError, DepthCapError
from .nonstationary import dimension_estimates, stationary_dimension
from .sequences import frequencies_condition_diagnostic, group_letters, rarely_switching_diagnostic
from .svgplot import line_plot
from .sweep import sweep
from .thermo import DEFAULT_DEPTH_CAP, moran_dimension

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3


def fmt(x) -> str:
    return "nan" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.12g}"


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    print(f"wrote {path}")


def _out_path(cfg: RunConfig, name: str) -> str | None:
    if cfg.out_dir is None:
        return None
    os.makedirs(cfg.out_dir, exist_ok=True)
    return os.path.join(cfg.out_dir, name)


def cmd_moran(args, cfg: RunConfig) -> int:
    try:
        ratios = [float(x) for x in args.ratios]
        r = moran_dimension(ratios)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    print(f"dimension {r.root:.12g} +/- {r.error_radius:.3g}  (residual {r.residual:.3g})")
    return EXIT_OK


def _stationary_report(sc, cfg: RunConfig) -> int:
    systems = list(sc.family.systems) + list(sc.compose)
    dims = {}
    rows = []
    for F in systems:
        d = stationary_dimension(F, cfg.tol, depth_cap=cfg.depth_cap, allow_best=cfg.allow_fallback)
        dims[F.label] = d
        print(f"dim J({F.label}) = {d.value:.10f} +/- {d.error_radius:.3g}  [{d.kind}, depth {d.depth}]")
        rows.append((F.label, d.value, d.error_radius, d.depth, d.kind))
    for chk in sc.checks:
        lo, hi, sep = dims.get(chk.get("lower")), dims.get(chk.get("upper")), float(chk["separator"])
        if lo is None or hi is None:
            raise ConfigError(f"check refers to unknown systems {chk.get('lower')!r}/{chk.get('upper')!r}")
        holds = lo.value < sep < hi.value
        certified = lo.value + lo.error_radius < sep < hi.value - hi.error_radius
        print(
            f"check dim J({chk['lower']}) < {sep:.10g} < dim J({chk['upper']}): "
            f"{'holds' if holds else 'violated'} at the point values, "
            f"{'certified' if certified else 'not certified'} by the error radii"
        )
    path = _out_path(cfg, "dim_stationary.csv")
    if path:
        _write_csv(path, ["system", "dim", "error_radius", "depth", "kind"], rows)
    return EXIT_OK


def cmd_dim(args, cfg: RunConfig) -> int:
    sc = load_system_file(args.system)
    seq = load_sequence_file(args.sequence, sc.family.k) if args.sequence else sc.sequence
    if seq is None:
        return _stationary_report(sc, cfg)
    fam = sc.family
    if args.group > 1:
        seq, fam = group_letters(seq, args.group, fam)
        print(f"grouped in {args.group}s: alphabet {[F.label for F in fam.systems]}")
    horizons = cfg.horizons
    h, ub, trace = dimension_estimates(
        fam, seq, horizons, tol=cfg.tol, depth_cap=cfg.depth_cap, allow_fallback=cfg.allow_fallback
    )
    hs = [r.depth for r in trace]
    sw = rarely_switching_diagnostic(seq, hs)
    fq = frequencies_condition_diagnostic(seq, hs)
    print(f"{'n':>22} {'root':>14} {'radius':>10}  route")
    for r in trace:
        print(f"{r.depth:>22d} {r.root:>14.10f} {r.error_radius:>10.3g}  {r.route}")
    print(f"switch ratio kappa_n/n at the last horizon: {sw.points[-1][1]:.3g} "
          f"({'halving per decade' if sw.decreasing else 'no halving trend'} on these horizons)")
    print("running max letter frequencies: " + ", ".join(f"{v:.4f}" for v in fq.final)
          + "  (finite-horizon values, no limit claim)")
    print(f"hausdorff ~ {h.value:.6f} +/- {h.error_radius:.3g}, "
          f"upper_box ~ {ub.value:.6f} +/- {ub.error_radius:.3g}  [route {h.route}]")
    path = _out_path(cfg, "dim_trace.csv")
    if path:
        _write_csv(path, ["n", "root", "error_radius", "route"],
                   [(r.depth, r.root, r.error_radius, r.route) for r in trace])
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    try:
        rep = verify.run(args.scenario, depth_cap=cfg.depth_cap)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    print("\n".join(rep.lines()), flush=True)
    if not rep.passed:
        print(f"first failure: {rep.first_failure.name}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_sweep(args, cfg: RunConfig) -> int:
    sc = load_sweep_file(args.spec)
    grid = cfg.grid or sc.grid_size
    threshold = cfg.threshold or sc.threshold
    res = sweep(sc.family, grid, threshold=threshold, tol=cfg.tol, depth_cap=cfg.depth_cap)
    vals, radii = res.values, res.radii
    for a, why in res.skipped:
        print(f"skipped a = {a:.12g}: {why}")
    print(f"{'envelope':>8} {'a':>14} {'left slope':>12} {'right slope':>12}")
    for kk in res.kinks + res.max_kinks:
        print(f"{kk.envelope:>8} {kk.a:>14.8f} {kk.left_slope:>12.5f} {kk.right_slope:>12.5f}")
    if not res.kinks and not res.max_kinks:
        print("no kinks above threshold")
    print(f"largest per-point error radius: {float(np.nanmax(radii, initial=0.0)):.3g}")
    k = len(res.labels)
    path = _out_path(cfg, "sweep.csv")
    if path:
        header = ["a"] + [f"dim_{j + 1}" for j in range(k)] + ["min_env", "max_env"]
        header += [f"err_{j + 1}" for j in range(k)]
        rows = [
            [float(a)] + [float(v) for v in vals[:, i]] + [float(res.min_envelope[i]), float(res.max_envelope[i])]
            + [float(v) for v in radii[:, i]]
            for i, a in enumerate(res.grid)
        ]
        _write_csv(path, header, rows)
        svg = _out_path(cfg, "sweep.svg")
        marks = [(kk.a, _interp(res.grid, res.min_envelope if kk.envelope == "min" else res.max_envelope, kk.a))
                 for kk in res.kinks + res.max_kinks]
        line_plot(svg, res.grid, list(zip(res.labels, vals)), res.min_envelope, res.max_envelope, marks,
                  title="stationary dimensions and envelopes")
        print(f"wrote {svg}")
    return EXIT_OK


def _interp(x, y, a) -> float:
    return float(np.interp(a, x, y))


def cmd_boxdim(args, cfg: RunConfig) -> int:
    sc = load_system_file(args.system)
    fam = sc.family
    if args.compose:
        fam = [F for F in sc.compose if F.label == args.compose]
        if not fam:
            raise ConfigError(f"no composed system {args.compose!r} in {args.system}")
        fam = fam[0]
    seq = load_sequence_file(args.sequence, sc.family.k) if args.sequence else None
    est = box_dimension_regression(fam, seq, args.depth, args.eps, depth_cap=cfg.depth_cap)
    print(f"box dimension {est.value:.6f} +/- {est.error_radius:.3g}  (depth {est.depth})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP,
                        help="maximum number of words enumerated exactly (default 2**22)")
    common.add_argument("--tol", type=float, default=1e-6, help="stationary pressure tolerance")
    common.add_argument("--out", metavar="DIR", help="directory for CSV/SVG output")
    common.add_argument("--allow-fallback", action="store_true",
                        help="use the frequency approximation / deepest level beyond the cap")

    p = argparse.ArgumentParser(prog="cookie-dim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("moran", parents=[common], help="solve sum |a_j|^s = 1")
    s.add_argument("ratios", nargs="+")
    s.set_defaults(func=cmd_moran)

    s = sub.add_parser("dim", parents=[common], help="stationary or non-stationary dimensions")
    s.add_argument("system")
    s.add_argument("sequence", nargs="?")
    s.add_argument("--horizons", type=int, nargs="+")
    s.add_argument("--group", type=int, default=1, help="read the sequence in blocks of this length")
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("verify", parents=[common], help="run a built-in scenario")
    s.add_argument("scenario", choices=sorted(verify.SCENARIOS))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="parameter sweep with kink detection")
    s.add_argument("spec")
    s.add_argument("--grid", type=int)
    s.add_argument("--threshold", type=float)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("boxdim", parents=[common], help="box-counting oracle")
    s.add_argument("system")
    s.add_argument("sequence", nargs="?")
    s.add_argument("--depth", type=int, default=10)
    s.add_argument("--eps", type=float, nargs="+")
    s.add_argument("--compose", help="label of a composed system from the file, e.g. F0F1")
    s.set_defaults(func=cmd_boxdim)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    inputs = [getattr(args, k) for k in ("system", "sequence", "spec") if getattr(args, k, None)]
    cfg = RunConfig(
        args.command, inputs, args.out, args.depth_cap, args.tol,
        getattr(args, "horizons", None), getattr(args, "grid", None),
        getattr(args, "threshold", None), args.allow_fallback,
    )
    t0 = time.perf_counter()
    try:
        cfg.validate()
        code = args.func(args, cfg)
    except DepthCapError as exc:
        sys.stdout.flush()
        print(f"error: {exc}", file=sys.stderr)
        if exc.best_tolerance is not None:
            print(f"best achievable tolerance: {exc.best_tolerance:.3g}", file=sys.stderr)
        print("rerun with --allow-fallback to accept it", file=sys.stderr)
        return EXIT_CAP
    except (CookieDimError, ValueError) as exc:
        sys.stdout.flush()
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.flush()
    print(f"({time.perf_counter() - t0:.2f}s)", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
