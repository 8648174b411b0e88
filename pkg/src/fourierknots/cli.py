"""Command-line driver: generate or load data, fit, and emit artifacts.

Subcommands
-----------
``fit``      fit one model, writing model.json, report.json, residuals.csv,
             knots.json (and timings.json with per-stage wall times).
``compare``  error-vs-knot-count study across methods -> convergence.csv.
``jumps``    jump detection -> jumps.json + indicator.csv.
``derive``   spectral (optionally finite-difference) derivatives ->
             derivative.csv.

Exit codes: 0 success, 2 invalid configuration (including knot-budget
shortfalls), 3 input error, 4 numerical failure.  Failures print a
machine-readable JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bspline import compute_errors, fit_least_squares, fit_tensor
from .datagen import FORMULAS, HARMONIC_FIELDS, SignalSpec, generate, load_grid
from .errors import (
    GridFormatError,
    InvalidInputError,
    KnotBudgetError,
    SpectrumSymmetryError,
)
from .filters import (
    derivative_filter,
    smoothing_filter,
    spectral_derivative,
    truncate_noise_floor,
)
from .jumps import classify_jumps, default_threshold, jump_indicator
from .knots import (
    METHODS,
    choose_knots,
    feature_cdf,
    feature_function,
    finite_difference_derivative,
    knots_2d,
    knots_from_cdf,
    merge_jump_knots,
    uniform_knots,
)
from .spectral import (
    Grid1D,
    Grid2D,
    apply_filter,
    fft_forward,
    fft_inverse,
    frequency_vector,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4


class _CliParser(argparse.ArgumentParser):
    def error(self, message):
        _fail(EXIT_CONFIG, "ConfigError", message)


def _fail(code: int, kind: str, message: str):
    json.dump({"error": {"code": code, "type": kind, "message": message}},
              sys.stderr, indent=2)
    sys.stderr.write("\n")
    raise SystemExit(code)


def _parse_int_pair(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(","))


def _parse_jumps(text: str):
    jumps = []
    for chunk in text.split(","):
        loc, kind, size = chunk.split(":")
        jumps.append((float(loc), kind, float(size)))
    return jumps


def _build_signal_spec(args) -> SignalSpec:
    name = args.signal
    if name.endswith(".json"):
        spec = SignalSpec.from_json(Path(name).read_text())
    elif name in HARMONIC_FIELDS:
        spec = SignalSpec.harmonic2d(name=name)
    else:
        if name not in FORMULAS:
            raise InvalidInputError(
                f"unknown signal {name!r}; catalog: {sorted(FORMULAS)} "
                f"+ {sorted(HARMONIC_FIELDS)} or a spec JSON path"
            )
        if getattr(args, "jumps", None):
            spec = SignalSpec.piecewise(_parse_jumps(args.jumps), base=name)
        else:
            spec = SignalSpec.smooth(name)
    if getattr(args, "noise", 0.0):
        if args.seed is None:
            raise InvalidInputError("--noise requires --seed")
        spec = SignalSpec.noisy(spec, args.noise, args.seed)
    return spec


def _load_input(args):
    """Resolve the configured input into a grid (and spec when generated)."""
    if args.input is not None:
        shape = _parse_int_pair(args.shape) if args.shape else None
        domain = None
        if args.domain:
            vals = [float(v) for v in args.domain.split(",")]
            domain = (vals[0], vals[1]) if len(vals) == 2 else \
                ((vals[0], vals[1]), (vals[2], vals[3]))
        return load_grid(args.input, args.layout, shape, domain), None
    spec = _build_signal_spec(args)
    counts = _parse_int_pair(args.samples)
    m = counts[0] if len(counts) == 1 else counts
    return generate(spec, m), spec


def _periodic_dims(text: str) -> tuple[bool, bool]:
    chosen = {int(p) for p in text.split(",") if p}
    return (1 in chosen, 2 in chosen)


def _write_json(path: Path, data: dict):
    data = {"schema_version": SCHEMA_VERSION, **data}
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows):
    lines = [f"# schema_version: {SCHEMA_VERSION}", ",".join(header)]
    for row in rows:
        lines.append(",".join(
            format(v, ".17g") if isinstance(v, float) else str(v) for v in row
        ))
    path.write_text("\n".join(lines) + "\n")


def _knots_with_timings(g: Grid1D, args):
    """1-D knot pipeline assembled from the low-level operations so each
    stage (transform, filter, knots) can be timed separately."""
    q, n, method = args.order, args.ctrl0, args.method
    timings = {"transform_s": 0.0, "filter_s": 0.0, "knots_s": 0.0}
    if method == "uniform":
        t0 = time.perf_counter()
        kv = uniform_knots(n, q)
        timings["knots_s"] = time.perf_counter() - t0
        return kv, timings, None

    t0 = time.perf_counter()
    spec = fft_forward(g)
    timings["transform_s"] = time.perf_counter() - t0
    freqs = frequency_vector(g.m, g.length)

    report = None
    t0 = time.perf_counter()
    if method == "di_fj":
        from .filters import jump_filter

        indicator = fft_inverse(apply_filter(spec, jump_filter(g.m)))
    clean = spec.with_coeffs(truncate_noise_floor(spec.coeffs))
    if method in ("di_fs", "di_fj"):
        clean = apply_filter(clean, smoothing_filter(freqs, g.h))
    deriv = fft_inverse(apply_filter(clean, derivative_filter(freqs, q)))
    timings["filter_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    cdf = feature_cdf(feature_function(deriv, q))
    if method == "di_fj":
        threshold = args.threshold if args.threshold is not None \
            else default_threshold(g.samples)
        report = classify_jumps(indicator, g.m, threshold, args.window)
        kv = merge_jump_knots(cdf, report, n, q)
    else:
        kv = knots_from_cdf(cdf, n, q)
    timings["knots_s"] = time.perf_counter() - t0
    return kv, timings, report


def cmd_fit(args) -> int:
    grid, spec = _load_input(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if isinstance(grid, Grid2D):
        n1, n2 = (args.ctrl if len(args.ctrl) == 2 else (args.ctrl0, args.ctrl0))
        t0 = time.perf_counter()
        if args.method == "uniform":
            kv1, kv2 = uniform_knots(n1, args.order), uniform_knots(n2, args.order)
        else:
            kv1, kv2 = knots_2d(
                grid, n1, n2, args.order,
                smooth=args.method in ("di_fs", "di_fj") or args.smooth,
                jumps=args.method == "di_fj",
                periodic_dims=_periodic_dims(args.periodic_dims),
                threshold=args.threshold, window=args.window,
            )
        t_knots = time.perf_counter() - t0
        t0 = time.perf_counter()
        model, report = fit_tensor(grid, kv1, kv2)
        t_solve = time.perf_counter() - t0
        timings = {"knots_s": t_knots, "solve_s": t_solve}
        _write_json(out / "knots.json",
                    {"knots1": kv1.to_dict(), "knots2": kv2.to_dict()})
        rows = []
        u1, u2 = grid.params(1), grid.params(2)
        fitted = model.evaluate_grid(u1, u2)
        for i1 in range(grid.m1):
            for i2 in range(grid.m2):
                rows.append((i1, i2, float(u1[i1]), float(u2[i2]),
                             float(grid.samples[i1, i2]), float(fitted[i1, i2]),
                             float(report.residuals[i1, i2])))
        _write_csv(out / "residuals.csv",
                   ["i1", "i2", "u1", "u2", "value", "fitted", "residual"], rows)
        jump_report = None
    else:
        kv, timings, jump_report = _knots_with_timings(grid, args)
        t0 = time.perf_counter()
        model, report = fit_least_squares(grid, kv)
        timings["solve_s"] = time.perf_counter() - t0
        _write_json(out / "knots.json", {"knots": kv.to_dict()})
        fitted = grid.samples + report.residuals
        rows = [
            (i, float(grid.params[i]), float(grid.x[i]),
             float(grid.samples[i]), float(fitted[i]), float(report.residuals[i]))
            for i in range(grid.m)
        ]
        _write_csv(out / "residuals.csv",
                   ["index", "u", "x", "value", "fitted", "residual"], rows)

    _write_json(out / "model.json", model.to_dict())
    report_data = {
        "method": args.method,
        "order": args.order,
        **report.to_dict(),
    }
    if jump_report is not None:
        report_data["jumps"] = jump_report.to_dict()
    if spec is not None:
        report_data["signal"] = spec.to_dict()
        _write_sidecar(out, spec)
    _write_json(out / "report.json", report_data)
    _write_json(out / "timings.json", {k: float(v) for k, v in timings.items()})
    return EXIT_OK


def _write_sidecar(out: Path, spec: SignalSpec):
    """Ground-truth sidecar for generated inputs: spec plus true jump list."""
    _write_json(out / "signal.json", {
        "signal": spec.to_dict(),
        "true_jumps": [
            {"location": j.location, "kind": j.kind, "size": j.size}
            for j in spec.true_jumps()
        ],
    })


def cmd_compare(args) -> int:
    grid, _ = _load_input(args)
    counts = [int(c) for c in args.counts.split(",")]
    if len(counts) < 2:
        raise InvalidInputError("compare needs at least 2 knot counts")
    methods = args.methods.split(",")
    for mth in methods:
        if mth not in METHODS:
            raise InvalidInputError(f"unknown method {mth!r}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def run_one(method, total):
        q = args.order
        if isinstance(grid, Grid1D):
            n = total - q
            kv = choose_knots(grid, n, q, method,
                              threshold=args.threshold, window=args.window)
            _, rep = fit_least_squares(grid, kv)
            return n, rep
        # 2-D study: --counts are dim-1 totals, dim 2 follows a fixed ratio
        n1 = total - q
        n2 = max(q, int(round(n1 * args.ratio)))
        if method == "uniform":
            kv1, kv2 = uniform_knots(n1, q), uniform_knots(n2, q)
        else:
            kv1, kv2 = knots_2d(
                grid, n1, n2, q,
                smooth=method in ("di_fs", "di_fj"),
                jumps=method == "di_fj",
                periodic_dims=_periodic_dims(args.periodic_dims),
                threshold=args.threshold, window=args.window,
            )
        _, rep = fit_tensor(grid, kv1, kv2)
        return n1, rep

    rows = []
    for method in methods:
        for total in counts:
            t0 = time.perf_counter()
            try:
                n, rep = run_one(method, total)
                wall = 1000.0 * (time.perf_counter() - t0)
                rows.append((method, total, n, float(rep.rms_error),
                             float(rep.max_error), float(wall), "ok"))
            except Exception as exc:  # per-row failure stays in-row
                wall = 1000.0 * (time.perf_counter() - t0)
                rows.append((method, total, total - args.order, float("nan"),
                             float("nan"), float(wall), f"error: {exc}"))
    _write_csv(out / "convergence.csv",
               ["method", "knot_count", "control_count", "rms_error",
                "max_error", "wall_ms", "status"], rows)
    return EXIT_OK


def cmd_jumps(args) -> int:
    grid, spec = _load_input(args)
    if not isinstance(grid, Grid1D):
        raise InvalidInputError("jumps analyzes 1-D inputs")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    indicator = jump_indicator(grid)
    threshold = args.threshold if args.threshold is not None \
        else default_threshold(grid.samples)
    report = classify_jumps(indicator, grid.m, threshold, args.window)
    _write_json(out / "jumps.json", report.to_dict())
    if spec is not None:
        _write_sidecar(out, spec)
    rows = [(i, float(grid.x[i]), float(grid.params[i]), float(indicator[i]))
            for i in range(grid.m)]
    _write_csv(out / "indicator.csv", ["index", "x", "u", "indicator"], rows)
    return EXIT_OK


def cmd_derive(args) -> int:
    grid, _ = _load_input(args)
    if not isinstance(grid, Grid1D):
        raise InvalidInputError("derive analyzes 1-D inputs")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    deriv = spectral_derivative(grid, args.order, smooth=args.smooth)
    header = ["index", "x", "u", "derivative"]
    columns = [deriv]
    if args.fd and args.order >= 1:
        columns.append(finite_difference_derivative(
            grid.samples, grid.h, args.order, periodic=True))
        header.append("central_difference")
    rows = [
        (i, float(grid.x[i]), float(grid.params[i]),
         *(float(col[i]) for col in columns))
        for i in range(grid.m)
    ]
    _write_csv(out / "derivative.csv", header, rows)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, two_d: bool = False):
    src = p.add_argument_group("input")
    src.add_argument("--signal", default="two_tone",
                     help="catalog signal name or SignalSpec JSON path")
    src.add_argument("--samples", default="600",
                     help="sample count m (or m1,m2 for 2-D signals)")
    src.add_argument("--jumps", default=None,
                     help="piecewise jumps as loc:kind:size[,...], e.g. 0.5:C1:12")
    src.add_argument("--noise", type=float, default=0.0,
                     help="Gaussian noise scale added to the signal")
    src.add_argument("--seed", type=int, default=None, help="noise seed")
    src.add_argument("--input", default=None, help="gridded input file")
    src.add_argument("--layout", default="csv_grid",
                     choices=["csv_xy", "csv_grid", "raw_rows"])
    src.add_argument("--shape", default=None, help="m1,m2 for raw_rows")
    src.add_argument("--domain", default=None,
                     help="a,b (1-D) or a1,b1,a2,b2 (2-D) physical bounds")
    p.add_argument("--order", type=int, default=4, help="spline order q")
    p.add_argument("--threshold", type=float, default=None,
                   help="jump significance threshold (default: 0.1 x data range)")
    p.add_argument("--window", type=int, default=5,
                   help="jump exclusion window in grid cells")
    p.add_argument("--out", default="out", help="output directory")


def main(argv=None) -> int:
    parser = _CliParser(prog="fourierknots",
                        description="Spectrally informed B-spline fitting")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a spline with the chosen method")
    _add_common(p_fit)
    p_fit.add_argument("--method", default="di_f", choices=list(METHODS))
    p_fit.add_argument("--ctrl", default="16",
                       help="control point count n (or n1,n2 for surfaces)")
    p_fit.add_argument("--smooth", action="store_true",
                       help="force the smoothing filter into the 2-D pipeline")
    p_fit.add_argument("--periodic-dims", dest="periodic_dims", default="1,2",
                       help="comma list of periodic dimensions, e.g. 1")
    p_fit.set_defaults(func=cmd_fit)

    p_cmp = sub.add_parser("compare", help="error vs knot count study")
    _add_common(p_cmp)
    p_cmp.add_argument("--methods", default="uniform,di_f",
                       help="comma list of methods to compare")
    p_cmp.add_argument("--counts", default="12,16,24,32",
                       help="comma list of total knot counts (n + q); for "
                            "surfaces these drive dimension 1")
    p_cmp.add_argument("--ratio", type=float, default=1.0,
                       help="n2/n1 control-count ratio for 2-D studies")
    p_cmp.add_argument("--periodic-dims", dest="periodic_dims", default="1,2",
                       help="comma list of periodic dimensions, e.g. 1")
    p_cmp.set_defaults(func=cmd_compare)

    p_jmp = sub.add_parser("jumps", help="detect and classify discontinuities")
    _add_common(p_jmp)
    p_jmp.set_defaults(func=cmd_jumps)

    p_der = sub.add_parser("derive", help="spectral derivatives to CSV")
    _add_common(p_der)
    p_der.add_argument("--smooth", action="store_true",
                       help="chain the Gaussian smoothing filter first")
    p_der.add_argument("--fd", action="store_true",
                       help="also emit central-difference derivatives")
    p_der.set_defaults(func=cmd_derive)

    args = parser.parse_args(argv)
    if hasattr(args, "ctrl"):
        args.ctrl = _parse_int_pair(args.ctrl)
        args.ctrl0 = args.ctrl[0]
    try:
        return args.func(args)
    except (InvalidInputError, KnotBudgetError) as exc:
        _fail(EXIT_CONFIG, type(exc).__name__, str(exc))
    except (GridFormatError, OSError) as exc:
        _fail(EXIT_INPUT, type(exc).__name__, str(exc))
    except (SpectrumSymmetryError, FloatingPointError, np.linalg.LinAlgError) as exc:
        _fail(EXIT_NUMERICAL, type(exc).__name__, str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
