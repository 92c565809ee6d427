"""Command-line front end: ``plasma-ldp {ldf,finite-n,sample,verify}``.

Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence or
chain divergence, 3 failed invariant.
"""
from __future__ import annotations

import argparse
from concurrent.futures import ThreadPoolExecutor
import math
import sys

import numpy as np

from . import analytic as an
from . import envelope
from . import exact_beta2 as eb
from . import sampler as smp
from .errors import ChainDivergenceError, ConvergenceError, InvariantError
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step``, endpoints included within half a step."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise ValueError(f"grid must look like start:stop:step, got {text!r}") from None
    if not all(math.isfinite(v) for v in (start, stop, step)) or step <= 0 or stop < start:
        raise ValueError(f"invalid grid {text!r}: need finite start <= stop and step > 0")
    n = int(math.floor((stop - start) / step + 0.5)) + 1
    return start + step * np.arange(n)


def _u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _map(fn, items, threads):
    if threads <= 1:
        return [fn(v) for v in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _config(args):
    return {k: v for k, v in vars(args).items() if k != "func"}


def cmd_ldf(args):
    which = args.which
    errors = {}
    if which == "density":
        if args.s is None:
            raise ValueError("--which density needs --s")
        m = an.support_radii(args.s)
        r = parse_grid(args.r_grid) if args.r_grid else parse_grid(f"0:{math.ceil((m.R0 + 0.25) * 100) / 100}:0.01")
        marg = np.atleast_1d(an.radial_density(m, r))
        planar = np.atleast_1d(an.planar_density(m, r))
        header = ["s", "r", "marginal", "planar"]
        rows = [(m.s, ri, a, b) for ri, a, b in zip(r, marg, planar)]
    elif which == "Psi":
        if args.x_grid is None:
            raise ValueError("--which Psi needs --x-grid")
        x = parse_grid(args.x_grid)
        if x[0] <= 0:
            raise ValueError("the rate function is defined for x > 0 only")
        tol = args.tol if args.tol is not None else an.RATE_TOL
        psi = _map(lambda v: an.rate_function(v, tol), x, args.threads)
        s = _map(an.tilt_inverse, x, args.threads)
        header = ["x", "Psi", "s"]
        rows = list(zip(x, psi, s))
        errors["quad_abs_tol"] = tol
    else:
        if args.s_grid is None:
            raise ValueError(f"--which {which} needs --s-grid")
        curve = an.tabulate_cgf(parse_grid(args.s_grid))
        cols = {"J": ["J"], "x": ["x"], "derivatives": ["J1", "J2", "J3", "J4_left", "J4_right"]}[which]
        header = ["s"] + cols
        rows = [(s,) + tuple(curve.columns[c][i] for c in cols) for i, s in enumerate(curve.grid)]
    meta = envelope.header_meta("ldf", _config(args), errors)
    _emit(envelope.format_csv(meta, header, rows), args.out)


def cmd_finite_n(args):
    if args.cumulants:
        Ns = np.unique(np.round(np.geomspace(1, args.N_max, args.n_points)).astype(int))
        tables = [eb.delta_cumulant_table(int(N), args.method) for N in Ns]
        header = ["N", "kappa1", "kappa2", "kappa3", "kappa4", "N2_kappa2", "N4_kappa3", "N6_kappa4",
                  "N6_kappa4_roundoff"]
        rows = [(t.N,) + t.kappa + t.rescaled[1:] + (t.roundoff[3],) for t in tables]
        errors = {"method": args.method, "series_threshold": eb.SERIES_THRESHOLD}
    else:
        if args.N is None or args.s_grid is None:
            raise ValueError("finite-n needs --N and --s-grid (or --cumulants)")
        s = parse_grid(args.s_grid)
        rtol = args.tol if args.tol is not None else eb.FACTOR_RTOL
        finite = _map(lambda v: eb.scaled_log_laplace(args.N, v, rtol), s, args.threads)
        J = an.cumulant_gf(s)
        header = ["s", "scaled_log_laplace", "J", "difference"]
        rows = [(si, f, j, f - j) for si, f, j in zip(s, finite, J)]
        errors = {"max_abs_difference": max(abs(r[3]) for r in rows), "factor_rtol": rtol}
    meta = envelope.header_meta("finite-n", _config(args), errors)
    _emit(envelope.format_csv(meta, header, rows), args.out)


def cmd_sample(args):
    params = smp.PlasmaParams(args.N, args.beta, args.s)
    schedule = smp.Schedule(args.sweeps, args.burn_in, args.step_size, bin_width=args.bin_width)
    stats = smp.run_chain(params, schedule, args.seed)
    theory = an.mean_displacement(params.s)
    summary = {
        "acceptance_rate": stats.acceptance_rate,
        "step_size": stats.step_size,
        "mean_delta": stats.mean,
        "tau_int": stats.tau_int,
        "std_error": stats.std_error,
        "geweke_z": stats.geweke_z,
        "theory_x_of_s": theory,
        "z_vs_theory": (stats.mean - theory) / stats.std_error,
    }
    if params.beta == 2.0:
        exact = eb.tilted_mean_exact(params.N, params.s)
        summary["exact_finite_n_mean"] = exact
        summary["z_vs_exact_finite_n"] = (stats.mean - exact) / stats.std_error
    summary.update({
        "max_energy_drift": stats.max_energy_drift,
        "histogram": {"bin_width": stats.bin_width, "counts": stats.radial_counts,
                      "overflow": stats.overflow},
    })
    config = _config(args)
    trace_meta = envelope.header_meta("sample", config, {"std_error": stats.std_error, "tau_int": stats.tau_int})
    rows = [(stats.burn_in + i, d) for i, d in enumerate(stats.delta_samples)]
    _emit(envelope.format_csv(trace_meta, ["sweep", "delta"], rows), args.out)
    summary_text = envelope.format_json(envelope.header_meta("sample", config), summary)
    if args.summary:
        _emit(summary_text, args.summary)
    elif args.out not in (None, "-"):
        _emit(summary_text, None)
    else:
        sys.stderr.write(summary_text)


def cmd_verify(args):
    report = run_suite(args.suite)
    meta = envelope.header_meta("verify", _config(args))
    _emit(envelope.format_json(meta, report), args.out)
    return EXIT_OK if report["passed"] else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=0, help="64-bit RNG seed (default 0)")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--tol", type=float, default=None, help="override the quadrature tolerance")
    common.add_argument("--threads", type=_positive_int, default=1, help="worker threads for grid points")

    p = _Parser(prog="plasma-ldp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("ldf", parents=[common], help="tabulate closed-form large-deviation functions")
    q.add_argument("--which", required=True, choices=["J", "Psi", "x", "density", "derivatives"])
    q.add_argument("--s-grid")
    q.add_argument("--x-grid")
    q.add_argument("--s", type=float)
    q.add_argument("--r-grid")
    q.set_defaults(func=cmd_ldf)

    q = sub.add_parser("finite-n", parents=[common], help="exact finite-N results at beta=2")
    q.add_argument("--N", type=_positive_int)
    q.add_argument("--s-grid")
    q.add_argument("--cumulants", action="store_true", help="tabulate exact cumulants instead")
    q.add_argument("--N-max", type=_positive_int, default=2000)
    q.add_argument("--n-points", type=_positive_int, default=40)
    q.add_argument("--method", choices=["auto", "raw", "series"], default="auto")
    q.set_defaults(func=cmd_finite_n)

    q = sub.add_parser("sample", parents=[common], help="Metropolis sampling of the tilted plasma")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--s", type=float, default=0.0)
    q.add_argument("--sweeps", type=_positive_int, default=20000)
    q.add_argument("--burn-in", type=int, default=None)
    q.add_argument("--step-size", type=float, default=None)
    q.add_argument("--bin-width", type=float, default=0.01)
    q.add_argument("--summary", default=None, help="path of the JSON summary")
    q.set_defaults(func=cmd_sample)

    q = sub.add_parser("verify", parents=[common], help="run invariant suites")
    q.add_argument("--suite", choices=SUITES + ("all",), default="all")
    q.set_defaults(func=cmd_verify)
    return p


_VALUE_FLAGS = ("--s-grid", "--x-grid", "--r-grid", "--s")


def _glue_negative_values(argv):
    # argparse treats "-3:3:0.05" as an option; "--s-grid=-3:3:0.05" is unambiguous
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    try:
        code = args.func(args)
    except (ConvergenceError, ChainDivergenceError) as exc:
        sys.stderr.write(f"plasma-ldp: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except InvariantError as exc:
        sys.stderr.write(f"plasma-ldp: invariant violated: {exc}\n")
        return EXIT_INVARIANT
    except ValueError as exc:
        sys.stderr.write(f"plasma-ldp: error: {exc}\n")
        return EXIT_USAGE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
