"""Command-line front end.

Subcommands ``chi``, ``sweep``, ``fock``, ``tac`` and ``verify`` each print one
JSON document (or a CSV table with ``--format csv``) to stdout or ``--out``.
Errors are reported as JSON on stderr with exit code 2 (bad input) or 3
(quadrature did not converge); ``verify`` exits with 1 when a check fails.
"""

import argparse
import csv
import io
import json
import sys
import warnings

import numpy as np

from ._parallel import ordered_map
from .coincidence import ExperimentConfig, estimate_ratio, simulate_pulse_train
from .coincidence import verify_time_structure
from .errors import ConvergenceError, FourPhotonError, PreconditionError
from .fock import MultiProcessState, chi_from_fock, four_photon_decomposition, probabilities
from .moments import chi_closed_form, chi_quadrature, gaussian_setup
from .spectra import RatioConvention, operating_point

EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3


def run_chi(pump_fwhm_fs, filter_fwhm_nm, lambda_nm=1310.0, quadrature=False,
            convention=RatioConvention.SIGMA_RATIO, points=None):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        point = operating_point(pump_fwhm_fs, filter_fwhm_nm, lambda_nm, convention)
    report = {
        "ratio": point.ratio,
        "r_convention": point.convention,
        "coherence_time_fs": point.coherence_time_fs,
        "pump_fwhm_fs": point.pump_duration_fs,
        "filter_fwhm_nm": filter_fwhm_nm,
        "lambda_nm": lambda_nm,
        "chi_closed_form": chi_closed_form(point.ratio),
        "warnings": [str(w.message) for w in caught],
    }
    if quadrature:
        result = chi_quadrature(point.ratio, points)
        report["chi_quadrature"] = result.chi
        report["quadrature_error"] = result.error_estimate
        report["grid_points"] = result.grid_points
    return report


def run_sweep(r_min, r_max, points, log=False, grid_points=None):
    """Rows ``(r, chi_closed_form, chi_quadrature, quadrature_error)`` in input order."""
    if not 0 < r_min < r_max:
        raise PreconditionError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    if points < 2:
        raise PreconditionError("a sweep needs at least 2 points")
    ratios = np.geomspace(r_min, r_max, points) if log else np.linspace(r_min, r_max, points)

    def row(r):
        result = chi_quadrature(float(r), grid_points)
        return {"r": float(r), "chi_closed_form": chi_closed_form(float(r)),
                "chi_quadrature": result.chi, "quadrature_error": result.error_estimate}

    return ordered_map(row, ratios)


def run_fock(n, xi, max_pairs=6):
    state = MultiProcessState.build(n, xi, max_pairs)
    table = probabilities(state)
    decomposition = four_photon_decomposition(n)
    summary = {
        "N": n,
        "xi": xi,
        "chi": chi_from_fock(state),
        "tail_bound": state.tail_bound,
        "weight_entangled": decomposition.weight_entangled,
        "weight_two_pairs": decomposition.weight_two_pairs,
    }
    return summary, state.to_csv(), table


def run_tac(p2, chi, pulses, seed, eta=1.0, dark=0.0, period_ns=13.0, bin_ns=0.1):
    config = ExperimentConfig(p2=p2, chi=chi, pulses=pulses, seed=seed, eta=eta, dark=dark,
                              period_ns=period_ns, bin_ns=bin_ns)
    hist = simulate_pulse_train(config)
    return estimate_ratio(hist, config), hist


def run_verify(tau_widths, ratio=1.0):
    amplitude, filt, config = gaussian_setup(ratio)
    tau = tau_widths / amplitude.pump.width
    report = verify_time_structure(amplitude, filt, tau, config.signal_grid, config.idler_grid)
    keyed = lambda d: {f"{a:g},{b:g}": v for (a, b), v in d.items()}  # noqa: E731
    return {
        "ratio": ratio,
        "tau": report.tau,
        "window": report.window,
        "r1": keyed(report.r1),
        "r2": keyed(report.r2),
        "half_time_rate": keyed(report.half_time_rate),
        "j2f": report.j2f,
        "j4f": report.j4f,
        "chi": report.chi,
        "peak_ratio": report.peak_ratio,
        "checks": report.checks,
        "passed": report.passed,
    }


def _json(obj):
    def default(value):
        if isinstance(value, np.generic):
            return value.item()
        raise TypeError(f"cannot serialize {type(value)}")

    return json.dumps(obj, indent=2, sort_keys=True, default=default,
                      allow_nan=True) + "\n"


def _csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(float(row[c])) for c in columns])
    return buf.getvalue()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def build_parser():
    parser = argparse.ArgumentParser(prog="fourphoton", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("chi", help="chi for a pump duration and filter bandwidth")
    p.add_argument("--pump-fwhm-fs", type=float, required=True)
    p.add_argument("--filter-fwhm-nm", type=float, required=True)
    p.add_argument("--lambda-nm", type=float, default=1310.0)
    p.add_argument("--quadrature", action="store_true", help="also integrate numerically")
    p.add_argument("--grid-points", type=int, help="quadrature points per axis (default: automatic)")
    p.add_argument("--r-convention", choices=[c.value for c in RatioConvention],
                   default=RatioConvention.SIGMA_RATIO.value)
    common(p)

    p = sub.add_parser("sweep", help="chi(r) curve, closed form and quadrature")
    p.add_argument("--r-min", type=float, required=True)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log", action="store_true", help="logarithmic spacing")
    p.add_argument("--grid-points", type=int, help="quadrature points per axis (default: automatic)")
    common(p)

    p = sub.add_parser("fock", help="pair statistics of N independent processes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--max-pairs", type=int, default=6)
    common(p)

    p = sub.add_parser("tac", help="Monte Carlo TAC histogram and peak ratio")
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--chi", type=float, required=True)
    p.add_argument("--pulses", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--dark", type=float, default=0.0)
    p.add_argument("--period-ns", type=float, default=13.0)
    p.add_argument("--bin-ns", type=float, default=0.1)
    common(p)

    p = sub.add_parser("verify", help="double-pulse peak structure by direct quadrature")
    p.add_argument("--tau-widths", type=float, required=True,
                   help="pulse separation in units of the pump coherence time")
    p.add_argument("--ratio", type=float, default=1.0, help="delta_p / delta_f")
    common(p)
    return parser


def _dispatch(args):
    if args.command == "chi":
        report = run_chi(args.pump_fwhm_fs, args.filter_fwhm_nm, args.lambda_nm,
                         args.quadrature, args.r_convention, args.grid_points)
        if args.format == "csv":
            columns = [k for k, v in report.items() if isinstance(v, (int, float))]
            return _csv([report], columns), 0
        return _json(report), 0
    if args.command == "sweep":
        rows = run_sweep(args.r_min, args.r_max, args.points, args.log, args.grid_points)
        if args.format == "csv":
            return _csv(rows, ["r", "chi_closed_form", "chi_quadrature", "quadrature_error"]), 0
        return _json(rows), 0
    if args.command == "fock":
        summary, table_csv, _ = run_fock(args.n, args.xi, args.max_pairs)
        return (table_csv if args.format == "csv" else _json(summary)), 0
    if args.command == "tac":
        summary, hist = run_tac(args.p2, args.chi, args.pulses, args.seed, args.eta, args.dark,
                                args.period_ns, args.bin_ns)
        return (hist.to_csv() if args.format == "csv" else _json(summary.__dict__)), 0
    report = run_verify(args.tau_widths, args.ratio)
    if args.format == "csv":
        rows = [{"T_c": k.split(",")[0], "T_d": k.split(",")[1], "r1": report["r1"][k],
                 "r2": v} for k, v in report["r2"].items()]
        return _csv(rows, ["T_c", "T_d", "r1", "r2"]), (0 if report["passed"] else 1)
    return _json(report), (0 if report["passed"] else 1)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text, code = _dispatch(args)
    except ConvergenceError as exc:
        sys.stderr.write(_json({"error": "ConvergenceError", "message": str(exc),
                                "estimate": exc.estimate}))
        return EXIT_CONVERGENCE
    except FourPhotonError as exc:
        sys.stderr.write(_json({"error": type(exc).__name__, "message": str(exc)}))
        return EXIT_DOMAIN
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
