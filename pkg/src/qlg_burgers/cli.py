"""Command-line driver.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 analysis failure.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from qlg_burgers.analysis import DEFAULT_WINDOW, estimate_advection, estimate_viscosity
from qlg_burgers.config import load_config
from qlg_burgers.core import PHI_DEFAULT
from qlg_burgers.errors import ConfigError, QLGError
from qlg_burgers.nmr import encode_profile
from qlg_burgers.simulation import error_growth, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_ANALYSIS = 4

MIN_CALIBRATION_SIZE = 16


def fmt(value):
    """Locale-independent 17-significant-digit float formatting."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def parse_window(text):
    try:
        lo, hi = (int(s) for s in text.split(":"))
    except ValueError:
        raise ConfigError("--window", f"expected A:B, got {text!r}") from None
    if lo < 1 or hi <= lo:
        raise ConfigError("--window", f"need 1 <= A < B, got {text!r}")
    return lo, hi


@contextlib.contextmanager
def open_output(path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def write_csv(fh, header, rows):
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")


def _load(args):
    cfg = load_config(args.config)
    if args.steps is not None:
        if args.steps < 0:
            raise ConfigError("--steps", "must be >= 0")
        cfg = cfg.with_overrides(steps=args.steps)
    return cfg


def cmd_simulate(args):
    cfg = _load(args)
    record = run(cfg)
    with open_output(args.out or cfg.output) as fh:
        write_csv(fh, ["step", "site", "f1", "f2", "rho"], record.rows())
    return EXIT_OK


def cmd_error_growth(args):
    cfg = _load(args)
    window = parse_window(args.window) if args.window else DEFAULT_WINDOW
    result = error_growth(cfg, window)
    none, z4 = result.deviations["none"], result.deviations["z4"]
    out = args.out or cfg.output
    with open_output(out) as fh:
        write_csv(
            fh,
            ["step", "deviation_none", "deviation_z4"],
            zip(none.steps, none.values, z4.values),
        )
    summary = []
    for mod in ("none", "z4"):
        fit = result.fits[mod]
        if fit is None:
            summary.append((mod, math.nan, math.nan, 0, result.status[mod]))
        else:
            summary.append((mod, fit.slope, fit.stderr, fit.points, result.status[mod]))
    header = ["modulation", "slope", "stderr", "points", "status"]
    if out:
        path = Path(out)
        with open(path.with_name(path.stem + "_slopes.csv"), "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, header, summary)
    report = sys.stdout if out else sys.stderr
    for mod, slope, err, npts, status in summary:
        print(f"{mod}: slope={fmt(slope)} stderr={fmt(err)} points={npts} status={status}", file=report)
    return EXIT_OK


def cmd_calibrate(args):
    if args.lattice_size < MIN_CALIBRATION_SIZE:
        raise ConfigError("--lattice-size", "lattice too small for calibration")
    nu = estimate_viscosity(lattice_size=args.lattice_size, phi=args.phi)
    adv = estimate_advection(lattice_size=args.lattice_size, phi=args.phi)
    lines = [
        f"nu_eff = {fmt(nu.nu)}",
        f"c_eff = {fmt(adv.c)}",
        f"rho_ref = {fmt(adv.rho_ref)}",
        f"lattice_size = {args.lattice_size}",
        f"phi = {fmt(args.phi)}",
        f"nu_decay_rate = {fmt(nu.decay_rate)}",
        f"nu_fit_residual = {fmt(nu.residual)}",
        f"c_fit_residual = {fmt(adv.residual)}",
        "drifts = " + ", ".join(f"{fmt(m)}:{fmt(d)}" for m, d in zip(adv.means, adv.drifts)),
    ]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def encode_target(shape, n, amplitude):
    x = np.arange(n)
    if shape == "zero":
        return np.zeros(n)
    if shape == "constant":
        return np.full(n, amplitude)
    if shape == "sinusoid":
        return amplitude * np.sin(2 * np.pi * x / n)
    if shape == "gaussian":
        return amplitude * np.exp(-0.5 * ((x - n / 2) / (n / 8)) ** 2)
    raise ConfigError("--profile", f"unknown profile {shape!r}")


def cmd_encode_test(args):
    if args.lattice_size < 2:
        raise ConfigError("--lattice-size", "must be >= 2")
    if not 0 < abs(args.amplitude) <= 1 and args.profile != "zero":
        raise ConfigError("--amplitude", "must lie in (0, 1]")
    if args.scales:
        try:
            scales = [float(s) for s in args.scales.split(",")]
        except ValueError:
            raise ConfigError("--scales", f"bad list {args.scales!r}") from None
    else:
        scales = [args.scale_max * 0.5**j for j in range(args.points)]
    if not scales or any(not s > 0 for s in scales):
        raise ConfigError("--scales", "flip scales must be positive")
    desired = encode_target(args.profile, args.lattice_size, args.amplitude)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for s in scales:
            enc = encode_profile(desired, s)
            rows.append((s, enc.normalized_error(), int(enc.nonlinear)))
    with open_output(args.out) as fh:
        write_csv(fh, ["flip_scale", "max_error", "nonlinear"], rows)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qlg-burgers",
        description="Quantum lattice-gas Burgers simulator with an NMR pulse-error model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a configuration and write step,site,f1,f2,rho")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--steps", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("error-growth", help="deviation growth with and without z4 modulation")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--steps", type=int)
    p.add_argument("--window", help="fit window A:B in steps (default 2:50)")
    p.set_defaults(func=cmd_error_growth)

    p = sub.add_parser("calibrate", help="effective viscosity and advection coefficient")
    p.add_argument("--lattice-size", type=int, default=64)
    p.add_argument("--phi", type=float, default=PHI_DEFAULT)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("encode-test", help="small-flip-angle encoding error vs flip scale")
    p.add_argument(
        "--profile", default="sinusoid", choices=["sinusoid", "gaussian", "constant", "zero"]
    )
    p.add_argument("--lattice-size", type=int, default=16)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--scales", help="comma-separated flip scales")
    p.add_argument("--scale-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode_test)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QLGError as exc:
        print(f"analysis failure: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())
