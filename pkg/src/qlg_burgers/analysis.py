"""Classical reference solver, deviation metrics and transport-coefficient fits.

The reference solves

    d_t rho + c (rho - rho_ref) d_x rho = nu d_xx rho

on a periodic grid refined ``refinement`` times relative to the lattice,
with lattice units dx = dt = 1. ``rho_ref = 0`` gives the textbook
``c rho d_x rho`` form; the lattice gas has zero characteristic speed at
a nonzero density, so calibration fits both ``c`` and ``rho_ref``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import signal, stats

from qlg_burgers import kernels
from qlg_burgers.core import PHI_DEFAULT, build_collision, equilibrium_field, evolve
from qlg_burgers.errors import AnalysisError, ConfigError

DEFAULT_WINDOW = (2, 50)

# Runner contract: (initial density profile, number of steps) -> (steps + 1, N) densities.
Runner = Callable[[np.ndarray, int], np.ndarray]


@dataclass(frozen=True)
class ReferenceConfig:
    nu: float
    c: float = 0.0
    refinement: int = 8
    cfl: float = 0.4
    rho_ref: float = 0.0

    def __post_init__(self):
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise ConfigError("nu", f"viscosity must be positive, got {self.nu!r}")
        if not math.isfinite(self.c):
            raise ConfigError("c", "advection coefficient must be finite")
        if int(self.refinement) != self.refinement or self.refinement < 4:
            raise ConfigError("refinement", f"must be an integer >= 4, got {self.refinement!r}")
        if not 0 < self.cfl <= 0.5:
            raise ConfigError("cfl", f"CFL number {self.cfl!r} outside (0, 0.5]")


def _substep_count(u, cfg, h):
    dt = cfg.cfl * h * h / cfg.nu
    speed = abs(cfg.c) * float(np.max(np.abs(u - cfg.rho_ref)))
    if speed > 0:
        dt = min(dt, cfg.cfl * h / speed)
    return max(1, math.ceil(1.0 / dt))


def burgers_reference(initial, cfg, steps, return_fine=False):
    """Fine-grid Burgers solution sampled at the lattice sites after each unit step.

    The initial lattice profile is carried to the fine grid by periodic
    Fourier interpolation, which preserves its mean and its nodal values.
    """
    initial = np.asarray(initial, dtype=np.float64).reshape(-1)
    n = initial.size
    r = int(cfg.refinement)
    h = 1.0 / r
    u = signal.resample(initial, n * r)
    u[::r] = initial
    coarse = [initial.copy()]
    fine = [u.copy()]
    for _ in range(steps):
        nsub = _substep_count(u, cfg, h)
        kernels.burgers_substeps(u, cfg.nu, cfg.c, cfg.rho_ref, h, 1.0 / nsub, nsub)
        coarse.append(u[::r].copy())
        if return_fine:
            fine.append(u.copy())
    coarse = np.array(coarse)
    if return_fine:
        return coarse, np.array(fine)
    return coarse


@dataclass
class DeviationSeries:
    steps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.steps = np.asarray(self.steps, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.steps.shape != self.values.shape:
            raise ValueError("steps and values differ in length")
        if np.any(self.values < 0):
            raise ValueError("deviations must be non-negative")
        if np.any(np.diff(self.steps) <= 0):
            raise ValueError("step indices must be strictly increasing")

    def __len__(self):
        return self.steps.size


def deviation(a, b):
    """Per-step RMS difference of two density histories shaped (steps, N)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2:
        raise ValueError(f"run shapes differ or are not 2-D: {a.shape} vs {b.shape}")
    rms = np.sqrt(np.mean((a - b) ** 2, axis=1))
    return DeviationSeries(np.arange(a.shape[0]), rms)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    stderr: float
    intercept: float
    points: int


def fit_loglog_slope(series, window=DEFAULT_WINDOW):
    lo, hi = window
    sel = (series.steps >= lo) & (series.steps <= hi)
    k = series.steps[sel]
    d = series.values[sel]
    if k.size < 3:
        raise AnalysisError(f"need at least 3 points in window {window}, got {k.size}")
    if np.any(d <= 0) or np.any(k <= 0):
        raise AnalysisError("non-positive deviation or step in fit window; log undefined")
    res = stats.linregress(np.log(k), np.log(d))
    return SlopeFit(float(res.slope), float(res.stderr), float(res.intercept), int(k.size))


def ideal_runner(phi=PHI_DEFAULT):
    """Runner evolving an equilibrium-initialised field with the ideal collision."""
    ops = [build_collision(phi)]

    def run(rho0, steps):
        f1, f2 = evolve(equilibrium_field(rho0), ops, steps)
        return f1 + f2

    return run


def _fundamental(profiles):
    return np.fft.rfft(profiles, axis=1)[:, 1] * (2.0 / profiles.shape[1])


@dataclass(frozen=True)
class ViscosityFit:
    nu: float
    decay_rate: float
    residual: float
    lattice_size: int
    amplitude: float
    mean: float


def estimate_viscosity(
    runner: Runner | None = None,
    *,
    lattice_size=64,
    amplitude=0.01,
    mean=1.0,
    phi=PHI_DEFAULT,
    steps=None,
    skip=10,
    max_residual=5e-3,
):
    """Effective viscosity from the decay of a single small-amplitude sine mode.

    ``nu = -d ln|a_1| / dt / k^2`` with ``k = 2 pi / N``. The first ``skip``
    steps are dropped so the non-hydrodynamic transient has died out.
    """
    runner = runner or ideal_runner(phi)
    n = int(lattice_size)
    if steps is None:
        steps = max(4 * skip, n * n // 8)
    x = np.arange(n)
    rho = runner(mean + amplitude * np.sin(2 * np.pi * x / n), steps)
    amp = np.abs(_fundamental(np.asarray(rho)))
    t = np.arange(amp.size)[skip:]
    if np.any(amp[skip:] <= 0):
        raise AnalysisError("fundamental mode vanished; cannot fit a decay")
    logs = np.log(amp[skip:])
    fit = stats.linregress(t, logs)
    resid = float(np.sqrt(np.mean((logs - (fit.intercept + fit.slope * t)) ** 2)))
    if resid > max_residual:
        raise AnalysisError(f"mode decay is not exponential (rms log residual {resid:.3g})")
    k = 2 * np.pi / n
    rate = -float(fit.slope)
    return ViscosityFit(rate / k**2, rate, resid, n, float(amplitude), float(mean))


@dataclass(frozen=True)
class AdvectionFit:
    c: float
    rho_ref: float
    means: tuple
    drifts: tuple
    residual: float
    lattice_size: int = 0


MODE_FLOOR = 1e-12


def mode_drift(profiles, skip=0):
    """Drift velocity (sites per step) of the fundamental mode of a density history.

    Returns 0 when the mode is below the numerical noise floor.
    """
    a1 = _fundamental(np.asarray(profiles))[skip:]
    if np.min(np.abs(a1)) < MODE_FLOOR:
        return 0.0
    n = np.asarray(profiles).shape[1]
    phase = np.unwrap(np.angle(a1))
    slope = stats.linregress(np.arange(phase.size), phase).slope
    return -float(slope) / (2 * np.pi / n)


def estimate_advection(
    runner: Runner | None = None,
    *,
    lattice_size=64,
    amplitude=0.05,
    means=(0.8, 0.9, 1.0, 1.1, 1.2),
    phi=PHI_DEFAULT,
    steps=None,
    skip=5,
    max_residual=0.02,
):
    """Fit ``c`` and ``rho_ref`` from how fast a density bump drifts on different backgrounds.

    A perturbation riding on background density ``rho`` travels at the
    local characteristic speed ``c (rho - rho_ref)``; a line through the
    measured drifts gives both coefficients.
    """
    runner = runner or ideal_runner(phi)
    n = int(lattice_size)
    if steps is None:
        steps = n
    x = np.arange(n)
    means = tuple(float(m) for m in means)
    if len(means) < 2:
        raise AnalysisError("need at least two background densities")
    drifts = []
    for m in means:
        rho = runner(m + amplitude * np.sin(2 * np.pi * x / n), steps)
        drifts.append(mode_drift(rho, skip))
    drifts = np.array(drifts)
    if not np.all(np.isfinite(drifts)):
        raise AnalysisError("drift measurement failed")
    if np.all(drifts == 0.0):
        return AdvectionFit(0.0, float(np.mean(means)), means, tuple(float(d) for d in drifts), 0.0, n)
    fit = stats.linregress(means, drifts)
    pred = fit.intercept + fit.slope * np.array(means)
    resid = float(np.sqrt(np.mean((drifts - pred) ** 2)))
    scale = float(np.max(np.abs(drifts)))
    if resid > max_residual * max(scale, 1e-300):
        raise AnalysisError(f"drift is not linear in density (rms residual {resid:.3g})")
    c = float(fit.slope)
    rho_ref = -float(fit.intercept) / c if c != 0 else float(np.mean(means))
    return AdvectionFit(c, rho_ref, means, tuple(float(d) for d in drifts), resid, n)


def calibrated_reference(nu_fit, adv_fit, refinement=8, cfl=0.4):
    return ReferenceConfig(
        nu=nu_fit.nu, c=adv_fit.c, refinement=refinement, cfl=cfl, rho_ref=adv_fit.rho_ref
    )
