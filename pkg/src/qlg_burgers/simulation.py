"""Config-driven runs of the lattice gas."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qlg_burgers.analysis import DEFAULT_WINDOW, DeviationSeries, deviation, fit_loglog_slope
from qlg_burgers.config import MODULATIONS, RunConfig
from qlg_burgers.core import equilibrium_field, evolve
from qlg_burgers.errors import AnalysisError
from qlg_burgers.nmr import ErrorModel, errorful_collision_set


@dataclass
class RunRecord:
    config: RunConfig
    f1: np.ndarray
    f2: np.ndarray
    deviation: DeviationSeries | None = None

    @property
    def densities(self):
        return self.f1 + self.f2

    @property
    def steps(self):
        return self.f1.shape[0] - 1

    def rows(self):
        """Yield ``(step, site, f1, f2, rho)`` in step-major order."""
        rho = self.densities
        for m in range(self.f1.shape[0]):
            for n in range(self.f1.shape[1]):
                yield m, n, self.f1[m, n], self.f2[m, n], rho[m, n]


def collision_ops(cfg, model=None):
    model = cfg.error() if model is None else model
    return errorful_collision_set(cfg.phi, cfg.j_hz, model, cfg.modulation)


def run(cfg, paired_ideal=False):
    """Evolve the equilibrium-initialised field for ``cfg.steps`` steps.

    With ``paired_ideal`` the record also carries the RMS density deviation
    from an error-free run of the same configuration.
    """
    field0 = equilibrium_field(cfg.initial_density())
    f1, f2 = evolve(field0, collision_ops(cfg), cfg.steps)
    record = RunRecord(cfg, f1, f2)
    if paired_ideal:
        i1, i2 = evolve(field0, collision_ops(cfg, ErrorModel.ideal()), cfg.steps)
        record.deviation = deviation(record.densities, i1 + i2)
    return record


NO_ERROR_TOL = 1e-12


@dataclass
class GrowthResult:
    deviations: dict
    fits: dict
    status: dict


def error_growth(cfg, window=DEFAULT_WINDOW):
    """Deviation of errorful runs from the ideal run, unmodulated and z4-modulated.

    Fits the log-log slope of each series over ``window``. A series that never
    exceeds ``NO_ERROR_TOL`` is reported with status ``no-error`` and no fit.
    """
    deviations, fits, status = {}, {}, {}
    for modulation in MODULATIONS:
        rec = run(cfg.with_overrides(modulation=modulation), paired_ideal=True)
        series = rec.deviation
        deviations[modulation] = series
        if np.all(series.values <= NO_ERROR_TOL):
            fits[modulation], status[modulation] = None, "no-error"
            continue
        try:
            fits[modulation] = fit_loglog_slope(series, window)
            status[modulation] = "ok"
        except AnalysisError as exc:
            fits[modulation], status[modulation] = None, f"fit-failed: {exc}"
    return GrowthResult(deviations, fits, status)
