"""Quantum lattice-gas simulation of the 1-D Burgers equation on a model NMR processor."""

from qlg_burgers.core import (
    PHI_DEFAULT,
    CollisionOperator,
    OccupationField,
    OccupationPair,
    SiteState,
    apply_collision,
    build_collision,
    collision_from_generator,
    density,
    equilibrium_occupations,
    measure_site,
    site_from_occupations,
    step,
    stream,
)
from qlg_burgers.errors import AnalysisError, ConfigError, ContractError, DomainError, QLGError
from qlg_burgers.kernels import BACKEND

__version__ = "0.1.0"
