"""Kernel backend selection.

The compiled Cython module is used when it was built; otherwise the
NumPy implementations take over. ``BACKEND`` names the active one.
"""

try:
    from qlg_burgers import _ckernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    from qlg_burgers import _pykernels as _impl

    BACKEND = "python"

collide_sweep = _impl.collide_sweep
hard_pulse_train = _impl.hard_pulse_train
burgers_substeps = _impl.burgers_substeps

__all__ = ["BACKEND", "collide_sweep", "hard_pulse_train", "burgers_substeps"]
