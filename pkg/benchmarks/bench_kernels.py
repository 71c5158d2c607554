"""Time the compiled kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from qlg_burgers import _pykernels
from qlg_burgers.core import PHI_DEFAULT, build_collision

try:
    from qlg_burgers import _ckernels
except ImportError:
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    f1, f2 = rng.random(4096), rng.random(4096)
    U = build_collision(PHI_DEFAULT).matrix
    b = 0.05 * (rng.standard_normal(64) + 1j * rng.standard_normal(64))
    u0 = 1 + 0.4 * np.sin(np.linspace(0, 2 * np.pi, 128, endpoint=False))
    return {
        "collide_sweep (4096 sites)": lambda m: m.collide_sweep(f1, f2, U),
        "hard_pulse_train (64 sites)": lambda m: m.hard_pulse_train(b, 64),
        "burgers_substeps (128 pts, 500 sub)": lambda m: m.burgers_substeps(
            u0.copy(), 0.33, -1.3, 1.0, 1 / 8, 0.005, 500
        ),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'kernel':38s}" + "".join(f"{name:>14s}" for name, _ in backends) + "    speedup")
    for label, fn in cases().items():
        times = []
        for _, mod in backends:
            number = 20
            best = min(timeit.repeat(lambda: fn(mod), number=number, repeat=args.repeat)) / number
            times.append(best)
        cols = "".join(f"{t * 1e3:11.3f} ms" for t in times)
        speed = f"{times[0] / times[1]:9.1f}x" if len(times) == 2 else "        -"
        print(f"{label:38s}{cols}  {speed}")
    if _ckernels is None:
        print("compiled extension not built; only the NumPy fallback was timed")


if __name__ == "__main__":
    main()
