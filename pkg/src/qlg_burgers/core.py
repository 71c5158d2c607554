"""Ideal quantum lattice-gas algorithm for the 1-D Burgers equation.

Each lattice site holds two qubits. Qubit 1 (the proton spin) carries the
right-moving occupation ``f1``, qubit 2 (the carbon spin) the left-moving
occupation ``f2``. Site amplitudes are stored in the basis order

    (|11>, |10>, |01>, |00>)

which is the Kronecker ordering ``spin_H (x) spin_C`` with single-qubit
order ``(|1>, |0>)``. In that ordering the Pauli matrices take their usual
form and ``f_a = (1 + <sigma_z^a>) / 2``.

One time step is encode -> collide -> measure on every site, followed by
streaming ``f1`` one site right and ``f2`` one site left with periodic
wrap-around.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import expm

from qlg_burgers import kernels
from qlg_burgers.errors import DomainError

# Rotation angle whose cosine is 0.8; reproduces the printed 4x4 collision matrix.
PHI_DEFAULT = np.pi / 4.882

BASIS = ("11", "10", "01", "00")
SPEEDS = (1, -1)

OCCUPATION_TOL = 1e-9
NORM_TOL = 1e-12

SIGMA = {
    "i": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli2(a, b):
    """Two-spin product ``sigma_a (x) sigma_b`` (H first, C second)."""
    return np.kron(SIGMA[a], SIGMA[b])


class OccupationPair(NamedTuple):
    f1: float
    f2: float


@dataclass(frozen=True)
class SiteState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(4)
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise DomainError(f"site state is not normalised (|a|^2 = {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class CollisionOperator:
    matrix: np.ndarray
    label: str = "ideal"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError(f"collision operator must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def unitarity_error(self):
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(4))))

    def number_conserving_part(self):
        """Projection onto the blocks {|11>}, {|10>, |01>}, {|00>}."""
        return self.matrix * _NUMBER_MASK


_NUMBER_MASK = np.zeros((4, 4))
_NUMBER_MASK[0, 0] = _NUMBER_MASK[3, 3] = 1.0
_NUMBER_MASK[1:3, 1:3] = 1.0


@dataclass
class OccupationField:
    f1: np.ndarray
    f2: np.ndarray
    dx: float = 1.0
    dt: float = 1.0

    def __post_init__(self):
        self.f1 = np.array(self.f1, dtype=np.float64).reshape(-1)
        self.f2 = np.array(self.f2, dtype=np.float64).reshape(-1)
        if self.f1.shape != self.f2.shape:
            raise ValueError("f1 and f2 must have the same length")
        if self.f1.size < 2:
            raise ValueError("lattice needs at least 2 sites")
        if not (self.dx > 0 and self.dt > 0):
            raise ValueError("dx and dt must be positive")
        for name, arr in (("f1", self.f1), ("f2", self.f2)):
            if np.any(arr < 0.0) or np.any(arr > 1.0):
                raise DomainError(f"{name} outside [0, 1]")

    def __len__(self):
        return self.f1.size

    @property
    def sites(self):
        return [OccupationPair(float(a), float(b)) for a, b in zip(self.f1, self.f2)]

    @classmethod
    def from_pairs(cls, pairs, dx=1.0, dt=1.0):
        arr = np.asarray(pairs, dtype=np.float64).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1], dx=dx, dt=dt)


def _equilibrium_offset(rho):
    # (16 rho^2 - 32 rho + 25) / 25 > 0 for all real rho
    return 0.625 * (1.0 - np.sqrt(1.0 - (32.0 * rho / 25.0) * (1.0 - 0.5 * rho)))


def equilibrium_arrays(rho):
    """Vectorised equilibrium occupations for a density profile."""
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho < 0.0) or np.any(rho > 2.0) or not np.all(np.isfinite(rho)):
        raise DomainError("number density must lie in [0, 2]")
    b = _equilibrium_offset(rho)
    half = 0.5 * rho
    return np.clip(half + b, 0.0, 1.0), np.clip(half - b, 0.0, 1.0)


def equilibrium_occupations(rho):
    f1, f2 = equilibrium_arrays(float(rho))
    return OccupationPair(float(f1), float(f2))


def equilibrium_field(rho, dx=1.0, dt=1.0):
    f1, f2 = equilibrium_arrays(rho)
    return OccupationField(f1, f2, dx=dx, dt=dt)


def _check_pair(pair):
    f1, f2 = pair
    if not (0.0 <= f1 <= 1.0 and 0.0 <= f2 <= 1.0):
        raise DomainError(f"occupations must lie in [0, 1], got ({f1}, {f2})")
    return float(f1), float(f2)


def site_from_occupations(pair):
    f1, f2 = _check_pair(pair)
    amps = np.sqrt(
        [f1 * f2, f1 * (1.0 - f2), (1.0 - f1) * f2, (1.0 - f1) * (1.0 - f2)]
    )
    return SiteState(amps)


def clamp_occupations(values, name="occupation"):
    """Clip roundoff excursions; anything beyond OCCUPATION_TOL is a real violation."""
    values = np.asarray(values, dtype=np.float64)
    if np.any(values < -OCCUPATION_TOL) or np.any(values > 1.0 + OCCUPATION_TOL):
        worst = values[np.argmax(np.abs(values - 0.5))]
        raise DomainError(f"{name} {worst!r} outside [0, 1] beyond roundoff")
    return np.clip(values, 0.0, 1.0)


def measure_site(site):
    p = np.abs(site.amplitudes) ** 2
    f1 = clamp_occupations(p[0] + p[1], "f1")
    f2 = clamp_occupations(p[0] + p[2], "f2")
    return OccupationPair(float(f1), float(f2))


def build_collision(phi):
    """Block rotation by ``phi`` on (|10>, |01>); identity on |11> and |00>."""
    c, s = np.cos(phi), np.sin(phi)
    m = np.eye(4, dtype=np.complex128)
    m[1, 1] = m[2, 2] = c
    m[1, 2] = s
    m[2, 1] = -s
    return CollisionOperator(m, "ideal")


def collision_from_generator(angle):
    """``exp[-i (angle/2) (sx^H sy^C - sy^H sx^C)]``.

    The generator has eigenvalues +-2 on the one-particle block, so the
    half-angle makes ``collision_from_generator(a) == build_collision(a)``.
    """
    gen = pauli2("x", "y") - pauli2("y", "x")
    return CollisionOperator(expm(-0.5j * angle * gen), "ideal")


def apply_collision(site, op):
    return SiteState(op.matrix @ site.amplitudes)


def stream(field):
    return OccupationField(
        np.roll(field.f1, SPEEDS[0]),
        np.roll(field.f2, SPEEDS[1]),
        dx=field.dx,
        dt=field.dt,
    )


def collide_field(field, op):
    """Encode, collide and measure every site (no streaming)."""
    g1, g2 = kernels.collide_sweep(field.f1, field.f2, op.matrix)
    return OccupationField(
        clamp_occupations(g1, "f1"),
        clamp_occupations(g2, "f2"),
        dx=field.dx,
        dt=field.dt,
    )


def step(field, ops: Sequence[CollisionOperator], step_index=0):
    if len(ops) == 0:
        raise ValueError("at least one collision operator is required")
    if step_index < 0:
        raise ValueError("step_index must be non-negative")
    return stream(collide_field(field, ops[step_index % len(ops)]))


def density(field):
    return field.f1 + field.f2


def evolve(field, ops, steps):
    """Iterate ``step`` and return the (f1, f2) histories, each ``(steps + 1, N)``."""
    f1 = np.empty((steps + 1, len(field)))
    f2 = np.empty_like(f1)
    f1[0], f2[0] = field.f1, field.f2
    for m in range(steps):
        field = step(field, ops, m)
        f1[m + 1], f2[m + 1] = field.f1, field.f2
    return f1, f2
