"""Pure NumPy implementations of the hot loops.

Signatures mirror ``_ckernels.pyx`` exactly; :mod:`qlg_burgers.kernels`
picks one of the two at import time.
"""

import numpy as np


def collide_sweep(f1, f2, U):
    """Encode every site, apply ``U`` and read back (f1, f2).

    Inputs must already lie in [0, 1]. Returns unclamped occupations.
    """
    f1 = np.asarray(f1, dtype=np.float64)
    f2 = np.asarray(f2, dtype=np.float64)
    amps = np.empty((f1.shape[0], 4), dtype=np.complex128)
    amps[:, 0] = np.sqrt(f1 * f2)
    amps[:, 1] = np.sqrt(f1 * (1.0 - f2))
    amps[:, 2] = np.sqrt((1.0 - f1) * f2)
    amps[:, 3] = np.sqrt((1.0 - f1) * (1.0 - f2))
    out = amps @ np.asarray(U, dtype=np.complex128).T
    p = out.real**2 + out.imag**2
    return p[:, 0] + p[:, 1], p[:, 0] + p[:, 2]


def hard_pulse_train(b, nsites):
    """Transverse magnetization (Mx + iMy) after a gradient-interleaved pulse train.

    Every isochromat starts along +z. Sample ``k`` rotates by ``|b[k]|``
    about the transverse axis at angle ``arg(b[k])``, then the gradient
    precesses site ``n`` by ``2*pi*n/nsites``.
    """
    b = np.asarray(b, dtype=np.complex128)
    n = np.arange(nsites)
    half_grad = np.exp(-0.5j * (2.0 * np.pi * n / nsites))
    alpha = np.ones(nsites, dtype=np.complex128)
    beta = np.zeros(nsites, dtype=np.complex128)
    for bk in b:
        theta = abs(bk)
        c = np.cos(0.5 * theta)
        s = np.sin(0.5 * theta)
        eph = bk / theta if theta > 0.0 else 1.0 + 0.0j
        alpha, beta = (
            c * alpha - 1j * s * np.conj(eph) * beta,
            -1j * s * eph * alpha + c * beta,
        )
        alpha = alpha * half_grad
        beta = beta * np.conj(half_grad)
    return 2.0 * np.conj(alpha) * beta


def burgers_substeps(u, nu, c, rho_ref, h, dt, nsub):
    """Advance ``u`` in place by ``nsub`` explicit steps on a periodic grid.

    Flux form ``c/2 (u - rho_ref)^2`` upwinded by the face speed, FTCS
    diffusion.
    """
    lam = dt / h
    mu = nu * dt / (h * h)
    for _ in range(nsub):
        w = u - rho_ref
        wr = np.roll(w, -1)
        speed = 0.5 * c * (w + wr)
        flux = np.where(speed > 0.0, 0.5 * c * w * w, 0.5 * c * wr * wr)
        lap = np.roll(u, -1) - 2.0 * u + np.roll(u, 1)
        u[:] = u - lam * (flux - np.roll(flux, 1)) + mu * lap
    return u
