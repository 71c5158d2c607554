# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot loops; see ``_pykernels`` for the reference."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, fabs

cnp.import_array()


def collide_sweep(const double[::1] f1, const double[::1] f2,
                  const double complex[:, ::1] U):
    cdef Py_ssize_t N = f1.shape[0]
    cdef Py_ssize_t n, i, j
    cdef double complex a[4]
    cdef double complex b[4]
    cdef double p0, p1, p2
    g1 = np.empty(N, dtype=np.float64)
    g2 = np.empty(N, dtype=np.float64)
    cdef double[::1] o1 = g1
    cdef double[::1] o2 = g2
    with nogil:
        for n in range(N):
            a[0] = sqrt(f1[n] * f2[n])
            a[1] = sqrt(f1[n] * (1.0 - f2[n]))
            a[2] = sqrt((1.0 - f1[n]) * f2[n])
            a[3] = sqrt((1.0 - f1[n]) * (1.0 - f2[n]))
            for i in range(4):
                b[i] = 0
                for j in range(4):
                    b[i] = b[i] + U[i, j] * a[j]
            p0 = b[0].real * b[0].real + b[0].imag * b[0].imag
            p1 = b[1].real * b[1].real + b[1].imag * b[1].imag
            p2 = b[2].real * b[2].real + b[2].imag * b[2].imag
            o1[n] = p0 + p1
            o2[n] = p0 + p2
    return g1, g2


def hard_pulse_train(const double complex[::1] b, Py_ssize_t nsites):
    cdef Py_ssize_t K = b.shape[0]
    cdef Py_ssize_t n, k
    cdef double theta, c, s, g
    cdef double complex eph, hg, al, be, al2
    mxy = np.empty(nsites, dtype=np.complex128)
    cdef double complex[::1] out = mxy
    cdef double twopi = 6.283185307179586
    with nogil:
        for n in range(nsites):
            g = twopi * n / nsites
            hg = cos(0.5 * g) - 1j * sin(0.5 * g)
            al = 1.0
            be = 0.0
            for k in range(K):
                theta = sqrt(b[k].real * b[k].real + b[k].imag * b[k].imag)
                c = cos(0.5 * theta)
                s = sin(0.5 * theta)
                if theta > 0.0:
                    eph = b[k] / theta
                else:
                    eph = 1.0
                al2 = c * al - 1j * s * eph.conjugate() * be
                be = -1j * s * eph * al + c * be
                al = al2 * hg
                be = be * hg.conjugate()
            out[n] = 2.0 * al.conjugate() * be
    return mxy


def burgers_substeps(double[::1] u, double nu, double c, double rho_ref,
                     double h, double dt, Py_ssize_t nsub):
    cdef Py_ssize_t M = u.shape[0]
    cdef Py_ssize_t i, s, ip, im
    cdef double lam = dt / h
    cdef double mu = nu * dt / (h * h)
    cdef double w, wr, lap
    flux_arr = np.empty(M, dtype=np.float64)
    new_arr = np.empty(M, dtype=np.float64)
    cdef double[::1] flux = flux_arr
    cdef double[::1] new = new_arr
    with nogil:
        for s in range(nsub):
            for i in range(M):
                ip = i + 1 if i + 1 < M else 0
                w = u[i] - rho_ref
                wr = u[ip] - rho_ref
                if 0.5 * c * (w + wr) > 0.0:
                    flux[i] = 0.5 * c * w * w
                else:
                    flux[i] = 0.5 * c * wr * wr
            for i in range(M):
                ip = i + 1 if i + 1 < M else 0
                im = i - 1 if i > 0 else M - 1
                lap = u[ip] - 2.0 * u[i] + u[im]
                new[i] = u[i] - lam * (flux[i] - flux[im]) + mu * lap
            for i in range(M):
                u[i] = new[i]
    return np.asarray(u)
