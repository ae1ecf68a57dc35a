# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: interpolated-operator matvecs, the RK4 time loop,
and gate application.  Mirrors `_kernels_py`; all kernels fill preallocated
output or work in place."""

import numpy as np

from libc.math cimport cos, sin

ctypedef fused scalar:
    double
    double complex

cdef double complex J = 1j


cdef inline void _pair_apply(double[::1] diag, double[::1] weights, double wsum,
                             double s, scalar[::1] x, scalar[::1] out,
                             int n) noexcept nogil:
    cdef Py_ssize_t dim = x.shape[0]
    cdef double tb = 0.5 * (1.0 - s)
    cdef Py_ssize_t z, mask
    cdef int i
    cdef scalar acc
    for z in range(dim):
        acc = 0
        for i in range(n):
            mask = (<Py_ssize_t>1) << (n - 1 - i)
            acc = acc + weights[i] * x[z ^ mask]
        out[z] = (s * diag[z] + tb * wsum) * x[z] - tb * acc


def pair_matvec(double[::1] diag, double[::1] weights, double s,
                scalar[::1] x, scalar[::1] out, int n):
    cdef double wsum = 0.0
    cdef int i
    for i in range(n):
        wsum += weights[i]
    with nogil:
        _pair_apply(diag, weights, wsum, s, x, out, n)


def negation_matvec(double[::1] diag_rep, double[::1] weights, double s,
                    scalar[::1] x, scalar[::1] out, int n):
    cdef Py_ssize_t half = (<Py_ssize_t>1) << (n - 1)
    cdef Py_ssize_t full = ((<Py_ssize_t>1) << n) - 1
    cdef double wsum = 0.0
    cdef int i
    for i in range(n):
        wsum += weights[i]
    cdef double tb = 0.5 * (1.0 - s)
    cdef Py_ssize_t z, q
    cdef scalar acc
    with nogil:
        for z in range(half):
            acc = 0
            for i in range(n):
                q = z ^ ((<Py_ssize_t>1) << (n - 1 - i))
                if q >= half:
                    q = q ^ full
                acc = acc + weights[i] * x[q]
            out[z] = (s * diag_rep[z] + tb * wsum) * x[z] - tb * acc


cdef inline void _ham_minus_i(double[::1] diag, double[::1] weights, double wsum,
                              double s, double complex[::1] x,
                              double complex[::1] out, int n) noexcept nogil:
    cdef Py_ssize_t dim = x.shape[0]
    cdef double tb = 0.5 * (1.0 - s)
    cdef Py_ssize_t z, mask
    cdef int i
    cdef double complex acc
    for z in range(dim):
        acc = 0
        for i in range(n):
            mask = (<Py_ssize_t>1) << (n - 1 - i)
            acc = acc + weights[i] * x[z ^ mask]
        out[z] = -J * ((s * diag[z] + tb * wsum) * x[z] - tb * acc)


def rk4_propagate(double[::1] diag, double[::1] weights, double[::1] svals,
                  double h, double complex[::1] psi, int n):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t steps = (svals.shape[0] - 1) // 2
    cdef double wsum = 0.0
    cdef int i
    for i in range(n):
        wsum += weights[i]
    k1a = np.empty(dim, dtype=np.complex128)
    k2a = np.empty(dim, dtype=np.complex128)
    k3a = np.empty(dim, dtype=np.complex128)
    k4a = np.empty(dim, dtype=np.complex128)
    tmpa = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] k1 = k1a, k2 = k2a, k3 = k3a, k4 = k4a, tmp = tmpa
    cdef Py_ssize_t step, z
    cdef double s0, sh, s1
    with nogil:
        for step in range(steps):
            s0 = svals[2 * step]
            sh = svals[2 * step + 1]
            s1 = svals[2 * step + 2]
            _ham_minus_i(diag, weights, wsum, s0, psi, k1, n)
            for z in range(dim):
                tmp[z] = psi[z] + (0.5 * h) * k1[z]
            _ham_minus_i(diag, weights, wsum, sh, tmp, k2, n)
            for z in range(dim):
                tmp[z] = psi[z] + (0.5 * h) * k2[z]
            _ham_minus_i(diag, weights, wsum, sh, tmp, k3, n)
            for z in range(dim):
                tmp[z] = psi[z] + h * k3[z]
            _ham_minus_i(diag, weights, wsum, s1, tmp, k4, n)
            for z in range(dim):
                psi[z] = psi[z] + (h / 6.0) * (k1[z] + 2.0 * k2[z] + 2.0 * k3[z] + k4[z])


cdef inline void _rotate(double complex[::1] psi, Py_ssize_t mask,
                         double theta) noexcept nogil:
    cdef Py_ssize_t dim = psi.shape[0]
    cdef double c = cos(0.5 * theta)
    cdef double sn = sin(0.5 * theta)
    # exp(-i theta/2) * (cos(theta/2) I + i sin(theta/2) sigma_x)
    cdef double complex a = c * c - J * (sn * c)
    cdef double complex b = sn * sn + J * (c * sn)
    cdef Py_ssize_t z
    cdef double complex x0, x1
    for z in range(dim):
        if z & mask:
            continue
        x0 = psi[z]
        x1 = psi[z | mask]
        psi[z] = a * x0 + b * x1
        psi[z | mask] = b * x0 + a * x1


cdef inline void _phase_row(double complex[::1] psi, unsigned char[:, ::1] flags,
                            Py_ssize_t row, double phi) noexcept nogil:
    cdef Py_ssize_t dim = psi.shape[0]
    cdef double complex ph = cos(phi) - J * sin(phi)
    cdef Py_ssize_t z
    for z in range(dim):
        if flags[row, z]:
            psi[z] = psi[z] * ph


def bit_rotation(double complex[::1] psi, int bit, double theta, int n):
    cdef Py_ssize_t mask = (<Py_ssize_t>1) << (n - 1 - bit)
    with nogil:
        _rotate(psi, mask, theta)


def phase_flags(double complex[::1] psi, unsigned char[::1] flags, double phi, int n):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef double complex ph = cos(phi) - J * sin(phi)
    cdef Py_ssize_t z
    with nogil:
        for z in range(dim):
            if flags[z]:
                psi[z] = psi[z] * ph


def execute_gates(double complex[::1] psi, signed char[::1] kinds,
                  long long[::1] targets, double[::1] angles,
                  unsigned char[:, ::1] clause_flags, int n):
    cdef Py_ssize_t ngates = kinds.shape[0]
    cdef Py_ssize_t g, mask
    with nogil:
        for g in range(ngates):
            if kinds[g] == 0:
                _phase_row(psi, clause_flags, targets[g], angles[g])
            else:
                mask = (<Py_ssize_t>1) << (n - 1 - targets[g])
                _rotate(psi, mask, angles[g])
