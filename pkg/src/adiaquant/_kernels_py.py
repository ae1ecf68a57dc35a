"""Pure-numpy implementations of the hot kernels.

Signature-compatible with the compiled extension `_kernels`; selected by
`backend` when the extension is unavailable or disabled.  Correct but
slower: the per-step python overhead dominates on long integrations.
"""

import numpy as np


def _flipped(x, n, bit):
    """Copy of x with basis-index bit `bit` (0-based, MSB first) flipped."""
    lead = 1 << bit
    rest = x.shape[0] // (2 * lead)
    return x.reshape(lead, 2, rest)[:, ::-1, :].reshape(x.shape[0])


def pair_matvec(diag, weights, s, x, out, n):
    """out = [(1-s) H_B + s H_P] x for the structural operator pair."""
    np.multiply(s * diag + 0.5 * (1.0 - s) * weights.sum(), x, out=out)
    for i in range(n):
        out -= (0.5 * (1.0 - s) * weights[i]) * _flipped(x, n, i)
    return out


def negation_matvec(diag_rep, weights, s, x, out, n):
    """Same operator restricted to the +1 global-negation sector.

    Basis: representatives r in [0, 2^(n-1)); flipping a bit may leave the
    representative range, in which case the complement index is used.
    """
    half = 1 << (n - 1)
    full = (1 << n) - 1
    r = np.arange(half)
    np.multiply(s * diag_rep + 0.5 * (1.0 - s) * weights.sum(), x, out=out)
    for i in range(n):
        q = r ^ (1 << (n - 1 - i))
        q = np.where(q >= half, q ^ full, q)
        out -= (0.5 * (1.0 - s) * weights[i]) * x[q]
    return out


def rk4_propagate(diag, weights, svals, h, psi, n):
    """Classic RK4 march of i dpsi/dt = H(s(t)) psi, in place.

    `svals` holds s at the half-step grid t = 0, h/2, h, ... so the kernel
    never calls back into the schedule.
    """
    steps = (len(svals) - 1) // 2
    scratch = np.empty_like(psi)

    def hpsi(s, x):
        pair_matvec(diag, weights, s, x, scratch, n)
        return -1j * scratch

    for step in range(steps):
        s0 = svals[2 * step]
        sh = svals[2 * step + 1]
        s1 = svals[2 * step + 2]
        k1 = hpsi(s0, psi)
        k2 = hpsi(sh, psi + (0.5 * h) * k1)
        k3 = hpsi(sh, psi + (0.5 * h) * k2)
        k4 = hpsi(s1, psi + h * k3)
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return psi


def bit_rotation(psi, bit, theta, n):
    """exp(-i theta (1 - sigma_x)/2) on one bit, in place."""
    c, sn = np.cos(0.5 * theta), np.sin(0.5 * theta)
    a = c * c - 1j * sn * c
    b = sn * sn + 1j * c * sn
    lead = 1 << bit
    rest = psi.shape[0] // (2 * lead)
    view = psi.reshape(lead, 2, rest)
    x0 = view[:, 0, :].copy()
    x1 = view[:, 1, :]
    view[:, 0, :] = a * x0 + b * x1
    view[:, 1, :] = b * x0 + a * x1
    return psi


def phase_flags(psi, flags, phi, n):
    """Multiply flagged amplitudes by exp(-i phi), in place."""
    psi[flags.astype(bool)] *= np.cos(phi) - 1j * np.sin(phi)
    return psi


def execute_gates(psi, kinds, targets, angles, clause_flags, n):
    """Apply a compiled gate list in order; kind 0 = phase, 1 = rotation."""
    for g in range(len(kinds)):
        if kinds[g] == 0:
            phase_flags(psi, clause_flags[targets[g]], angles[g], n)
        else:
            bit_rotation(psi, targets[g], angles[g], n)
    return psi
