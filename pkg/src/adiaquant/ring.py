"""Closed-form low-lying spectrum of the even-length agree ring.

After fermionization the interpolating operator splits into commuting 2x2
blocks labeled by odd momenta p = 1, 3, ..., n-1 (the odd set comes from
the antiperiodic boundary condition picked by the +1 negation sector).
Each block contributes a pair of levels; the ground state takes the lower
level of every block and the first excitation promotes the p=1 block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AdiaquantError
from .spectrum import golden_section_min


def _check_args(n, p=1, s=0.0):
    if n < 2 or n % 2:
        raise AdiaquantError(f"ring solution needs even n >= 2, got {n}")
    if p % 2 == 0 or not 1 <= p <= n - 1:
        raise AdiaquantError(f"momentum p must be odd in 1..{n - 1}, got {p}")
    if not 0.0 <= s <= 1.0:
        raise AdiaquantError(f"s={s} outside [0, 1]")


def momentum_block(n, p, s):
    """The 2x2 block over the (empty, doubly-occupied) pair states."""
    _check_args(n, p, s)
    ang = np.pi * p / n
    return np.array(
        [
            [s + s * np.cos(ang), 1j * s * np.sin(ang)],
            [-1j * s * np.sin(ang), 4.0 - 3.0 * s - s * np.cos(ang)],
        ]
    )


def block_eigenvalues(n, p, s):
    """Closed-form eigenvalue pair (lower, upper) of one momentum block."""
    _check_args(n, p, s)
    root = np.sqrt(
        (2.0 - 3.0 * s) ** 2
        + 4.0 * s * (1.0 - s) * (1.0 - np.cos(np.pi * p / n))
    )
    return 2.0 - s - root, 2.0 - s + root


@dataclass(frozen=True)
class MomentumBlock:
    n: int
    p: int

    def matrix(self, s):
        return momentum_block(self.n, self.p, s)

    def eigenvalues(self, s):
        return block_eigenvalues(self.n, self.p, s)


@dataclass(frozen=True)
class RingSpectrum:
    n: int

    def __post_init__(self):
        _check_args(self.n)

    @property
    def momenta(self):
        return range(1, self.n, 2)

    def ground_energy(self, s):
        return sum(block_eigenvalues(self.n, p, s)[0] for p in self.momenta)

    def first_excited_energy(self, s):
        lo1, hi1 = block_eigenvalues(self.n, 1, s)
        return self.ground_energy(s) - lo1 + hi1

    def gap(self, s):
        lo1, hi1 = block_eigenvalues(self.n, 1, s)
        return hi1 - lo1


def ring_levels(n, s):
    """(ground energy, first excited energy) in the invariant sector."""
    spec = RingSpectrum(n)
    return spec.ground_energy(s), spec.first_excited_energy(s)


def ring_gap(n, resolution=1e-10):
    """Minimum gap and its location, found by golden section near s=2/3.

    A coarse scan brackets the minimum first, so small rings whose dip
    drifts away from 2/3 are still handled.
    """
    if n < 4:
        raise AdiaquantError("ring gap needs n >= 4")
    spec = RingSpectrum(n)
    grid = np.linspace(0.0, 1.0, 101)
    gaps = [spec.gap(s) for s in grid]
    j = int(np.argmin(gaps))
    lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, len(grid) - 1)]
    s_star, g_min = golden_section_min(spec.gap, lo, hi, resolution)
    return float(g_min), float(s_star)
