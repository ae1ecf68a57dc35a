"""Time integration of the interpolating evolution and measurement.

Fixed-step classic Runge-Kutta on the complex amplitude vector, no
renormalization: the norm drift is a diagnostic and an error guard, never
silently corrected.  The success metric is the squared projection onto the
whole minimum-energy subspace of the problem part, so problems with several
satisfying assignments count any of them as success.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import ceil
from typing import Callable

import numpy as np

from . import backend
from .errors import NormDriftError, StateError
from .hamiltonian import OperatorPair, StateVector, initial_state
from .instance import index_to_bitstring

DEFAULT_DRIFT_BOUND = 1e-6


@dataclass(frozen=True)
class Schedule:
    """Total time plus the s(t) profile, linear unless overridden."""

    T: float
    profile: Callable[[float], float] | None = None

    def s_values(self, times):
        times = np.asarray(times, dtype=np.float64)
        if self.profile is None:
            return times / self.T if self.T > 0 else np.zeros_like(times)
        vals = np.array([self.profile(float(t)) for t in times])
        if abs(vals[0]) > 1e-12 or abs(vals[-1] - 1.0) > 1e-12:
            raise ValueError("schedule profile must run from s=0 to s=1")
        if np.any(np.diff(vals) < -1e-12):
            raise ValueError("schedule profile must be nondecreasing")
        return vals


@dataclass
class EvolutionResult:
    final_state: StateVector
    overlap: float
    norm_drift: float
    T: float
    steps: int
    dt: float
    ground_energy: float
    satisfiable: bool

    @property
    def minimum_energy_fallback(self):
        """True when the overlap targets a nonzero-energy ground space."""
        return not self.satisfiable


def _ground_overlap(target, amps):
    """Squared-projection overlap onto the problem part's ground space."""
    if isinstance(target, OperatorPair):
        values = target.hp.values
        emin = values.min()
        mask = values == emin
        overlap = float(np.sqrt((np.abs(amps[mask]) ** 2).sum()))
        return overlap, float(emin)
    w, v = np.linalg.eigh(np.asarray(target.dense(1.0)))
    emin = w[0]
    ground = v[:, w <= emin + 1e-9]
    overlap = float(np.linalg.norm(ground.T.conj() @ amps))
    return overlap, float(emin)


def _uniform_start(target):
    if isinstance(target, OperatorPair):
        return initial_state(target.n).amplitudes.copy()
    dim = target.dim
    return np.full(dim, dim ** -0.5, dtype=np.complex128)


def evolve(target, schedule, dt=None, drift_bound=DEFAULT_DRIFT_BOUND):
    """Integrate from the uniform start state to time T.

    `schedule` may be a Schedule or a plain total time.  The default step
    keeps dt * (total transverse weight + clause count) at 0.01; steps with
    dt * bound > 0.1 are refused outright.
    """
    if not isinstance(schedule, Schedule):
        schedule = Schedule(float(schedule))
    T = schedule.T
    if T < 0:
        raise ValueError("evolution time must be nonnegative")
    bound = target.norm_bound() if hasattr(target, "norm_bound") else None
    if dt is None:
        if bound is None or bound == 0:
            dt = 0.01
        else:
            dt = 0.01 / bound
    if bound and dt * bound > 0.1:
        raise NormDriftError(
            f"dt={dt} too large: dt * norm bound = {dt * bound:.3g} > 0.1"
        )
    psi = _uniform_start(target)
    if T == 0:
        steps, h = 0, dt
    else:
        steps = max(1, ceil(T / dt))
        h = T / steps
        svals = schedule.s_values(np.arange(2 * steps + 1) * (h / 2.0))
        if isinstance(target, OperatorPair):
            backend.rk4_propagate(
                target._diag, target._weights, svals, h, psi, target.n
            )
        else:
            _rk4_generic(target, svals, h, psi)
    norm_drift = abs(np.linalg.norm(psi) - 1.0)
    if norm_drift > drift_bound:
        raise NormDriftError(
            f"norm drift {norm_drift:.3e} exceeds {drift_bound:.1e}; "
            "use a smaller dt"
        )
    overlap, emin = _ground_overlap(target, psi)
    return EvolutionResult(
        final_state=StateVector(psi, norm_tol=max(10.0 * drift_bound, 1e-12)),
        overlap=overlap,
        norm_drift=float(norm_drift),
        T=float(T),
        steps=steps,
        dt=h,
        ground_energy=emin,
        satisfiable=emin == 0.0,
    )


def _rk4_generic(target, svals, h, psi):
    """Reference integrator for operators without the structural kernels."""
    steps = (len(svals) - 1) // 2
    for step in range(steps):
        s0, sh, s1 = svals[2 * step], svals[2 * step + 1], svals[2 * step + 2]
        k1 = -1j * target.matvec(s0, psi)
        k2 = -1j * target.matvec(sh, psi + 0.5 * h * k1)
        k3 = -1j * target.matvec(sh, psi + 0.5 * h * k2)
        k4 = -1j * target.matvec(s1, psi + h * k3)
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def measure(psi, n, shots, seed=0):
    """Sample computational-basis bitstrings from the amplitude law.

    Deterministic for a fixed seed.  Returns a Counter keyed by the n-bit
    string with bit 1 leftmost.
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    amps = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi)
    if amps.shape[0] != 1 << n:
        raise StateError(f"state dimension {amps.shape[0]} is not 2^{n}")
    probs = np.abs(amps) ** 2
    total = probs.sum()
    if abs(total - 1.0) > 1e-6:
        raise StateError(f"state norm^2 {total} deviates from 1 by >1e-6")
    probs = probs / total
    rng = np.random.default_rng(seed)
    samples = rng.choice(probs.shape[0], size=shots, p=probs)
    counts = np.bincount(samples, minlength=probs.shape[0])
    return Counter(
        {
            index_to_bitstring(z, n): int(c)
            for z, c in enumerate(counts)
            if c > 0
        }
    )


def success_curve(target, T_values, dt_rule=None, drift_bound=DEFAULT_DRIFT_BOUND,
                  workers=1):
    """One evolve per total time; exposes the adiabatic threshold."""
    T_values = list(T_values)
    if not T_values or any(t < 0 for t in T_values):
        raise ValueError("need nonnegative evolution times")

    def one(T):
        dt = dt_rule(T) if dt_rule is not None else None
        return evolve(target, Schedule(float(T)), dt=dt, drift_bound=drift_bound)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, T_values))
    return [one(T) for T in T_values]


def success_curve_csv(results):
    lines = ["T,overlap,norm_drift"]
    for r in results:
        lines.append(
            f"{r.T:.15g},{r.overlap:.15g},{r.norm_drift:.15g}"
        )
    return "\n".join(lines) + "\n"
