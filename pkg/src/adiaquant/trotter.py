"""Compilation of the continuous evolution into few-bit unitaries.

The total time splits into M slices; each slice is approximated by K
substeps of a first-order splitting between the transverse part and the
per-clause diagonal phases.  Within a substep the diagonal phases act
first, then the bit rotations, matching the operator product whose
rightmost factor applies first.  Slice coefficients use the left endpoint:
u = 1 - l/M on the transverse angles, v = l/M on the phases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DimensionError, ParseError, StateError
from .hamiltonian import CLAUSE_WEIGHTED, StateVector, build_initial_hamiltonian


@dataclass(frozen=True)
class TrotterBudget:
    """Slice and substep counts with the evaluated error surrogates."""

    M: int
    K: int
    delta: float
    epsilon_target: float
    justification: dict


def plan_budget(inst, T, epsilon_target, mode=CLAUSE_WEIGHTED):
    """Smallest power-of-two M and K meeting the error surrogates.

    Spectral containments give the norm bounds: the problem part by the
    clause count, the transverse part by the total weight.  M controls the
    piecewise-constant slicing error T * bound / (2M); K controls the
    splitting error T^2 |B||P| / (4MK).  Each gets half the target.
    """
    if T <= 0:
        raise ValueError("budget needs T > 0")
    if not 0.0 < epsilon_target < 1.0:
        raise ValueError("epsilon target must be in (0, 1)")
    weights = build_initial_hamiltonian(inst, mode).weights
    norm_b = float(weights.sum())
    norm_p = float(inst.m)
    bound_pm = max(norm_b, norm_p)
    half = epsilon_target / 2.0
    M = 1
    while T * bound_pm / (2.0 * M) > half:
        M *= 2
    K = 1
    while T * T * norm_b * norm_p / (4.0 * M * K) > half:
        K *= 2
    delta = T / M
    justification = {
        "norm_bound_initial": norm_b,
        "norm_bound_problem": norm_p,
        "delta_times_diff_norm": delta * bound_pm,
        "slicing_error_bound": T * bound_pm / (2.0 * M),
        "splitting_error_bound": T * T * norm_b * norm_p / (4.0 * M * K),
    }
    return TrotterBudget(M, K, delta, epsilon_target, justification)


@dataclass(frozen=True)
class Gate:
    kind: str  # "xrot" or "cphase"
    target: int  # 1-based bit for xrot, 0-based clause index for cphase
    angle: float


class GateSequence:
    """Ordered gate list stored as flat arrays, with the source instance."""

    def __init__(self, inst, T, M, K, kinds, targets, angles):
        self.instance = inst
        self.n = inst.n
        self.m = inst.m
        self.T = float(T)
        self.M = int(M)
        self.K = int(K)
        self.kinds = np.ascontiguousarray(kinds, dtype=np.int8)
        self.targets = np.ascontiguousarray(targets, dtype=np.int64)
        self.angles = np.ascontiguousarray(angles, dtype=np.float64)

    def __len__(self):
        return self.kinds.shape[0]

    def gate(self, i):
        if self.kinds[i] == 0:
            return Gate("cphase", int(self.targets[i]), float(self.angles[i]))
        return Gate("xrot", int(self.targets[i]) + 1, float(self.angles[i]))

    def __iter__(self):
        return (self.gate(i) for i in range(len(self)))

    def inverted(self):
        """Reversed order with negated angles: the exact inverse circuit."""
        return GateSequence(
            self.instance,
            self.T,
            self.M,
            self.K,
            self.kinds[::-1],
            self.targets[::-1],
            -self.angles[::-1],
        )

    def to_text(self):
        lines = [
            f"trotter {self.n} {self.m} {self.M} {self.K} {self.T:.17g}"
        ]
        for g in self:
            lines.append(f"{g.kind} {g.target} {g.angle:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, inst):
        lines = text.splitlines()
        if not lines:
            raise ParseError("empty gate file")
        head = lines[0].split()
        if len(head) != 6 or head[0] != "trotter":
            raise ParseError("expected header 'trotter <n> <m> <M> <K> <T>'", 1)
        n, m, M, K = (int(x) for x in head[1:5])
        T = float(head[5])
        if n != inst.n or m != inst.m:
            raise ParseError("gate header does not match the instance")
        kinds, targets, angles = [], [], []
        for ln, raw in enumerate(lines[1:], start=2):
            if not raw.strip():
                continue
            tok = raw.split()
            if len(tok) != 3 or tok[0] not in ("xrot", "cphase"):
                raise ParseError(f"bad gate line {raw!r}", ln)
            if tok[0] == "xrot":
                kinds.append(1)
                targets.append(int(tok[1]) - 1)
            else:
                kinds.append(0)
                targets.append(int(tok[1]))
            angles.append(float(tok[2]))
        return cls(inst, T, M, K, kinds, targets, angles)


def compile_sequence(inst, T, budget, mode=CLAUSE_WEIGHTED):
    """Emit the full M*K*(n+m) gate list for the planned budget.

    Per slice l and substep: m clause phases with angle delta*l/(M K),
    clause-ascending, then n bit rotations with angle
    delta*(M-l)*d_i/(M K), bit-ascending.  An oracle instance compiles the
    same way; its single clause is one n-bit diagonal phase.
    """
    n, m = inst.n, inst.m
    M, K = budget.M, budget.K
    delta = T / M
    weights = build_initial_hamiltonian(inst, mode).weights
    per_substep = m + n
    kind_pattern = np.concatenate(
        [np.zeros(m, dtype=np.int8), np.ones(n, dtype=np.int8)]
    )
    target_pattern = np.concatenate(
        [np.arange(m, dtype=np.int64), np.arange(n, dtype=np.int64)]
    )
    kinds = np.tile(kind_pattern, M * K)
    targets = np.tile(target_pattern, M * K)
    ell = np.arange(M, dtype=np.float64)
    slice_angles = np.empty((M, per_substep))
    slice_angles[:, :m] = (delta / (K * M)) * ell[:, None]
    slice_angles[:, m:] = (delta / (K * M)) * (M - ell)[:, None] * weights[None, :]
    angles = np.repeat(slice_angles, K, axis=0).reshape(-1)
    return GateSequence(inst, T, M, K, kinds, targets, angles)


def execute(seq, psi):
    """Apply the sequence to a state; returns the new state.

    The clause phases are realized as precomputed violation masks; the
    rotations act pairwise in the flip structure of each bit.
    """
    amps = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi)
    dim = 1 << seq.n
    if amps.shape[0] != dim:
        raise DimensionError(f"state dim {amps.shape[0]} != 2^{seq.n}")
    out = np.array(amps, dtype=np.complex128, copy=True)
    idx = np.arange(dim)
    flags = np.zeros((max(seq.m, 1), dim), dtype=np.uint8)
    for ci, clause in enumerate(seq.instance.clauses):
        flags[ci] = clause.violations(idx, seq.n).astype(np.uint8)
    backend.execute_gates(out, seq.kinds, seq.targets, seq.angles, flags, seq.n)
    # every gate is unitary to machine precision; rounding over millions of
    # gates still accumulates, so the guard scales with the gate count
    return StateVector(out, norm_tol=max(1e-12, 1e-16 * len(seq)))


def fidelity(a, b):
    """|<a|b>| for two normalized states."""
    va = a.amplitudes if isinstance(a, StateVector) else np.asarray(a)
    vb = b.amplitudes if isinstance(b, StateVector) else np.asarray(b)
    if va.shape != vb.shape:
        raise DimensionError("fidelity needs equal dimensions")
    for v in (va, vb):
        if abs(np.linalg.norm(v) - 1.0) > 1e-6:
            raise StateError("fidelity needs normalized states")
    return min(float(abs(np.vdot(va, vb))), 1.0)
