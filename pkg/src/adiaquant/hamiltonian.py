"""Operators for the interpolating evolution.

The problem part is diagonal in the computational basis (entry = violated
clause count); the initial part is a transverse field weighted per bit.
Both are stored structurally; a dense matrix is only materialized for small
dimensions.  The interpolation is (1-s) * initial + s * problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import (
    CapacityError,
    ClauseError,
    DecompositionError,
    DimensionError,
    StateError,
    UnsatisfiableError,
)
from .instance import DEFAULT_DIM_CAP, Agree, Disagree, GroverOracle

CLAUSE_WEIGHTED = "clause-weighted"
UNIFORM = "uniform"

_HALF_MINUS_X = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]])  # (1 - sigma_x)/2


def _check_cap(n, cap):
    if n > cap:
        raise CapacityError(f"n={n} exceeds dimension cap {cap} (2^n state)")


@dataclass(frozen=True)
class DiagonalOperator:
    """Problem part: diagonal vector of violated-clause counts."""

    n: int
    values: np.ndarray
    m: int  # clause count, bounds the spectrum

    @property
    def dim(self):
        return 1 << self.n


@dataclass(frozen=True)
class TransverseOperator:
    """Initial part: sum_i d_i (1 - sigma_x^(i)) / 2."""

    n: int
    weights: np.ndarray

    @property
    def total_weight(self):
        return float(self.weights.sum())


@dataclass(frozen=True)
class StateVector:
    """Unit-norm complex amplitude vector.

    The norm tolerance is 1e-12 for constructed states; integrators pass a
    looser bound so that diagnosed-but-acceptable drift is representable.
    """

    amplitudes: np.ndarray
    norm_tol: float = 1e-12

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > self.norm_tol:
            raise StateError(
                f"state norm {norm} deviates from 1 by >{self.norm_tol:.1e}"
            )

    @property
    def dim(self):
        return self.amplitudes.shape[0]


@dataclass(frozen=True)
class OperatorPair:
    """The interpolating family (1-s) H_initial + s H_problem."""

    hb: TransverseOperator
    hp: DiagonalOperator
    n: int

    def __post_init__(self):
        if self.hb.n != self.n or self.hp.n != self.n:
            raise DimensionError("operator parts disagree on bit count")
        object.__setattr__(
            self, "_diag", np.ascontiguousarray(self.hp.values, dtype=np.float64)
        )
        object.__setattr__(
            self, "_weights", np.ascontiguousarray(self.hb.weights, dtype=np.float64)
        )

    @property
    def dim(self):
        return 1 << self.n

    def matvec(self, s, x):
        """Interpolated operator applied to a raw vector, O(n 2^n)."""
        x = np.ascontiguousarray(x)
        if x.shape[0] != self.dim:
            raise DimensionError(f"vector dim {x.shape[0]} != {self.dim}")
        out = np.empty_like(x)
        backend.pair_matvec(self._diag, self._weights, float(s), x, out, self.n)
        return out

    def dense(self, s):
        dim = self.dim
        idx = np.arange(dim)
        h = np.diag(s * self._diag + (1.0 - s) * 0.5 * self._weights.sum())
        for i in range(self.n):
            h[idx, idx ^ (1 << (self.n - 1 - i))] -= (1.0 - s) * 0.5 * self._weights[i]
        return h

    def norm_bound(self):
        """Stability bound: total transverse weight plus clause count."""
        return float(self._weights.sum() + self.hp.m)

    def lipschitz_bound(self):
        """Bound on the operator norm of d/ds = H_problem - H_initial."""
        return float(max(self._weights.sum(), self.hp.m))


def build_problem_hamiltonian(inst, cap=DEFAULT_DIM_CAP):
    """Diagonal operator whose entry at index(z) is the energy of z."""
    _check_cap(inst.n, cap)
    values = inst.energies(np.arange(1 << inst.n))
    return DiagonalOperator(inst.n, values, inst.m)


def build_initial_hamiltonian(inst, mode=CLAUSE_WEIGHTED):
    """Transverse operator with clause-count or unit per-bit weights."""
    if mode == CLAUSE_WEIGHTED:
        weights = inst.degrees().astype(np.float64)
    elif mode == UNIFORM:
        weights = np.ones(inst.n)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return TransverseOperator(inst.n, weights)


def build_pair(inst, mode=CLAUSE_WEIGHTED, cap=DEFAULT_DIM_CAP):
    return OperatorPair(
        build_initial_hamiltonian(inst, mode),
        build_problem_hamiltonian(inst, cap),
        inst.n,
    )


def initial_state(n, cap=DEFAULT_DIM_CAP):
    """Uniform superposition: the transverse ground state, eigenvalue 0."""
    _check_cap(n, cap)
    dim = 1 << n
    return StateVector(np.full(dim, dim ** -0.5, dtype=np.complex128))


def apply_interpolated(pair, s, psi):
    """H(s) |psi>, computed matrix-free; returns a raw amplitude vector."""
    amps = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi)
    return pair.matvec(s, amps)


def _embed(local, bits, n):
    """Embed a 2^k x 2^k operator on the given bits into 2^n dims."""
    dim = 1 << n
    k = len(bits)
    out = np.zeros((dim, dim))
    idx = np.arange(dim)
    masks = [1 << (n - b) for b in bits]
    sub = np.zeros(dim, dtype=np.int64)
    strip = idx.copy()
    for pos, mk in enumerate(masks):
        sub |= ((idx & mk) != 0).astype(np.int64) << (k - 1 - pos)
        strip &= ~mk
    for col in range(1 << k):
        scatter = 0
        for pos, mk in enumerate(masks):
            if (col >> (k - 1 - pos)) & 1:
                scatter |= mk
        out[idx, strip | scatter] += local[sub, col]
    return out


def clause_local_terms(inst, s):
    """Per-clause few-bit terms whose embedded sum is the full operator.

    Each term is ((bits), matrix) with the matrix over the listed bits in
    order.  The transverse part sums (1 - sigma_x)/2 once per distinct bit
    in the clause, so the sum over clauses reproduces the clause-count
    weighting exactly.
    """
    terms = []
    for ci, c in enumerate(inst.clauses):
        if isinstance(c, GroverOracle):
            raise DecompositionError("oracle clause has no few-bit decomposition")
        bits = tuple(sorted(set(c.bits())))
        k = len(bits)
        dim = 1 << k
        local_b = np.zeros((dim, dim))
        for pos in range(k):
            eye = [np.eye(2)] * k
            eye[pos] = _HALF_MINUS_X
            term = eye[0]
            for mat in eye[1:]:
                term = np.kron(term, mat)
            local_b += term
        # clause energies over the local assignments of `bits`
        local_idx = np.arange(dim)
        full_idx = np.zeros(dim, dtype=np.int64)
        for pos, b in enumerate(bits):
            full_idx |= (((local_idx >> (k - 1 - pos)) & 1) << (inst.n - b)).astype(
                np.int64
            )
        local_p = np.diag(c.violations(full_idx, inst.n).astype(float))
        terms.append((bits, (1.0 - s) * local_b + s * local_p))
    return terms


def local_terms_dense_sum(inst, s):
    """Embedded sum of clause_local_terms; test oracle for the global apply."""
    dim = 1 << inst.n
    total = np.zeros((dim, dim))
    for bits, mat in clause_local_terms(inst, s):
        total += _embed(mat, bits, inst.n)
    return total


def gauge_transform_ring(inst):
    """Map an agree/disagree ring to the all-agree ring by masked bit flips.

    Returns (all-agree ring, mask) where the mask is a satisfying assignment
    of the original ring (first bit fixed to 0 for determinism).  Conjugating
    the problem part by X on the masked bits maps one instance to the other;
    the transverse part is invariant.
    """
    n = inst.n
    if n < 3:
        raise ClauseError("a ring needs at least three bits")
    kinds = {}
    for c in inst.clauses:
        if isinstance(c, Agree):
            key, kind = frozenset((c.i, c.j)), 0
        elif isinstance(c, Disagree):
            key, kind = frozenset((c.i, c.j)), 1
        else:
            raise ClauseError("ring must contain only agree/disagree clauses")
        kinds[key] = kind
    edges = {frozenset((j, j % n + 1)) for j in range(1, n + 1)}
    if set(kinds) != edges or inst.m != n:
        raise ClauseError("instance is not a single ring of adjacent-bit clauses")
    mask = [0] * n
    for j in range(1, n):
        mask[j] = mask[j - 1] ^ kinds[frozenset((j, j + 1))]
    if mask[n - 1] ^ kinds[frozenset((n, 1))] != mask[0]:
        raise UnsatisfiableError("odd number of disagree clauses: no gauge target")
    from .instance import ring_instance

    return ring_instance(n), tuple(mask)
