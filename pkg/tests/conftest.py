"""Shared fixtures and independent oracles.

The oracles here are deliberately built differently from the package code:
clause semantics are re-coded from truth tables, and dense operators are
assembled by Kronecker products of explicit Pauli factors, so agreement is
a real cross-check rather than the same code run twice.
"""

import numpy as np
import pytest

from adiaquant.instance import (
    Agree,
    Disagree,
    GroverOracle,
    Imply,
    OneBit,
    Or,
    SatInstance,
    index_to_assignment,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
EYE2 = np.eye(2)


@pytest.fixture
def three_bit():
    """Three two-bit clauses with the unique satisfying assignment 011."""
    return SatInstance(3, (Imply(1, 2), Disagree(1, 3), Agree(2, 3)))


def kron_chain(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def one_bit_op(n, i, op):
    """op on bit i (1-based), identity elsewhere, bit 1 leftmost."""
    return kron_chain([op if j == i else EYE2 for j in range(1, n + 1)])


def dense_transverse_oracle(n, weights):
    h = np.zeros((1 << n, 1 << n))
    for i in range(1, n + 1):
        h += weights[i - 1] * 0.5 * (np.eye(1 << n) - one_bit_op(n, i, SIGMA_X))
    return h


def oracle_clause_energy(clause, bits):
    """Clause truth re-coded from scratch; 1 when violated."""
    if isinstance(clause, Agree):
        return 0 if bits[clause.i - 1] == bits[clause.j - 1] else 1
    if isinstance(clause, Disagree):
        return 0 if bits[clause.i - 1] != bits[clause.j - 1] else 1
    if isinstance(clause, Imply):
        return 1 if (bits[clause.premise - 1], bits[clause.conclusion - 1]) == (1, 0) else 0
    if isinstance(clause, OneBit):
        return 0 if bits[clause.i - 1] == clause.value else 1
    if isinstance(clause, Or):
        for lit in clause.literals:
            v = bits[abs(lit) - 1]
            if (lit > 0 and v == 1) or (lit < 0 and v == 0):
                return 0
        return 1
    if isinstance(clause, GroverOracle):
        return 0 if "".join(str(b) for b in bits) == clause.target else 1
    raise TypeError(clause)


def oracle_energies(inst):
    """Energy of every assignment, by direct per-assignment evaluation."""
    out = np.zeros(1 << inst.n, dtype=np.int64)
    for z in range(1 << inst.n):
        bits = index_to_assignment(z, inst.n)
        out[z] = sum(oracle_clause_energy(c, bits) for c in inst.clauses)
    return out


def dense_pair_oracle(inst, weights, s):
    """(1-s) transverse + s problem, via kron and truth tables only."""
    hb = dense_transverse_oracle(inst.n, weights)
    hp = np.diag(oracle_energies(inst).astype(float))
    return (1.0 - s) * hb + s * hp


def random_instance(rng, n, m):
    """Random non-oracle instance over n bits with m clauses."""
    clauses = []
    for _ in range(m):
        kind = rng.integers(0, 5)
        if kind == 0:
            i, j = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            clauses.append(Agree(int(i), int(j)))
        elif kind == 1:
            i, j = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            clauses.append(Disagree(int(i), int(j)))
        elif kind == 2:
            i, j = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            clauses.append(Imply(int(i), int(j)))
        elif kind == 3:
            clauses.append(OneBit(int(rng.integers(1, n + 1)), int(rng.integers(0, 2))))
        else:
            bits = rng.choice(np.arange(1, n + 1), size=min(3, n), replace=False)
            signs = rng.choice([-1, 1], size=len(bits))
            lits = [int(b * sg) for b, sg in zip(bits, signs)]
            while len(lits) < 3:
                lits.append(lits[0])
            clauses.append(Or(*lits))
    return SatInstance(n, tuple(clauses))
