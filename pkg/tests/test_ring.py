import numpy as np
import pytest

from adiaquant.errors import AdiaquantError
from adiaquant.hamiltonian import build_pair
from adiaquant.instance import ring_instance
from adiaquant.ring import (
    MomentumBlock,
    RingSpectrum,
    block_eigenvalues,
    momentum_block,
    ring_gap,
    ring_levels,
)
from adiaquant.spectrum import NEGATION, find_min_gap, lowest_eigenpairs

from conftest import SIGMA_X, SIGMA_Z, kron_chain

EYE2 = np.eye(2)
# raising/lowering pair in the transverse eigenbasis
LOWER = 0.5 * np.array([[1.0, -1.0], [1.0, -1.0]])
RAISE = 0.5 * np.array([[1.0, 1.0], [-1.0, -1.0]])


def fermion_ops(n):
    """String operators b_j built explicitly as 2^n matrices."""
    ops = []
    for j in range(1, n + 1):
        mats = [SIGMA_X] * (j - 1) + [LOWER] + [EYE2] * (n - j)
        ops.append(kron_chain(mats))
    return ops


class TestBlockEigenvalues:
    def test_start_values(self):
        for n, p in ((4, 1), (8, 3), (10, 9)):
            assert block_eigenvalues(n, p, 0.0) == (0.0, 4.0)

    def test_end_values(self):
        for n, p in ((4, 1), (8, 5)):
            lo, hi = block_eigenvalues(n, p, 1.0)
            assert abs(lo) < 1e-15 and abs(hi - 2.0) < 1e-15

    def test_matches_block_matrix(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = 2 * int(rng.integers(2, 30))
            p = 2 * int(rng.integers(0, n // 2)) + 1
            s = float(rng.uniform())
            w = np.linalg.eigvalsh(momentum_block(n, p, s))
            lo, hi = block_eigenvalues(n, p, s)
            assert abs(w[0] - lo) < 1e-14 * max(1, abs(lo))
            assert abs(w[1] - hi) < 1e-14 * hi

    def test_block_matrix_hermitian(self):
        m = momentum_block(8, 3, 0.4)
        assert np.abs(m - m.conj().T).max() == 0.0
        assert MomentumBlock(8, 3).eigenvalues(0.4) == block_eigenvalues(8, 3, 0.4)

    def test_parity_validation(self):
        with pytest.raises(AdiaquantError):
            block_eigenvalues(7, 1, 0.5)
        with pytest.raises(AdiaquantError):
            block_eigenvalues(8, 2, 0.5)
        with pytest.raises(AdiaquantError):
            block_eigenvalues(8, 9, 0.5)
        with pytest.raises(AdiaquantError):
            block_eigenvalues(8, 1, 1.5)


class TestRingLevels:
    def test_start_and_end(self):
        for n in (4, 8, 12):
            assert ring_levels(n, 0.0) == (0.0, 4.0)
            g0, e1 = ring_levels(n, 1.0)
            assert abs(g0) < 1e-12 and abs(e1 - 2.0) < 1e-12

    def test_matches_sector_diagonalization(self):
        rng = np.random.default_rng(5)
        for n in (6, 8, 10, 12):
            pair = build_pair(ring_instance(n))
            for s in rng.uniform(size=4):
                w, _ = lowest_eigenpairs(pair, s, 2, NEGATION)
                g0, e1 = ring_levels(n, float(s))
                assert abs(w[0] - g0) < 1e-9
                assert abs(w[1] - e1) < 1e-9

    def test_gap_positive_on_grid(self):
        for n in (6, 10, 14):
            spec = RingSpectrum(n)
            for s in np.linspace(0.0, 1.0, 101):
                assert spec.gap(s) > 0.0


class TestRingGap:
    def test_large_n_asymptote(self):
        g, s_star = ring_gap(100)
        target = 4 * np.pi / 300
        assert abs(g - target) / target < 0.02
        assert abs(s_star - 2.0 / 3.0) < 0.02

    def test_matches_full_space_sector_search(self):
        for n in (6, 8):
            pair = build_pair(ring_instance(n))
            report = find_min_gap(pair, sector=NEGATION, refine_tol=1e-10)
            g, s_star = ring_gap(n, resolution=1e-10)
            assert abs(report.g_min - g) < 1e-6
            assert abs(report.s_star - s_star) < 1e-3

    def test_inverse_size_scaling(self):
        g1, _ = ring_gap(200)
        g2, _ = ring_gap(400)
        assert abs(g2 / g1 - 0.5) < 0.05

    def test_small_even_only(self):
        with pytest.raises(AdiaquantError):
            ring_gap(5)
        with pytest.raises(AdiaquantError):
            ring_gap(2)


class TestFermionOperators:
    """The string-operator identities behind the momentum-block reduction,
    checked as explicit matrices at small n."""

    def test_anticommutators(self):
        for n in (2, 4):
            bs = fermion_ops(n)
            eye = np.eye(1 << n)
            for j in range(n):
                for k in range(n):
                    anti = bs[j] @ bs[k] + bs[k] @ bs[j]
                    assert np.abs(anti).max() < 1e-12
                    mixed = bs[j] @ bs[k].T + bs[k].T @ bs[j]
                    expect = eye if j == k else 0.0 * eye
                    assert np.abs(mixed - expect).max() < 1e-12

    def test_number_operator_is_transverse_term(self):
        n = 4
        bs = fermion_ops(n)
        for j in range(1, n + 1):
            lhs = bs[j - 1].T @ bs[j - 1]
            rhs = 0.5 * (np.eye(1 << n) - kron_chain(
                [SIGMA_X if i == j else EYE2 for i in range(1, n + 1)]
            ))
            assert np.abs(lhs - rhs).max() < 1e-12

    def test_bond_identity_interior(self):
        n = 4
        bs = fermion_ops(n)
        for j in range(1, n):
            lhs = (bs[j - 1].T - bs[j - 1]) @ (bs[j].T + bs[j])
            rhs = kron_chain(
                [SIGMA_Z if i in (j, j + 1) else EYE2 for i in range(1, n + 1)]
            )
            assert np.abs(lhs - rhs).max() < 1e-12

    def test_bond_identity_wraparound_carries_negation_string(self):
        n = 4
        bs = fermion_ops(n)
        lhs = (bs[n - 1].T - bs[n - 1]) @ (bs[0].T + bs[0])
        negation = kron_chain([SIGMA_X] * n)
        zz = kron_chain([SIGMA_Z] + [EYE2] * (n - 2) + [SIGMA_Z])
        assert np.abs(lhs + negation @ zz).max() < 1e-12


class TestGaugeSpectrumIdentity:
    def test_even_disagree_rings_share_spectra(self):
        rng = np.random.default_rng(11)
        for _ in range(8):
            n = int(rng.integers(2, 6)) * 2
            k = int(rng.integers(0, n // 2 + 1)) * 2
            pos = [int(p) for p in rng.choice(np.arange(1, n + 1), size=k, replace=False)]
            mixed = build_pair(ring_instance(n, disagree=pos))
            plain = build_pair(ring_instance(n))
            for s in rng.uniform(size=5):
                w1 = np.linalg.eigvalsh(mixed.dense(float(s)))
                w2 = np.linalg.eigvalsh(plain.dense(float(s)))
                assert np.abs(w1 - w2).max() < 1e-10
