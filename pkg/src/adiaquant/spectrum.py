"""Instantaneous spectra, minimum-gap location, and symmetry sectors.

Dense symmetric diagonalization below a dimension cutoff, matrix-free
Lanczos (ARPACK with a fixed start vector, so runs are deterministic)
above it.  Sector restriction happens before the eigensolve: the global
bit-negation sector works on complement-pair representatives, the
bit-permutation sector on the (n+1)-dimensional total-spin basis.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from . import backend
from .errors import ConvergenceError, DimensionError, GapZeroError, SectorError
from .hamiltonian import OperatorPair

DEFAULT_DENSE_CUTOFF = 1024
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# sectors
# ---------------------------------------------------------------------------

class _FullView:
    def __init__(self, target):
        self.target = target
        self.dim = target.dim

    def matvec(self, s, x):
        return self.target.matvec(s, x)

    def dense(self, s):
        return self.target.dense(s)

    def prolong(self, v):
        return v


class _NegationView:
    """+1 eigensector of the all-bit negation operator.

    Basis vectors are (|z> + |~z>)/sqrt(2) labeled by the representative
    with leading bit 0, i.e. indices below 2^(n-1).
    """

    def __init__(self, pair):
        n = pair.n
        values = pair.hp.values
        half = 1 << (n - 1)
        full = (1 << n) - 1
        idx = np.arange(half)
        if not np.array_equal(values[idx], values[idx ^ full]):
            raise SectorError("problem diagonal is not negation-symmetric")
        self.pair = pair
        self.n = n
        self.dim = half
        self._diag = np.ascontiguousarray(values[:half], dtype=np.float64)
        self._weights = np.ascontiguousarray(pair.hb.weights, dtype=np.float64)

    def matvec(self, s, x):
        x = np.ascontiguousarray(x)
        out = np.empty_like(x)
        backend.negation_matvec(self._diag, self._weights, float(s), x, out, self.n)
        return out

    def dense(self, s):
        n, half = self.n, self.dim
        full = (1 << n) - 1
        h = np.diag(s * self._diag + (1.0 - s) * 0.5 * self._weights.sum())
        r = np.arange(half)
        for i in range(n):
            q = r ^ (1 << (n - 1 - i))
            q = np.where(q >= half, q ^ full, q)
            np.add.at(h, (r, q), -(1.0 - s) * 0.5 * self._weights[i])
        return h

    def prolong(self, v):
        n = self.n
        full = (1 << n) - 1
        out = np.zeros(1 << n, dtype=v.dtype)
        r = np.arange(self.dim)
        out[r] = v / np.sqrt(2.0)
        out[r ^ full] = v / np.sqrt(2.0)
        return out


class _SymmetricView:
    """Sector invariant under every bit permutation.

    Valid only when all transverse weights agree and the problem diagonal
    is constant on Hamming-weight classes; the reduced basis is labeled by
    the total-spin projection m = -n/2 .. n/2 (weight n-a at index a).
    """

    def __init__(self, pair):
        from .reduction import sx_matrix_elements

        n = pair.n
        weights = pair.hb.weights
        if not np.allclose(weights, weights[0]):
            raise SectorError("permutation sector needs equal per-bit weights")
        values = pair.hp.values
        pops = np.zeros(1 << n, dtype=np.int64)
        for i in range(n):
            pops += (np.arange(1 << n) >> i) & 1
        class_values = np.empty(n + 1)
        for k in range(n + 1):
            vals = values[pops == k]
            if not np.all(vals == vals[0]):
                raise SectorError("problem diagonal is not permutation-symmetric")
            class_values[k] = vals[0]
        self.pair = pair
        self.n = n
        self.dim = n + 1
        d = float(weights[0])
        self._b = d * (n / 2.0 * np.eye(n + 1) - sx_matrix_elements(n))
        # index a corresponds to m = -n/2 + a, i.e. Hamming weight n - a
        self._p = np.diag(class_values[::-1])
        self._pops = pops

    def matvec(self, s, x):
        return self.dense(s) @ x

    def dense(self, s):
        return (1.0 - s) * self._b + s * self._p

    def prolong(self, v):
        n = self.n
        weight = n - np.arange(self.dim)  # per reduced index a
        norm = np.array([comb(n, int(k)) ** -0.5 for k in weight])
        return (v * norm)[n - self._pops]


class FullSector:
    description = "full"

    def restrict(self, target):
        return _FullView(target)


class GlobalNegationSector:
    description = "global-negation(+1)"

    def restrict(self, pair):
        if not isinstance(pair, OperatorPair):
            raise SectorError("sector restriction needs a structural operator pair")
        return _NegationView(pair)


class BitPermutationSector:
    description = "bit-permutation-invariant"

    def restrict(self, pair):
        if not isinstance(pair, OperatorPair):
            raise SectorError("sector restriction needs a structural operator pair")
        return _SymmetricView(pair)


FULL = FullSector()
NEGATION = GlobalNegationSector()
SYMMETRIC = BitPermutationSector()


# ---------------------------------------------------------------------------
# eigensolves
# ---------------------------------------------------------------------------

def _eigenvalues(view, s, k, dense_cutoff):
    if view.dim <= dense_cutoff or k >= view.dim - 1:
        h = view.dense(s)
        return scipy.linalg.eigh(h, eigvals_only=True, subset_by_index=(0, k - 1))
    return _iterative(view, s, k, vectors=False)


def _eigenpairs(view, s, k, dense_cutoff):
    if view.dim <= dense_cutoff or k >= view.dim - 1:
        h = view.dense(s)
        w, v = scipy.linalg.eigh(h, subset_by_index=(0, k - 1))
        return w, v
    return _iterative(view, s, k, vectors=True)


def _iterative(view, s, k, vectors):
    op = scipy.sparse.linalg.LinearOperator(
        (view.dim, view.dim),
        matvec=lambda x: view.matvec(s, np.asarray(x, dtype=np.float64)),
        dtype=np.float64,
    )
    v0 = np.full(view.dim, view.dim ** -0.5)
    try:
        if vectors:
            w, v = scipy.sparse.linalg.eigsh(op, k=k, which="SA", v0=v0, tol=0)
        else:
            w = scipy.sparse.linalg.eigsh(
                op, k=k, which="SA", v0=v0, tol=0, return_eigenvectors=False
            )
            v = None
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        raise ConvergenceError(f"Lanczos failed to converge at s={s}: {exc}")
    order = np.argsort(w)
    w = w[order]
    if v is not None:
        v = v[:, order]
    return (w, v) if vectors else w


def lowest_eigenpairs(target, s, k, sector=FULL, dense_cutoff=DEFAULT_DENSE_CUTOFF):
    """k lowest eigenvalues with eigenvectors embedded in the full space.

    Residuals are verified against 1e-9 * max(1, |E|); failures raise
    ConvergenceError carrying the residuals.
    """
    view = sector.restrict(target)
    if k > view.dim:
        raise DimensionError(f"k={k} exceeds sector dimension {view.dim}")
    w, v = _eigenpairs(view, s, k, dense_cutoff)
    residuals = []
    for j in range(k):
        r = np.linalg.norm(view.matvec(s, v[:, j]) - w[j] * v[:, j])
        residuals.append(r)
        if r > 1e-9 * max(1.0, abs(w[j])):
            raise ConvergenceError(
                f"residual {r:.2e} too large for eigenvalue {w[j]}", residuals
            )
    gram = v.T @ v - np.eye(k)
    if np.abs(gram).max() > 1e-9:
        raise ConvergenceError("eigenvectors lost orthonormality", residuals)
    full_v = np.column_stack([view.prolong(v[:, j]) for j in range(k)])
    return w, full_v


# ---------------------------------------------------------------------------
# scans and gap search
# ---------------------------------------------------------------------------

@dataclass
class SpectrumScan:
    s_grid: np.ndarray
    levels: np.ndarray  # shape (grid, k)
    k: int

    def to_csv(self):
        buf = io.StringIO()
        buf.write("s," + ",".join(f"E{j}" for j in range(self.k)) + "\n")
        for s, row in zip(self.s_grid, self.levels):
            buf.write(
                ",".join(format(x, ".15g") for x in [s, *row]) + "\n"
            )
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln]
        header = lines[0].split(",")
        k = len(header) - 1
        data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
        return cls(data[:, 0], data[:, 1:], k)


def scan_spectrum(target, k=8, grid_points=1000, sector=FULL,
                  dense_cutoff=DEFAULT_DENSE_CUTOFF, workers=1):
    """k lowest levels on a uniform s grid including both endpoints."""
    if grid_points < 2:
        raise ValueError("grid needs at least the two endpoints")
    view = sector.restrict(target)
    if k > view.dim:
        raise DimensionError(f"k={k} exceeds sector dimension {view.dim}")
    s_grid = np.linspace(0.0, 1.0, grid_points)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(
                lambda s: _eigenvalues(view, s, k, dense_cutoff), s_grid
            ))
    else:
        rows = [_eigenvalues(view, s, k, dense_cutoff) for s in s_grid]
    return SpectrumScan(s_grid, np.array(rows), k)


@dataclass
class GapReport:
    g_min: float
    s_star: float
    refinement_tolerance: float
    sector: str
    method: str = "full"
    endpoint_gap: float | None = None
    degenerate_endpoint: bool = False
    warning: str | None = None

    def to_dict(self):
        return {
            "g_min": self.g_min,
            "s_star": self.s_star,
            "refinement_tolerance": self.refinement_tolerance,
            "sector": self.sector,
            "method": self.method,
            "endpoint_gap": self.endpoint_gap,
            "degenerate_endpoint": self.degenerate_endpoint,
            "warning": self.warning,
        }


def golden_section_min(f, a, b, tol):
    """Golden-section minimum of a unimodal f on [a, b]; returns (x, f(x))."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    candidates = [(f(a), a), (f1, x1), (f2, x2), (f(b), b)]
    fx, x = min(candidates)
    return x, fx


def find_min_gap(target, sector=FULL, coarse_points=64, refine_tol=1e-8,
                 dense_cutoff=DEFAULT_DENSE_CUTOFF, method="full"):
    """Locate min E_1(s) - E_0(s): coarse grid then golden-section refine.

    A ground-state degeneracy at s=1 (multiple satisfying assignments in
    the unrestricted space) is flagged; the refined minimum then reports
    the interior dip and the endpoint value separately.
    """
    if coarse_points < 16:
        raise ValueError("coarse grid needs at least 16 points")
    view = sector.restrict(target)
    if view.dim < 2:
        raise DimensionError("gap needs a sector of dimension >= 2")

    def gap(s):
        w = _eigenvalues(view, s, 2, dense_cutoff)
        return float(w[1] - w[0])

    s_grid = np.linspace(0.0, 1.0, coarse_points)
    gaps = np.array([gap(s) for s in s_grid])
    endpoint_gap = float(gaps[-1])
    degenerate = endpoint_gap < 1e-12
    search = gaps[:-1] if degenerate else gaps
    j = int(np.argmin(search))
    lo = s_grid[max(j - 1, 0)]
    last = coarse_points - 2 if degenerate else coarse_points - 1
    hi = s_grid[min(j + 1, last)]
    s_star, g_min = golden_section_min(gap, lo, hi, refine_tol)
    warning = None
    if degenerate:
        warning = (
            "ground state degenerate at s=1; reporting interior minimum, "
            "endpoint gap carried separately"
        )
    return GapReport(
        g_min=float(g_min),
        s_star=float(s_star),
        refinement_tolerance=refine_tol,
        sector=sector.description,
        method=method,
        endpoint_gap=endpoint_gap,
        degenerate_endpoint=degenerate,
        warning=warning,
    )


@dataclass
class AdiabaticEstimate:
    ratio: float          # coupling / g_min^2, the evolution-time scale
    coupling: float       # max |<1| dH/ds |0>| over the grid
    coupling_bound: float  # crude spectral bound on the coupling
    g_min: float


def adiabatic_time_estimate(target, report, sector=FULL, grid_points=64,
                            dense_cutoff=DEFAULT_DENSE_CUTOFF):
    """Evolution-time scale: grid maximum of the level coupling over g_min^2.

    The derivative of the interpolation is problem-part minus initial-part,
    applied as matvec(1, .) - matvec(0, .).
    """
    if report.g_min <= 0.0:
        raise GapZeroError("time estimate undefined for a closed gap")
    coupling = 0.0
    for s in np.linspace(0.0, 1.0, grid_points):
        w, v = lowest_eigenpairs(target, s, 2, sector, dense_cutoff)
        dh_v0 = target.matvec(1.0, v[:, 0]) - target.matvec(0.0, v[:, 0])
        coupling = max(coupling, abs(np.vdot(v[:, 1], dh_v0)))
    if isinstance(target, OperatorPair):
        bound = float(target.hp.values.max())
    else:
        diff = target.dense(1.0) - target.dense(0.0)
        bound = float(scipy.linalg.eigh(diff, eigvals_only=True)[-1])
    return AdiabaticEstimate(
        ratio=float(coupling / report.g_min ** 2),
        coupling=float(coupling),
        coupling_bound=bound,
        g_min=report.g_min,
    )
