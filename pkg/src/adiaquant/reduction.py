"""Symmetry-reduced interpolating matrices for the structured families.

Three families collapse onto the total-spin basis: the oracle problem
((n+1)-dimensional), the hub-of-implications problem (2(n+1)-dimensional,
hub bit times spin projection), and the all-pairs agree problem
((n+1)-dimensional with a further negation-sector filter).  Gaps at n in
the hundreds come from dense eigensolves of these small matrices; the
oracle family additionally has a secular-equation route for the critical
point and the two near-zero roots.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import AdiaquantError
from .hamiltonian import CLAUSE_WEIGHTED, UNIFORM
from .ring import ring_gap
from .spectrum import find_min_gap


def sx_matrix_elements(n):
    """Total-spin S_x in the m basis: symmetric tridiagonal, zero diagonal.

    Index a holds m = -n/2 + a; the (m, m+1) entry is
    sqrt(n/2 (n/2 + 1) - m (m + 1)) / 2.
    """
    if n < 1:
        raise AdiaquantError("spin matrix needs n >= 1")
    s = np.zeros((n + 1, n + 1))
    for a in range(n):
        m = -n / 2.0 + a
        s[a, a + 1] = s[a + 1, a] = 0.5 * np.sqrt(
            n / 2.0 * (n / 2.0 + 1.0) - m * (m + 1.0)
        )
    return s


@dataclass(frozen=True)
class ReducedOperator:
    """Dense (initial-part, problem-part) pair; evaluates (1-s) B + s P."""

    b_part: np.ndarray
    p_part: np.ndarray

    @property
    def dim(self):
        return self.b_part.shape[0]

    def dense(self, s):
        return (1.0 - s) * self.b_part + s * self.p_part

    def matvec(self, s, x):
        return self.dense(s) @ x

    def lipschitz_bound(self):
        diff = self.p_part - self.b_part
        return float(np.abs(diff).sum(axis=1).max())


def grover_reduced(n):
    """(n+1)-dim reduction of the single-oracle problem (unit weights)."""
    if n < 1:
        raise AdiaquantError("oracle reduction needs n >= 1")
    b = n / 2.0 * np.eye(n + 1) - sx_matrix_elements(n)
    p = np.eye(n + 1)
    p[n, n] -= 1.0  # m = n/2 is the all-zeros string
    return ReducedOperator(b, p)


def bush_reduced(n, mode=CLAUSE_WEIGHTED):
    """2(n+1)-dim reduction of the hub problem; hub bit is the major index.

    Block (hub=0) carries problem energy 1 (the pinned-hub clause); block
    (hub=1) carries n/2 + m, the count of unset spoke bits.  The hub weight
    is n+1 in clause-weighted mode and 1 in uniform mode.
    """
    if n < 1:
        raise AdiaquantError("hub reduction needs n >= 1")
    if mode == CLAUSE_WEIGHTED:
        hub = n + 1.0
    elif mode == UNIFORM:
        hub = 1.0
    else:
        raise ValueError(f"unknown mode {mode!r}")
    eye = np.eye(n + 1)
    w = n / 2.0 * eye - sx_matrix_elements(n)
    dim = 2 * (n + 1)
    b = np.zeros((dim, dim))
    p = np.zeros((dim, dim))
    b[: n + 1, : n + 1] = hub / 2.0 * eye + w
    b[n + 1 :, n + 1 :] = hub / 2.0 * eye + w
    b[: n + 1, n + 1 :] = -hub / 2.0 * eye
    b[n + 1 :, : n + 1] = -hub / 2.0 * eye
    p[: n + 1, : n + 1] = eye
    m = np.arange(n + 1) - n / 2.0
    p[n + 1 :, n + 1 :] = np.diag(n / 2.0 + m)
    return ReducedOperator(b, p)


def negation_symmetric_basis(n):
    """Columns spanning the m -> -m invariant combinations in the m basis."""
    cols = []
    for a in range((n + 1) // 2):
        v = np.zeros(n + 1)
        v[a] = v[n - a] = 2.0 ** -0.5
        cols.append(v)
    if n % 2 == 0:
        v = np.zeros(n + 1)
        v[n // 2] = 1.0
        cols.append(v)
    return np.array(cols).T


def overconstrained_reduced(n, invariant=True):
    """(n+1)-dim all-pairs-agree reduction; optionally negation-filtered.

    The problem part is diagonal with entries n^2/4 - m^2 and the initial
    part is (n-1) times the unit-weight transverse reduction.  With
    `invariant` the basis is symmetrized under m -> -m, the sector holding
    the uniform start state (even count of raised bits in the x basis).
    """
    if n < 2:
        raise AdiaquantError("all-pairs reduction needs n >= 2")
    b = (n - 1.0) * (n / 2.0 * np.eye(n + 1) - sx_matrix_elements(n))
    m = np.arange(n + 1) - n / 2.0
    p = np.diag(n ** 2 / 4.0 - m ** 2)
    if not invariant:
        return ReducedOperator(b, p)
    basis = negation_symmetric_basis(n)
    return ReducedOperator(basis.T @ b @ basis, basis.T @ p @ basis)


# ---------------------------------------------------------------------------
# oracle secular equation
# ---------------------------------------------------------------------------

def grover_weights(n):
    """Overlap weights binom(n, r) / 2^n between the two spin bases."""
    p = np.zeros(n + 1)
    p[0] = 0.5 ** n
    for r in range(n):
        p[r + 1] = p[r] * (n - r) / (r + 1.0)
    return p


@dataclass(frozen=True)
class SecularSolution:
    n: int
    s_star: float
    lambda_minus: float
    lambda_plus: float
    g_min_roots: float      # (1 - s*) (lambda_+ - lambda_-), exact roots
    g_min_estimate: float   # closed-form small-root estimate
    weight_sum_r: float     # sum_r P_r / r
    weight_sum_r2: float    # sum_r P_r / r^2


def _secular_bisect(f, lo, hi):
    flo = f(lo)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def grover_secular(n):
    """Critical point and near-zero root pair of the rank-one update.

    The critical s makes the resolvent sum match the field-to-problem
    ratio with the r=0 pole removed; the gap then follows from the two
    roots bracketing zero, one in (-1, 0) and one in (0, 1), found by
    bisection (the resolvent sum is monotone between poles).
    """
    if n < 2:
        raise AdiaquantError("secular solution needs n >= 2")
    weights = grover_weights(n)
    rs = np.arange(n + 1, dtype=np.float64)
    sum_r = float((weights[1:] / rs[1:]).sum())
    sum_r2 = float((weights[1:] / rs[1:] ** 2).sum())
    s_star = 1.0 / (1.0 + sum_r)
    target = sum_r  # (1 - s*) / s*

    def f(lam):
        return float((weights / (rs - lam)).sum()) - target

    lam_minus = _secular_bisect(f, -1.0, -1e-300)
    lam_plus = _secular_bisect(f, 1e-300, 1.0 - 1e-12)
    g_roots = (1.0 - s_star) * (lam_plus - lam_minus)
    g_est = 2.0 * (1.0 - s_star) * sum_r2 ** -0.5 * 2.0 ** (-n / 2.0)
    return SecularSolution(
        n=n,
        s_star=s_star,
        lambda_minus=lam_minus,
        lambda_plus=lam_plus,
        g_min_roots=float(g_roots),
        g_min_estimate=float(g_est),
        weight_sum_r=sum_r,
        weight_sum_r2=sum_r2,
    )


# ---------------------------------------------------------------------------
# scaling studies
# ---------------------------------------------------------------------------

FAMILIES = ("ring", "grover", "bush", "bush-uniform", "overconstrained")


def _family_gap(family, n, coarse_points, refine_tol):
    if family == "ring":
        g, _ = ring_gap(n, resolution=refine_tol)
        return g
    if family == "grover":
        op = grover_reduced(n)
    elif family == "bush":
        op = bush_reduced(n, CLAUSE_WEIGHTED)
    elif family == "bush-uniform":
        op = bush_reduced(n, UNIFORM)
    elif family == "overconstrained":
        op = overconstrained_reduced(n, invariant=True)
    else:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    report = find_min_gap(
        op, coarse_points=coarse_points, refine_tol=refine_tol, method="reduced"
    )
    return report.g_min


@dataclass
class ScalingStudy:
    family: str
    n_values: np.ndarray
    gaps: np.ndarray
    slope: float            # power-law fit on (log n, log g)
    intercept: float
    residual: float
    exp_slope: float        # exponential fit on (n, log g)
    exp_intercept: float
    exp_residual: float

    def to_csv(self):
        buf = io.StringIO()
        buf.write("n,g_min,log_n,log_g\n")
        for n, g in zip(self.n_values, self.gaps):
            buf.write(
                f"{n},{g:.15g},{np.log(n):.15g},{np.log(g):.15g}\n"
            )
        return buf.getvalue()

    def fit_json(self):
        return json.dumps(
            {
                "family": self.family,
                "slope": self.slope,
                "intercept": self.intercept,
                "residual": self.residual,
                "exponential_fit": {
                    "slope": self.exp_slope,
                    "intercept": self.exp_intercept,
                    "residual": self.exp_residual,
                },
            },
            sort_keys=True,
        )


def gap_scaling_study(family, n_values, coarse_points=128, refine_tol=1e-13,
                      workers=1):
    """Minimum gap per size plus power-law and exponential least squares.

    The exponential fit (log g linear in n) rides along for every family;
    comparing its residual against the power law is the check that the
    uniform-field hub variant closes exponentially.
    """
    n_values = np.asarray(list(n_values), dtype=np.int64)
    if len(n_values) < 3:
        raise AdiaquantError("scaling fit needs at least three sizes")
    if not np.all(np.diff(n_values) > 0):
        raise AdiaquantError("sizes must be ascending")
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            gaps = list(pool.map(
                lambda n: _family_gap(family, int(n), coarse_points, refine_tol),
                n_values,
            ))
    else:
        gaps = [_family_gap(family, int(n), coarse_points, refine_tol)
                for n in n_values]
    gaps = np.asarray(gaps)
    log_n = np.log(n_values.astype(np.float64))
    log_g = np.log(gaps)
    slope, intercept = np.polyfit(log_n, log_g, 1)
    residual = float(((log_g - (slope * log_n + intercept)) ** 2).sum())
    e_slope, e_intercept = np.polyfit(n_values.astype(np.float64), log_g, 1)
    e_residual = float(
        ((log_g - (e_slope * n_values + e_intercept)) ** 2).sum()
    )
    return ScalingStudy(
        family=family,
        n_values=n_values,
        gaps=gaps,
        slope=float(slope),
        intercept=float(intercept),
        residual=residual,
        exp_slope=float(e_slope),
        exp_intercept=float(e_intercept),
        exp_residual=e_residual,
    )
