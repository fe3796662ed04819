"""Cayley-ball compressions of ``H_mu`` and the spectral measure of ``delta_e``.

Everything here is floating point and heuristic: finite compressions can only
suggest, never certify, the spectral type of the infinite operator.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import PreconditionError, ResourceCapError
from .groups import DEFAULT_BALL_CAP, Element, ball_raw
from .measures import Measure, is_selfadjoint, l1_norm, moments_at_identity

DEFAULT_RADII = (4, 6, 8)
DEFAULT_DENSE_LIMIT = 4000
CLUSTER_TOL = 1e-6
MOMENT_RTOL = 1e-8


@dataclass
class TruncatedOperator:
    """``P_B H_mu P_B`` on a ball ``B``: ``matrix[i, j] = mu(ball[i] ball[j]^-1)``."""

    ball: list
    depth: list
    matrix: sp.csr_matrix
    mu_ref: Measure
    radius: int
    index: dict = field(repr=False, default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.ball)

    def elements(self) -> list:
        return [Element(self.mu_ref.group, x) for x in self.ball]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def build_truncation(mu: Measure, radius: int, cap: int = DEFAULT_BALL_CAP) -> TruncatedOperator:
    """Compress ``H_mu`` to the ball of ``radius`` generated by ``supp(mu)`` and its inverses."""
    if not is_selfadjoint(mu):
        raise PreconditionError("truncation requires a self-adjoint measure")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    group = mu.group
    elems, depth = ball_raw(group, list(mu.coeffs), radius, cap)
    index = {x: i for i, x in enumerate(elems)}
    real = mu.is_real()
    coeffs = [(y, float(c.re) if real else complex(c)) for y, c in mu.items()]
    rows, cols, vals = [], [], []
    for j, z in enumerate(elems):
        for y, c in coeffs:
            i = index.get(group.mul(y, z))
            if i is not None:
                rows.append(i)
                cols.append(j)
                vals.append(c)
    n = len(elems)
    matrix = sp.csr_matrix(
        (np.asarray(vals, dtype=float if real else complex), (rows, cols)), shape=(n, n)
    )
    return TruncatedOperator(elems, depth, matrix, mu, radius, index)


def eigendecompose(T: TruncatedOperator, dense_limit: int = DEFAULT_DENSE_LIMIT):
    """Ascending eigenvalues and ``delta_e`` weights ``|<delta_e, v_j>|^2``."""
    if T.size > dense_limit:
        raise ResourceCapError(
            f"ball of {T.size} elements exceeds the dense eigensolver limit of {dense_limit}"
        )
    evals, evecs = scipy.linalg.eigh(T.dense())
    weights = np.abs(evecs[0, :]) ** 2
    return evals, weights


@dataclass
class MomentRow:
    n: int
    exact: object  # ComplexRational
    matrix: complex
    diff: float

    @property
    def ok(self) -> bool:
        return self.diff <= MOMENT_RTOL * max(1.0, abs(complex(self.exact)))


def matrix_moments(T: TruncatedOperator, nmax: int) -> list:
    """``<delta_e, M^n delta_e>`` for ``n = 0..nmax`` by repeated sparse products."""
    v = np.zeros(T.size, dtype=T.matrix.dtype)
    v[0] = 1.0
    out = [complex(v[0])]
    for _ in range(nmax):
        v = T.matrix @ v
        out.append(complex(v[0]))
    return out


def moment_crosscheck(T: TruncatedOperator, nmax: int) -> list:
    """Matrix moments against exact ``mu^{*n}(e)``; exact agreement is expected for ``n <= radius``."""
    if nmax > T.radius:
        raise PreconditionError(f"nmax={nmax} exceeds the exactness window (radius {T.radius})")
    exact = moments_at_identity(T.mu_ref, nmax)
    mat = matrix_moments(T, nmax)
    return [MomentRow(n, e, m, abs(m - complex(e))) for n, (e, m) in enumerate(zip(exact, mat))]


def kernel_weight(T: TruncatedOperator, tol: float | None = None, dense_limit: int = DEFAULT_DENSE_LIMIT) -> float:
    """Total ``delta_e`` weight on eigenvalues with ``|lambda| < tol`` (default ``1e-9 ||mu||_1``)."""
    if tol is None:
        tol = 1e-9 * float(l1_norm(T.mu_ref))
    if tol <= 0:
        raise ValueError("tol must be positive")
    evals, weights = eigendecompose(T, dense_limit)
    return float(weights[np.abs(evals) < tol].sum())


def cluster_atoms(evals, weights, tol: float = CLUSTER_TOL) -> list:
    """Merge eigenvalues closer than ``tol`` (chained); returns ``[(center, mass), ...]``."""
    atoms = []
    start = 0
    n = len(evals)
    for i in range(1, n + 1):
        if i == n or evals[i] - evals[i - 1] > tol:
            block = slice(start, i)
            atoms.append((float(np.mean(evals[block])), float(weights[block].sum())))
            start = i
    return atoms


@dataclass
class RadiusResult:
    radius: int
    ball_size: int
    eigenvalues: np.ndarray
    weights: np.ndarray
    moments: list
    kernel_weight: float

    @property
    def hull(self) -> tuple:
        return float(self.eigenvalues[0]), float(self.eigenvalues[-1])

    def atoms(self, tol: float = CLUSTER_TOL) -> list:
        return cluster_atoms(self.eigenvalues, self.weights, tol)


@dataclass
class SpectralReport:
    radii: list
    results: list
    norm_bound: float

    def by_radius(self, r) -> RadiusResult:
        for res in self.results:
            if res.radius == r:
                return res
        raise KeyError(r)


def spectral_report(
    mu: Measure,
    radii=DEFAULT_RADII,
    nmax: int | None = None,
    kernel_tol: float | None = None,
    cap: int = DEFAULT_BALL_CAP,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> SpectralReport:
    """Eigen-data, moment cross-checks and kernel weights for each radius (processed in order)."""
    norm = float(l1_norm(mu))
    if kernel_tol is None:
        kernel_tol = 1e-9 * norm
    results = []
    for r in sorted(radii):
        T = build_truncation(mu, r, cap)
        evals, weights = eigendecompose(T, dense_limit)
        moments = moment_crosscheck(T, min(r, nmax) if nmax is not None else r)
        kw = float(weights[np.abs(evals) < kernel_tol].sum())
        results.append(RadiusResult(r, T.size, evals, weights, moments, kw))
    return SpectralReport(sorted(radii), results, norm)


@dataclass
class PointMassTrend:
    radii: list
    max_mass: list
    max_mass_location: list
    trend: str
    label: str
    persistent_atoms: list  # [(eigenvalue, [mass per radius])]


def point_mass_estimate(report: SpectralReport, tol: float = CLUSTER_TOL) -> PointMassTrend:
    """Track the largest ``delta_e`` atom of the compressions across radii.

    A mass that keeps shrinking is *consistent with* no eigenvalue of the infinite
    operator carrying ``delta_e`` weight; it is not a proof.
    """
    if len(report.results) < 3:
        raise PreconditionError("point-mass trends need at least 3 radii")
    per_radius = [res.atoms(tol) for res in report.results]
    max_mass, where = [], []
    for atoms in per_radius:
        mass = max(m for _, m in atoms)
        # ties up to rounding: report the atom closest to the origin
        center = min((c for c, m in atoms if m >= mass - 1e-12), key=lambda c: (abs(round(c, 9)), c))
        max_mass.append(mass)
        where.append(center)

    persistent = []
    for center, mass in per_radius[0]:
        masses = [mass]
        for atoms in per_radius[1:]:
            match = [m for c, m in atoms if abs(c - center) <= tol]
            if not match:
                break
            masses.append(match[0])
        else:
            if max(masses) > tol:
                persistent.append((center, masses))

    if all(b < a for a, b in zip(max_mass, max_mass[1:])):
        trend = "decreasing"
        label = "consistent with absence of point mass (heuristic, not a proof)"
    elif max(max_mass) - min(max_mass) <= tol:
        trend = "persistent"
        label = "consistent with a point mass of the infinite operator (heuristic, not a proof)"
    else:
        trend = "nonmonotone"
        label = "no clear trend"
    return PointMassTrend(list(report.radii), max_mass, where, trend, label, persistent)
