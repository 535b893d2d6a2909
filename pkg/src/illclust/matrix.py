"""Data-matrix container and the linear algebra the pipeline stands on.

Rows are variables, columns are samples.  Standardization uses the
population (1/T) standard deviation so that the correlation matrix,
defined as the Gram matrix of standardized rows divided by T, has a unit
diagonal; Kaiser's lambda >= 1 rule and the Wishart support then apply
directly to its spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import (
    ConvergenceFailure,
    NotStandardized,
    NotSymmetric,
    ZeroVarianceRow,
)

EPS_RANK = 1e-12         # relative singular-value cutoff for rank deficiency
EPS_SYM = 1e-10          # symmetry tolerance; also the negative-eigenvalue clamp
JACOBI_TOL = 1e-12       # off-diagonal Frobenius threshold, relative to ||A||_F
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class DataMatrix:
    """N x T matrix of finite reals; rows may carry distinct labels."""

    values: np.ndarray
    row_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        n, t = arr.shape
        if n < 2 or t < 2:
            raise ValueError(f"matrix must be at least 2x2, got {n}x{t}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix contains NaN or Inf entries")
        if self.row_labels is not None:
            labels = tuple(self.row_labels)
            if len(labels) != n:
                raise ValueError(f"expected {n} row labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                raise ValueError("row labels must be distinct")
            object.__setattr__(self, "row_labels", labels)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n_vars(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class EigenSpectrum:
    """Descending eigenvalues with paired orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    total_variance: float = field(init=False)

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float)
        vecs = np.asarray(self.eigenvectors, dtype=float)
        vals.setflags(write=False)
        vecs.setflags(write=False)
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)
        object.__setattr__(self, "total_variance", float(vals.sum()))


@dataclass(frozen=True)
class ConditionReport:
    """Largest/smallest singular value and their ratio (inf if rank-deficient)."""

    lambda_max: float
    lambda_min: float
    condition_number: float


def standardize(m: DataMatrix) -> DataMatrix:
    """Shift and scale every row to mean 0 and population standard deviation 1."""
    x = m.values
    for i in range(m.n_vars):
        if np.ptp(x[i]) == 0.0:
            raise ZeroVarianceRow(i)
    means = x.mean(axis=1, keepdims=True)
    sds = x.std(axis=1, keepdims=True)  # population convention (1/T)
    if np.any(sds == 0.0):
        raise ZeroVarianceRow(int(np.flatnonzero(sds.ravel() == 0.0)[0]))
    return DataMatrix((x - means) / sds, row_labels=m.row_labels)


def correlation_matrix(m: DataMatrix) -> np.ndarray:
    """Gram matrix of the standardized rows divided by T (unit diagonal)."""
    x = m.values
    means = x.mean(axis=1)
    if np.max(np.abs(means)) > 1e-6:
        raise NotStandardized(
            f"row means reach {np.max(np.abs(means)):.3g}; standardize first"
        )
    c = (x @ x.T) / m.n_samples
    c = (c + c.T) / 2.0
    np.fill_diagonal(c, 1.0)
    return c


@njit(cache=True)
def _offdiag_norm(a):
    n = a.shape[0]
    off = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            off += 2.0 * a[i, j] * a[i, j]
    return np.sqrt(off)


@njit(cache=True)
def _jacobi_kernel(a_in, tol, max_sweeps):
    """Cyclic Jacobi rotations; returns (diagonal, rotation product, converged)."""
    a = a_in.copy()
    n = a.shape[0]
    v = np.eye(n)
    norm = np.sqrt(np.sum(a * a))
    converged = False
    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= tol * norm:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[i, q] = s * aip + c * aiq
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - s * aqi
                    a[q, i] = s * api + c * aqi
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq
    if not converged:
        converged = _offdiag_norm(a) <= tol * norm
    return np.diag(a).copy(), v, converged


def symmetric_eigen(a: np.ndarray) -> EigenSpectrum:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Eigenvalues come back sorted descending (ties keep their original column
    order); each eigenvector's largest-magnitude entry is made positive so
    output is deterministic.  Small negative eigenvalues within the solver
    tolerance are clamped to zero.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric("matrix is not square")
    if a.shape[0] == 0:
        raise NotSymmetric("matrix is empty")
    if np.max(np.abs(a - a.T)) > EPS_SYM:
        raise NotSymmetric(
            f"asymmetry {np.max(np.abs(a - a.T)):.3g} exceeds {EPS_SYM:g}"
        )
    vals, vecs, converged = _jacobi_kernel(a, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if not converged:
        raise ConvergenceFailure(
            f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    vals[(vals < 0.0) & (vals >= -EPS_SYM)] = 0.0
    # deterministic sign: largest-magnitude entry of each eigenvector positive
    for k in range(vecs.shape[1]):
        j = int(np.argmax(np.abs(vecs[:, k])))
        if vecs[j, k] < 0.0:
            vecs[:, k] = -vecs[:, k]
    return EigenSpectrum(eigenvalues=vals, eigenvectors=vecs)


def singular_values(values: np.ndarray) -> np.ndarray:
    """Descending singular values via the Gram matrix of the shorter dimension."""
    x = np.asarray(values, dtype=float)
    n, t = x.shape
    gram = x @ x.T if n <= t else x.T @ x
    gram = (gram + gram.T) / 2.0
    spectrum = symmetric_eigen(gram)
    return np.sqrt(np.clip(spectrum.eigenvalues, 0.0, None))


def condition_number(m: DataMatrix | np.ndarray) -> ConditionReport:
    """2-norm condition number of a data matrix: ratio of extreme singular values.

    Rank-deficient inputs (smallest singular value within EPS_RANK of the
    largest, relatively) report an infinite condition number rather than fail.
    """
    values = m.values if isinstance(m, DataMatrix) else np.asarray(m, dtype=float)
    if values.ndim != 2:
        raise ValueError("condition number needs a 2-D matrix")
    if not np.all(np.isfinite(values)):
        raise ValueError("matrix contains NaN or Inf entries")
    sv = singular_values(values)
    s_max = float(sv[0])
    s_min = float(sv[-1])
    if s_max == 0.0:
        return ConditionReport(0.0, 0.0, math.inf)
    if s_min <= EPS_RANK * s_max:
        return ConditionReport(s_max, s_min, math.inf)
    return ConditionReport(s_max, s_min, s_max / s_min)
