"""PCA on the correlation spectrum and component selection rules.

Two threshold rules pick informative components off the descending
eigenvalue list: Kaiser keeps eigenvalues >= 1, the Wishart rule keeps
eigenvalues strictly above the upper edge (1 + sqrt(N/T))^2 of the
Marchenko-Pastur support, outside which random correlations cannot reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptySelection, NotStandardized
from .matrix import DataMatrix, EigenSpectrum


@dataclass(frozen=True)
class WishartBound:
    """Support end-points of the eigenvalue density for ratio r = N/T."""

    ratio_r: float
    lambda_plus: float
    lambda_minus: float


@dataclass(frozen=True)
class PcaReduction:
    spectrum: EigenSpectrum
    selected_indices: tuple[int, ...]
    criterion: str
    scores: np.ndarray          # C x T, row k = projection on component k
    explained_fraction: float


def wishart_bound(n_vars: int, n_samples: int) -> WishartBound:
    if n_vars < 1 or n_samples < 1:
        raise ValueError("n_vars and n_samples must be positive")
    r = n_vars / n_samples
    sqrt_r = math.sqrt(r)
    return WishartBound(
        ratio_r=r,
        lambda_plus=(1.0 + sqrt_r) ** 2,
        lambda_minus=(1.0 - sqrt_r) ** 2,
    )


def mp_density(lam, bound: WishartBound):
    """Eigenvalue density 1/(2 pi r lam) * sqrt((l+ - lam)(lam - l-)).

    Zero at and outside the support end-points.  Accepts scalars or arrays.
    """
    lam = np.asarray(lam, dtype=float)
    inside = (lam > bound.lambda_minus) & (lam < bound.lambda_plus)
    out = np.zeros_like(lam)
    if np.any(inside):
        li = lam[inside]
        out[inside] = np.sqrt(
            (bound.lambda_plus - li) * (li - bound.lambda_minus)
        ) / (2.0 * math.pi * bound.ratio_r * li)
    return float(out) if out.ndim == 0 else out


def select_kaiser(spectrum: EigenSpectrum, inclusive: bool = True) -> list[int]:
    """Indices of eigenvalues >= 1 (or > 1 if not inclusive); a prefix of the order."""
    vals = spectrum.eigenvalues
    count = int(np.sum(vals >= 1.0 if inclusive else vals > 1.0))
    return list(range(count))


def select_wishart(
    spectrum: EigenSpectrum, bound: WishartBound, strict: bool = True
) -> list[int]:
    """Indices of eigenvalues above the Wishart limit; may be empty."""
    vals = spectrum.eigenvalues
    limit = bound.lambda_plus
    count = int(np.sum(vals > limit if strict else vals >= limit))
    return list(range(count))


def project(
    m: DataMatrix,
    spectrum: EigenSpectrum,
    indices,
    normalized: bool = False,
    criterion: str = "custom",
) -> PcaReduction:
    """Project the standardized matrix onto the selected principal directions.

    Score row k is u_k^T Y by default.  With normalized=True each row is
    divided by sqrt(lambda_k), giving unit-variance scores.
    """
    indices = tuple(int(i) for i in indices)
    if len(indices) == 0:
        raise EmptySelection("no components selected for projection")
    n = spectrum.eigenvalues.shape[0]
    if any(i < 0 or i >= n for i in indices):
        raise IndexError(f"component indices out of range [0, {n})")
    x = m.values
    means = x.mean(axis=1)
    if np.max(np.abs(means)) > 1e-6:
        raise NotStandardized("projection expects a standardized matrix")
    u = spectrum.eigenvectors[:, list(indices)]
    scores = u.T @ x
    if normalized:
        lam = spectrum.eigenvalues[list(indices)]
        if np.any(lam <= 1e-12):
            raise ValueError("cannot normalize scores on a zero-variance component")
        scores = scores / np.sqrt(lam)[:, None]
    selected_sum = float(spectrum.eigenvalues[list(indices)].sum())
    total = spectrum.total_variance
    explained = min(max(selected_sum / total, 0.0), 1.0) if total > 0 else 0.0
    return PcaReduction(
        spectrum=spectrum,
        selected_indices=indices,
        criterion=criterion,
        scores=scores,
        explained_fraction=explained,
    )
