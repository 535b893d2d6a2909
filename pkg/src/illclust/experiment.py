"""Pipeline variants, the cluster-count vs component-count comparison, and
synthetic benchmark generators.

Four variants of the same input are produced and clustered: the
standardized matrix (RAW), its first-mode matrix (EMD), and the EMD matrix
projected onto Kaiser- or Wishart-selected components (PCA-K, PCA-W).
Each variant reports its condition number, its eigenvalue spectrum, and
the Davies-Bouldin-optimal cluster count K*; the headline test compares K*
on the Wishart scores against both component counts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .config import PipelineConfig
from .emd import first_imf_matrix
from .errors import EmptyWishartSelection, InvalidConfig
from .matrix import (
    ConditionReport,
    DataMatrix,
    condition_number,
    correlation_matrix,
    standardize,
    symmetric_eigen,
)
from .pca import (
    WishartBound,
    project,
    select_kaiser,
    select_wishart,
    wishart_bound,
)
from .validity import DbParams, SweepResult, sweep_optimal_k


class Variant(str, enum.Enum):
    RAW = "raw"
    EMD = "emd"
    PCA_K = "pca-k"
    PCA_W = "pca-w"

    @property
    def label(self) -> str:
        return {"raw": "RAW", "emd": "EMD", "pca-k": "PCA-K", "pca-w": "PCA-W"}[self.value]


VARIANT_ORDER = (Variant.RAW, Variant.EMD, Variant.PCA_K, Variant.PCA_W)


@dataclass(frozen=True)
class VariantResult:
    variant: Variant
    condition: ConditionReport
    n_components: int
    sweep: SweepResult | None
    spectrum_summary: np.ndarray      # eigenvalues of the variant's source correlation
    feature_eigenvalues: np.ndarray   # per-sample covariance eigenvalues of the rows clustered
    n_samples: int
    bound: WishartBound
    passthrough_rows: tuple[int, ...] = ()

    @property
    def k_star(self) -> int | None:
        return self.sweep.optimal_k if self.sweep is not None else None


@dataclass(frozen=True)
class TheoremVerdict:
    """How close the optimal cluster count lands to each component count."""

    k_star: int
    c_kaiser: int
    c_wishart: int
    gap_kaiser: int
    gap_wishart: int
    similarity_tolerance: int
    verdict_kaiser: bool
    verdict_wishart: bool


@dataclass(frozen=True)
class DingHeBoundCheck:
    """total_variance - eigen_sum <= J_K <= total_variance, per the K-Means/PCA link."""

    k: int
    total_variance: float
    eigen_sum: float
    lower: float
    j_k: float
    satisfied: bool
    lower_strict: bool
    upper_strict: bool


@dataclass(frozen=True)
class ExperimentReport:
    variants: tuple[VariantResult, ...]
    verdict: TheoremVerdict | None
    bound_checks: tuple[DingHeBoundCheck, ...]
    empty_wishart: bool
    config: PipelineConfig


def _emd_stage(raw: DataMatrix, config: PipelineConfig):
    fi = first_imf_matrix(raw, max_imfs=config.emd_max_imfs)
    return standardize(fi.matrix), fi.passthrough_rows


def _cluster_points(active: np.ndarray, config: PipelineConfig) -> np.ndarray:
    if config.orientation == "cluster_variables":
        return active
    return active.T


def _sweep(points: np.ndarray, config: PipelineConfig) -> SweepResult:
    return sweep_optimal_k(
        points,
        k_min=config.k_min,
        k_max=config.k_max,
        seed=config.kmeans_seed,
        restarts=config.kmeans_restarts,
        max_iters=config.kmeans_max_iters,
        params=DbParams(q=config.db_q, p=config.db_p),
    )


class _Stages:
    """Lazily shared intermediates of the variant chain for one input."""

    def __init__(self, m: DataMatrix, config: PipelineConfig):
        self.config = config
        self.raw = standardize(m)
        self.bound = wishart_bound(self.raw.n_vars, self.raw.n_samples)
        self._emd = None
        self._raw_spectrum = None
        self._emd_spectrum = None

    @property
    def raw_spectrum(self):
        if self._raw_spectrum is None:
            self._raw_spectrum = symmetric_eigen(correlation_matrix(self.raw))
        return self._raw_spectrum

    @property
    def emd(self):
        if self._emd is None:
            self._emd = _emd_stage(self.raw, self.config)
        return self._emd

    @property
    def emd_spectrum(self):
        if self._emd_spectrum is None:
            self._emd_spectrum = symmetric_eigen(correlation_matrix(self.emd[0]))
        return self._emd_spectrum


def _build_variant(
    stages: _Stages, variant: Variant, include_sweep: bool
) -> VariantResult:
    config = stages.config
    bound = stages.bound
    passthrough: tuple[int, ...] = ()

    if variant is Variant.RAW:
        active = stages.raw.values
        spectrum = stages.raw_spectrum
        feature_eigs = spectrum.eigenvalues
        n_components = stages.raw.n_vars
    else:
        emd_m, passthrough = stages.emd
        spectrum = stages.emd_spectrum
        if variant is Variant.EMD:
            active = emd_m.values
            feature_eigs = spectrum.eigenvalues
            n_components = emd_m.n_vars
        else:
            if variant is Variant.PCA_K:
                indices = select_kaiser(spectrum, inclusive=config.kaiser_inclusive)
                criterion = "kaiser"
            else:
                indices = select_wishart(spectrum, bound, strict=config.wishart_strict)
                criterion = "wishart"
                if not indices:
                    raise EmptyWishartSelection(
                        f"no eigenvalue exceeds the Wishart limit "
                        f"{bound.lambda_plus:.4f}; the PCA-W variant has no "
                        f"informative components (inspect the spectrum or "
                        f"request the Kaiser criterion explicitly)"
                    )
            normalized = config.score_normalization == "unit_variance"
            reduction = project(
                emd_m, spectrum, indices, normalized=normalized, criterion=criterion
            )
            active = reduction.scores
            n_components = len(indices)
            if normalized:
                feature_eigs = np.ones(n_components)
            else:
                feature_eigs = spectrum.eigenvalues[:n_components].copy()

    sweep = _sweep(_cluster_points(active, config), config) if include_sweep else None
    return VariantResult(
        variant=variant,
        condition=condition_number(active),
        n_components=n_components,
        sweep=sweep,
        spectrum_summary=spectrum.eigenvalues.copy(),
        feature_eigenvalues=np.asarray(feature_eigs, dtype=float),
        n_samples=stages.raw.n_samples,
        bound=bound,
        passthrough_rows=passthrough,
    )


def run_variant(
    m: DataMatrix,
    variant: Variant,
    config: PipelineConfig = PipelineConfig(),
    include_sweep: bool = True,
) -> VariantResult:
    """Run one pipeline variant end to end on a raw data matrix.

    Raises EmptyWishartSelection if the PCA-W variant finds no eigenvalue
    above the Wishart limit; callers decide how to surface that outcome.
    """
    return _build_variant(_Stages(m, config), Variant(variant), include_sweep)


def check_ding_he_bound(variant_result: VariantResult, k: int) -> DingHeBoundCheck:
    """Evaluate the two-sided bound on the K-Means objective at cluster count k."""
    if k < 2:
        raise ValueError("the bound is defined for k >= 2")
    if variant_result.sweep is None:
        raise ValueError("variant result carries no sweep; rerun with include_sweep")
    try:
        idx = variant_result.sweep.k_values.index(k)
    except ValueError:
        raise ValueError(f"k={k} was not part of the sweep") from None
    t = variant_result.n_samples
    lam = variant_result.feature_eigenvalues
    total = t * float(lam.sum())
    eigen_sum = t * float(lam[: min(k - 1, lam.size)].sum())
    lower = total - eigen_sum
    j_k = variant_result.sweep.partitions[idx].objective_j
    return DingHeBoundCheck(
        k=k,
        total_variance=total,
        eigen_sum=eigen_sum,
        lower=lower,
        j_k=j_k,
        satisfied=bool(lower <= j_k <= total),
        lower_strict=bool(lower < j_k),
        upper_strict=bool(j_k < total),
    )


def theorem_test(m: DataMatrix, config: PipelineConfig = PipelineConfig()) -> TheoremVerdict:
    """Compare the DB-optimal cluster count on the Wishart scores against the
    component counts of both selection criteria."""
    raw = standardize(m)
    bound = wishart_bound(raw.n_vars, raw.n_samples)
    emd_m, _ = _emd_stage(raw, config)
    spectrum = symmetric_eigen(correlation_matrix(emd_m))
    kaiser_idx = select_kaiser(spectrum, inclusive=config.kaiser_inclusive)
    wishart_idx = select_wishart(spectrum, bound, strict=config.wishart_strict)
    if not wishart_idx:
        raise EmptyWishartSelection(
            "no informative components above the Wishart limit; the comparison "
            "is undefined on this input"
        )
    normalized = config.score_normalization == "unit_variance"
    reduction = project(
        emd_m, spectrum, wishart_idx, normalized=normalized, criterion="wishart"
    )
    sweep = _sweep(_cluster_points(reduction.scores, config), config)
    k_star = sweep.optimal_k
    c_k = len(kaiser_idx)
    c_w = len(wishart_idx)
    gap_k = abs(k_star - c_k)
    gap_w = abs(k_star - c_w)
    tol = config.similarity_tolerance
    return TheoremVerdict(
        k_star=k_star,
        c_kaiser=c_k,
        c_wishart=c_w,
        gap_kaiser=gap_k,
        gap_wishart=gap_w,
        similarity_tolerance=tol,
        verdict_kaiser=gap_k <= tol,
        verdict_wishart=gap_w <= tol,
    )


def run_experiment(
    m: DataMatrix,
    config: PipelineConfig = PipelineConfig(),
    include_sweep: bool = True,
) -> ExperimentReport:
    """Run the configured variants, the headline comparison, and bound checks."""
    stages = _Stages(m, config)
    variants = []
    empty_wishart = False
    for name in config.variants:
        variant = Variant(name)
        try:
            variants.append(_build_variant(stages, variant, include_sweep))
        except EmptyWishartSelection:
            if variant is not Variant.PCA_W:
                raise
            empty_wishart = True
    verdict = None
    if include_sweep and not empty_wishart and Variant.PCA_W.value in config.variants:
        pca_w = next(v for v in variants if v.variant is Variant.PCA_W)
        c_kaiser = int(np.sum(
            pca_w.spectrum_summary >= 1.0
            if config.kaiser_inclusive
            else pca_w.spectrum_summary > 1.0
        ))
        k_star = pca_w.sweep.optimal_k
        gap_k = abs(k_star - c_kaiser)
        gap_w = abs(k_star - pca_w.n_components)
        tol = config.similarity_tolerance
        verdict = TheoremVerdict(
            k_star=k_star,
            c_kaiser=c_kaiser,
            c_wishart=pca_w.n_components,
            gap_kaiser=gap_k,
            gap_wishart=gap_w,
            similarity_tolerance=tol,
            verdict_kaiser=gap_k <= tol,
            verdict_wishart=gap_w <= tol,
        )
    checks = []
    if include_sweep:
        for vr in variants:
            if vr.sweep is not None:
                checks.append(check_ding_he_bound(vr, vr.sweep.optimal_k))
    return ExperimentReport(
        variants=tuple(variants),
        verdict=verdict,
        bound_checks=tuple(checks),
        empty_wishart=empty_wishart,
        config=config,
    )


def _simplex_centers(k: int, edge: float) -> np.ndarray:
    """k points in R^(k-1), pairwise exactly edge apart (regular simplex)."""
    if k == 1:
        return np.zeros((1, 1))
    # Helmert rows form an orthonormal basis of the hyperplane orthogonal to 1
    basis = np.zeros((k - 1, k))
    for j in range(1, k):
        basis[j - 1, :j] = 1.0
        basis[j - 1, j] = -j
        basis[j - 1] /= math.sqrt(j * (j + 1))
    verts = np.eye(k) - 1.0 / k
    centers = verts @ basis.T          # pairwise distance sqrt(2)
    return centers * (edge / math.sqrt(2.0))


def generate_synthetic(
    n_vars: int,
    n_samples: int,
    true_k: int,
    separation: float,
    noise_sd: float,
    seed: int,
):
    """Columns drawn from true_k Gaussian blobs embedded in n_vars dimensions.

    Blob centers sit at the vertices of a regular simplex in a latent space
    of dimension true_k - 1, pairwise separation * noise_sd apart, mapped
    into the ambient space by a random orthogonal embedding; isotropic
    noise of scale noise_sd is added on top.  Returns (DataMatrix, labels).
    """
    if true_k < 1:
        raise InvalidConfig("true_k must be at least 1")
    if n_samples < true_k:
        raise InvalidConfig("n_samples must be at least true_k")
    if n_vars < 2 or n_samples < 2:
        raise InvalidConfig("matrix must be at least 2x2")
    if noise_sd <= 0:
        raise InvalidConfig("noise_sd must be positive")
    if separation < 0:
        raise InvalidConfig("separation must be nonnegative")
    latent_dim = true_k - 1
    if latent_dim > n_vars:
        raise InvalidConfig("true_k - 1 may not exceed n_vars")
    rng = np.random.default_rng(seed)
    labels = rng.permutation(np.arange(n_samples) % true_k)
    x = noise_sd * rng.standard_normal((n_vars, n_samples))
    if latent_dim >= 1:
        centers = _simplex_centers(true_k, separation * noise_sd)
        q, r = np.linalg.qr(rng.standard_normal((n_vars, latent_dim)))
        q = q * np.sign(np.diag(r))
        x = x + q @ centers[labels].T
    return DataMatrix(x), labels


def generate_smooth_synthetic(
    n_vars: int,
    n_samples: int,
    true_k: int,
    separation: float,
    noise_sd: float,
    seed: int,
    trend_scale: float = 8.0,
    ar_coeff: float = 0.99,
    jitter_fraction: float = 0.005,
):
    """Blob columns plus a shared slow trend and autocorrelated row noise.

    Mimics heavily filtered acquisition time series: nearly all of the
    per-row noise is smooth (the trend and an AR(1) process), which leaves
    the standardized matrix badly conditioned; the first-mode and
    projection stages then repair it.  Blob centers keep the same pairwise
    distance contract as generate_synthetic.  Returns (DataMatrix, labels).
    """
    jitter_sd = jitter_fraction * noise_sd
    base, labels = generate_synthetic(
        n_vars,
        n_samples,
        true_k,
        separation * noise_sd / jitter_sd,
        jitter_sd,
        seed,
    )
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(1,)))
    t = np.linspace(0.0, 1.0, n_samples)
    smooth = np.vstack([
        t,
        t**2,
        np.sin(2.0 * math.pi * t),
        np.cos(2.0 * math.pi * t),
        np.sin(4.0 * math.pi * t),
    ])
    loadings = rng.standard_normal((n_vars, smooth.shape[0]))
    trend = trend_scale * noise_sd * (loadings @ smooth)
    innovations = rng.standard_normal((n_vars, n_samples))
    ar = np.empty_like(innovations)
    ar[:, 0] = innovations[:, 0]
    for j in range(1, n_samples):
        ar[:, j] = ar_coeff * ar[:, j - 1] + innovations[:, j]
    ar *= noise_sd * math.sqrt(1.0 - ar_coeff**2)  # unit marginal variance scale
    return DataMatrix(base.values + trend + ar), labels
