"""Davies-Bouldin index and the optimal-K sweep that minimizes it.

The index averages, over clusters, the worst-case ratio of summed
within-cluster dispersions to between-centroid distance; lower is better.
Dispersion uses exponent q, centroid distance is Minkowski-p; the p=q=2
default pairs with the Euclidean K-Means objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CoincidentCentroids,
    DimensionMismatch,
    EmptyCluster,
    FewerThanTwoClusters,
)
from .kmeans import Partition, kmeans


@dataclass(frozen=True)
class DbParams:
    q: int = 2   # dispersion exponent
    p: int = 2   # Minkowski order for centroid distance

    def __post_init__(self):
        if self.q < 1 or self.p < 1:
            raise ValueError("p and q must be at least 1")


@dataclass(frozen=True)
class SweepResult:
    k_values: tuple[int, ...]
    db_scores: tuple[float, ...]
    optimal_k: int
    partitions: tuple[Partition, ...]


def cluster_dispersion(points: np.ndarray, centroid: np.ndarray, q: int = 2) -> float:
    """q-th root of the mean q-th power of Euclidean distances to the centroid."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] == 0:
        raise EmptyCluster("dispersion of an empty cluster is undefined")
    dists = np.sqrt(np.sum((points - centroid) ** 2, axis=1))
    return float(np.mean(dists**q) ** (1.0 / q))


def centroid_distance(a: np.ndarray, b: np.ndarray, p: int = 2) -> float:
    """Minkowski-p distance between two centroids."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"centroid shapes differ: {a.shape} vs {b.shape}")
    return float(np.sum(np.abs(a - b) ** p) ** (1.0 / p))


def davies_bouldin(
    partition: Partition, points: np.ndarray, params: DbParams = DbParams()
) -> float:
    """Mean over clusters of max_{j!=i} (S_i + S_j) / M_ij."""
    points = np.asarray(points, dtype=float)
    k = partition.k
    if k < 2:
        raise FewerThanTwoClusters("index needs at least two clusters")
    assignments = partition.assignments
    counts = np.bincount(assignments, minlength=k)
    if np.any(counts == 0):
        raise EmptyCluster("index undefined for a partition with an empty cluster")
    s = np.array(
        [
            cluster_dispersion(points[assignments == i], partition.centroids[i], params.q)
            for i in range(k)
        ]
    )
    r_max = np.zeros(k)
    for i in range(k):
        for j in range(i + 1, k):
            m = centroid_distance(partition.centroids[i], partition.centroids[j], params.p)
            if m == 0.0:
                raise CoincidentCentroids(f"centroids {i} and {j} coincide")
            r = (s[i] + s[j]) / m
            if r > r_max[i]:
                r_max[i] = r
            if r > r_max[j]:
                r_max[j] = r
    return float(np.mean(r_max))


def sweep_optimal_k(
    points: np.ndarray,
    k_min: int = 2,
    k_max: int = 10,
    seed: int = 0,
    restarts: int = 25,
    max_iters: int = 300,
    params: DbParams = DbParams(),
) -> SweepResult:
    """Cluster at every K in [k_min, k_max] and keep the DB-minimizing K.

    Ties break toward the smaller K.
    """
    points = np.asarray(points, dtype=float)
    t = points.shape[0]
    if k_min < 2:
        raise ValueError("k_min must be at least 2")
    if k_max < k_min:
        raise ValueError("k_max must be >= k_min")
    if k_max > t - 1:
        raise ValueError(f"k_max={k_max} exceeds T-1={t - 1}")
    k_values = []
    db_scores = []
    partitions = []
    for k in range(k_min, k_max + 1):
        part = kmeans(points, k, seed=seed, restarts=restarts, max_iters=max_iters)
        k_values.append(k)
        db_scores.append(davies_bouldin(part, points, params))
        partitions.append(part)
    best = 0
    for i in range(1, len(db_scores)):
        if db_scores[i] < db_scores[best]:
            best = i
    return SweepResult(
        k_values=tuple(k_values),
        db_scores=tuple(db_scores),
        optimal_k=k_values[best],
        partitions=tuple(partitions),
    )
