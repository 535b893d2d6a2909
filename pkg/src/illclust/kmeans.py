"""Crisp K-Means by Lloyd iteration with k-means++ seeding and restarts.

Each restart draws from its own counter-based RNG stream (Philox keyed by
(seed, restart)), so the best-of-restarts result is identical whether
restarts run sequentially or on a thread pool.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._threads import worker_count
from .errors import DegeneratePoints, TooManyClusters

CENTROID_TOL = 1e-10    # max centroid movement treated as converged


@dataclass(frozen=True)
class Partition:
    """Crisp assignment of T points to k clusters at a Lloyd fixed point."""

    assignments: np.ndarray   # (T,) ints in [0, k)
    centroids: np.ndarray     # (k, D)
    objective_j: float        # sum of squared distances to assigned centroids
    k: int
    iterations: int
    restarts_used: int

    def __post_init__(self):
        a = np.asarray(self.assignments)
        c = np.asarray(self.centroids, dtype=float)
        a.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "assignments", a)
        object.__setattr__(self, "centroids", c)


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(restart,))
    return np.random.Generator(np.random.Philox(ss))


def _sq_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """(T, K) squared Euclidean distances, clipped at zero."""
    p2 = np.sum(points**2, axis=1, keepdims=True)
    c2 = np.sum(centroids**2, axis=1)
    d2 = p2 + c2 - 2.0 * points @ centroids.T
    return np.maximum(d2, 0.0)


def _kmeanspp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    t = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(t)]
    if k == 1:
        return centroids
    d2 = np.sum((points - centroids[0]) ** 2, axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # all remaining points coincide with chosen centroids
            centroids[i] = points[rng.integers(t)]
        else:
            idx = rng.choice(t, p=d2 / total)
            centroids[i] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centroids[i]) ** 2, axis=1))
    return centroids


def _repair_empty(points, assignments, centroids, k):
    """Reseed each empty cluster at the point farthest from its own centroid."""
    counts = np.bincount(assignments, minlength=k)
    while np.any(counts == 0):
        empty = int(np.flatnonzero(counts == 0)[0])
        dist = np.sum((points - centroids[assignments]) ** 2, axis=1)
        dist[counts[assignments] <= 1] = -1.0  # moving a singleton empties another
        far = int(np.argmax(dist))
        counts[assignments[far]] -= 1
        assignments[far] = empty
        counts[empty] = 1
        centroids[empty] = points[far]
    return assignments, centroids


def _class_means(points, assignments, k, fallback):
    centroids = np.empty((k, points.shape[1]))
    for c in range(k):
        mask = assignments == c
        centroids[c] = points[mask].mean(axis=0) if np.any(mask) else fallback[c]
    return centroids


def lloyd_step(points: np.ndarray, centroids: np.ndarray):
    """One assign-and-update pass; empty clusters repaired internally.

    Returns (assignments, new_centroids, j) with j computed against the new
    centroids, so j is non-increasing over repeated calls.
    """
    points = np.asarray(points, dtype=float)
    centroids = np.asarray(centroids, dtype=float)
    k = centroids.shape[0]
    assignments = np.argmin(_sq_distances(points, centroids), axis=1)
    new_centroids = _class_means(points, assignments, k, centroids)
    assignments, new_centroids = _repair_empty(points, assignments, new_centroids, k)
    new_centroids = _class_means(points, assignments, k, new_centroids)
    j = float(np.sum((points - new_centroids[assignments]) ** 2))
    return assignments, new_centroids, j


def _single_run(points, k, seed, restart, max_iters):
    rng = _restart_rng(seed, restart)
    centroids = _kmeanspp_init(points, k, rng)
    assignments = None
    iterations = 0
    for _ in range(max_iters):
        iterations += 1
        prev_centroids = centroids
        new_assignments, centroids, _ = lloyd_step(points, centroids)
        if assignments is not None and np.array_equal(new_assignments, assignments):
            assignments = new_assignments
            break
        assignments = new_assignments
        if np.max(np.abs(centroids - prev_centroids)) < CENTROID_TOL:
            break
    j = float(np.sum((points - centroids[assignments]) ** 2))
    return assignments, centroids, j, iterations


def kmeans(
    points: np.ndarray,
    k: int,
    seed: int = 0,
    restarts: int = 25,
    max_iters: int = 300,
) -> Partition:
    """Best-of-restarts Lloyd K-Means on rows of an T x D matrix.

    Deterministic for fixed (seed, restarts, max_iters); ties between
    restarts break toward the lower restart index.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError("points must be a T x D matrix")
    if not np.all(np.isfinite(points)):
        raise ValueError("points contain NaN or Inf")
    t = points.shape[0]
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > t:
        raise TooManyClusters(f"k={k} exceeds the number of points {t}")
    n_distinct = np.unique(points, axis=0).shape[0]
    if k > n_distinct:
        raise DegeneratePoints(
            f"k={k} exceeds the number of distinct points {n_distinct}"
        )
    if restarts < 1:
        raise ValueError("restarts must be at least 1")

    workers = worker_count()
    if workers > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(
                pool.map(
                    lambda r: _single_run(points, k, seed, r, max_iters),
                    range(restarts),
                )
            )
    else:
        runs = [_single_run(points, k, seed, r, max_iters) for r in range(restarts)]

    best = min(range(restarts), key=lambda r: runs[r][2])  # strict < keeps lowest index
    assignments, centroids, j, iterations = runs[best]
    return Partition(
        assignments=assignments,
        centroids=centroids,
        objective_j=j,
        k=k,
        iterations=iterations,
        restarts_used=restarts,
    )
