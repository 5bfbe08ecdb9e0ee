"""Per-category k-means with k selected by the elbow rule.

Points are rows of a float64 ndarray. Assignment arithmetic uses
squared Euclidean distance; every distance reported to callers is true
Euclidean. All randomness flows through numpy Generators seeded from
explicit 64-bit seeds, so identical inputs give bit-identical results.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DimensionError, InsufficientPoints, ValidationError

DEFAULT_MAX_ITERS = 100
DEFAULT_REL_TOL = 1e-6


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    seed: int = 0
    max_iters: int = DEFAULT_MAX_ITERS
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("k must be >= 1")
        if self.max_iters < 1:
            raise ValidationError("max_iters must be >= 1")
        if self.rel_tol < 0:
            raise ValidationError("rel_tol must be >= 0")


@dataclass
class KMeansResult:
    centroids: np.ndarray     # (k, dim)
    assignments: np.ndarray   # (n,) int64, nearest centroid per point
    wcss: float
    iterations: int


@dataclass
class Cluster:
    """One sub-cluster of a category: centroid plus member sketch ids."""

    category: str
    local_index: int
    centroid: np.ndarray
    member_ids: np.ndarray

    def __post_init__(self):
        self.centroid = np.asarray(self.centroid, dtype=np.float64)
        self.member_ids = np.asarray(self.member_ids, dtype=np.uint64)
        if len(self.member_ids) < 1:
            raise ValidationError(f"cluster ({self.category}, {self.local_index}) has no members")

    @property
    def member_count(self) -> int:
        return len(self.member_ids)

    @property
    def key(self) -> tuple[str, int]:
        return (self.category, self.local_index)


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise DimensionError(f"points must be a 2-D array, got ndim={pts.ndim}")
    if not np.all(np.isfinite(pts)):
        raise ValidationError("points contain non-finite values")
    return pts


def kmeans_pp_init(points, k: int, seed: int) -> np.ndarray:
    """k-means++ seeding: first centroid uniform, each next drawn with
    probability proportional to squared distance to the nearest chosen
    centroid. Deterministic for a fixed seed."""
    pts = _as_points(points)
    return pts[_kmeans_pp_indices(pts, k, seed)]


def _kmeans_pp_indices(pts: np.ndarray, k: int, seed: int) -> np.ndarray:
    n = len(pts)
    if k < 1:
        raise ValidationError("k must be >= 1")
    if n < k:
        raise InsufficientPoints(f"need at least {k} points, have {n}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.integers(n)
    dist_sq = cdist(pts, pts[chosen[0]][None, :], "sqeuclidean").ravel()
    for i in range(1, k):
        total = dist_sq.sum()
        if total > 0:
            chosen[i] = rng.choice(n, p=dist_sq / total)
        else:
            chosen[i] = rng.integers(n)  # all remaining points coincide
        new_d = cdist(pts, pts[chosen[i]][None, :], "sqeuclidean").ravel()
        np.minimum(dist_sq, new_d, out=dist_sq)
    return chosen


def _assign(pts: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = cdist(pts, centroids, "sqeuclidean")
    assign = np.argmin(d2, axis=1)  # ties resolve to the lowest index
    return assign, d2


def _repair_empty(assign: np.ndarray, d2: np.ndarray, k: int) -> np.ndarray:
    """Give each empty cluster the point currently farthest from its own
    centroid (ties to the lowest point index). Seized points are marked
    so one point cannot fill two clusters."""
    counts = np.bincount(assign, minlength=k)
    if np.all(counts > 0):
        return assign
    assign = assign.copy()
    own = d2[np.arange(len(assign)), assign].copy()
    for j in np.nonzero(counts == 0)[0]:
        p = int(np.argmax(own))
        assign[p] = j
        own[p] = 0.0
    return assign


def kmeans_fit(points, config: KMeansConfig) -> KMeansResult:
    """Lloyd iterations from a k-means++ start.

    Stops when the relative WCSS improvement drops below
    ``config.rel_tol`` or ``config.max_iters`` is reached; a final
    assignment pass guarantees every point ends on its nearest centroid
    (ties to the lowest index).
    """
    pts = _as_points(points)
    k = config.k
    if len(pts) < k:
        raise InsufficientPoints(f"need at least {k} points, have {len(pts)}")

    centroids = pts[_kmeans_pp_indices(pts, k, config.seed)].copy()
    prev_wcss = np.inf
    iterations = 0
    assign = np.zeros(len(pts), dtype=np.int64)
    for _ in range(config.max_iters):
        assign, d2 = _assign(pts, centroids)
        assign = _repair_empty(assign, d2, k)
        for j in range(k):
            centroids[j] = pts[assign == j].mean(axis=0)
        wcss = float(cdist(pts, centroids, "sqeuclidean")[np.arange(len(pts)), assign].sum())
        iterations += 1
        if prev_wcss < np.inf:
            improvement = 0.0 if prev_wcss == 0.0 else (prev_wcss - wcss) / prev_wcss
            if improvement < config.rel_tol:
                prev_wcss = wcss
                break
        prev_wcss = wcss

    assign, d2 = _assign(pts, centroids)
    wcss = float(d2[np.arange(len(pts)), assign].sum())
    return KMeansResult(centroids=centroids, assignments=assign, wcss=wcss, iterations=iterations)


def elbow_select_k(points, k_min: int, k_max: int, seed: int) -> tuple[int, list[tuple[int, float]]]:
    """Fit every k in [k_min, k_max] (seed derived as seed XOR k) and
    pick the k whose (k, wcss) point lies farthest from the chord
    joining the curve's endpoints. Ties go to the smallest k. Returns
    the chosen k and the full curve for audit."""
    if k_min < 1 or k_max < k_min + 1:
        raise ValidationError("need k_min >= 1 and k_max >= k_min + 1")
    pts = _as_points(points)
    if len(pts) < k_max:
        raise InsufficientPoints(f"need at least {k_max} points, have {len(pts)}")

    curve = []
    for k in range(k_min, k_max + 1):
        result = kmeans_fit(pts, KMeansConfig(k=k, seed=seed ^ k))
        curve.append((k, result.wcss))

    a = np.array([curve[0][0], curve[0][1]])
    b = np.array([curve[-1][0], curve[-1][1]])
    chord = b - a
    best_k, best_dist = curve[0][0], -1.0
    for k, wcss in curve:
        rel = np.array([k, wcss]) - a
        dist = abs(chord[0] * rel[1] - chord[1] * rel[0])  # |cross|, chord length cancels
        if dist > best_dist:
            best_k, best_dist = k, dist
    return best_k, curve


def assign_nearest(v, centroids) -> tuple[int, float]:
    """Index of the nearest centroid by Euclidean distance, plus that
    distance. Ties go to the lowest index."""
    cents = np.asarray(centroids, dtype=np.float64)
    vec = np.asarray(v, dtype=np.float64)
    if cents.ndim != 2 or len(cents) == 0:
        raise ValidationError("centroids must be a non-empty 2-D array")
    if vec.shape != (cents.shape[1],):
        raise DimensionError(f"vector dim {vec.shape} does not match centroid dim {cents.shape[1]}")
    d2 = cdist(vec[None, :], cents, "sqeuclidean").ravel()
    idx = int(np.argmin(d2))
    return idx, float(np.sqrt(d2[idx]))
