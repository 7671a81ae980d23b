"""K-means over training profiles and per-cluster set comparison."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from loadgen.errors import DimensionError
from loadgen.evalsuite.sampleset import SampleSet

MAX_LLOYD_ITERATIONS = 300


def _sq_dists(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    d = (
        np.sum(x**2, axis=1)[:, None]
        + np.sum(centroids**2, axis=1)[None, :]
        - 2.0 * x @ centroids.T
    )
    return np.maximum(d, 0.0)


def _kmeans_pp_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centroids = np.empty((k, x.shape[1]))
    centroids[0] = x[rng.integers(x.shape[0])]
    closest = _sq_dists(x, centroids[:1]).ravel()
    for i in range(1, k):
        total = closest.sum()
        if total <= 0.0:
            centroids[i:] = centroids[0]
            return centroids
        probs = closest / total
        centroids[i] = x[rng.choice(x.shape[0], p=probs)]
        closest = np.minimum(closest, _sq_dists(x, centroids[i:i + 1]).ravel())
    return centroids


def assign_clusters(values: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Nearest-centroid label (squared Euclidean) for every profile."""
    return np.argmin(_sq_dists(np.atleast_2d(values), centroids), axis=1)


def kmeans_fit(values: np.ndarray, k: int, seed: int,
               max_iter: int = MAX_LLOYD_ITERATIONS) -> np.ndarray:
    """Lloyd iterations from k-means++ seeding until the assignment is stable.

    Empty clusters are re-seeded from the point farthest from its
    current centroid. Deterministic per seed.
    """
    x = np.atleast_2d(np.asarray(values, dtype=np.float64))
    if x.shape[0] < k:
        raise DimensionError(f"k-means needs at least k={k} profiles, got {x.shape[0]}")
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(x, k, rng)
    labels = assign_clusters(x, centroids)
    for _ in range(max_iter):
        for j in range(k):
            members = labels == j
            if members.any():
                centroids[j] = x[members].mean(axis=0)
            else:
                dist_to_own = _sq_dists(x, centroids)[np.arange(x.shape[0]), labels]
                centroids[j] = x[np.argmax(dist_to_own)]
        new_labels = assign_clusters(x, centroids)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return centroids


@dataclass
class ClusterReport:
    """Per-cluster counts and mean profiles for every compared set.

    Clusters are indexed in decreasing order of training volume;
    ``counts[label]`` has one entry per cluster, ``means[label]`` one
    96-dim row per cluster (NaN where a set has no members).
    """

    centroids: np.ndarray           # (k, d), reordered
    counts: dict                    # label -> (k,) int64
    means: dict                     # label -> (k, d)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]


def cluster_compare(centroids: np.ndarray, sets: list[SampleSet],
                    train_label: str = "train") -> ClusterReport:
    """Assign every set to the training clusters and summarize per cluster."""
    labels_by_set = {s.label: assign_clusters(s.values, centroids) for s in sets}
    if train_label in labels_by_set:
        ref = labels_by_set[train_label]
    else:
        ref = labels_by_set[sets[0].label]
    k = centroids.shape[0]
    ref_counts = np.bincount(ref, minlength=k)
    order = np.argsort(-ref_counts, kind="stable")

    counts = {}
    means = {}
    for s in sets:
        assigned = labels_by_set[s.label]
        set_counts = np.bincount(assigned, minlength=k)
        set_means = np.full((k, s.values.shape[1]), np.nan)
        for j in range(k):
            members = assigned == j
            if members.any():
                set_means[j] = s.values[members].mean(axis=0)
        counts[s.label] = set_counts[order]
        means[s.label] = set_means[order]
    return ClusterReport(centroids=centroids[order], counts=counts, means=means)
