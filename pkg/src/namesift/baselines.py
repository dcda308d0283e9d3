"""Unsupervised clustering baselines over tf-idf document vectors.

Both baselines are deliberately deterministic given their inputs: HAC
breaks distance ties lexicographically by member document ids, and K-Means
draws its initial centroids from a seeded generator.  That keeps repeated
runs byte-identical, which library users and the test suite rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .features import FeatureVector

__all__ = [
    "Clustering",
    "hac_complete",
    "kmeans",
    "kmeans_objective",
    "run_repetitions",
    "assignment_to_clusters",
]


@dataclass
class Clustering:
    """A partition of document ids plus how it was produced."""

    clusters: list[list[str]]
    method: str
    k: int
    seed: int | None = None
    n_iterations: int | None = None

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for cluster in self.clusters:
            if not cluster:
                raise ValueError("clusters must be non-empty")
            for doc_id in cluster:
                if doc_id in seen:
                    raise ValueError(f"document {doc_id!r} appears in two clusters")
                seen.add(doc_id)

    def to_dict(self) -> dict:
        """JSON-ready form with canonically ordered clusters."""
        ordered = sorted((sorted(c) for c in self.clusters), key=lambda c: c[0])
        out: dict = {"method": self.method, "k": self.k, "clusters": ordered}
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _dense_matrix(doc_vectors: Mapping[str, FeatureVector]) -> tuple[list[str], np.ndarray]:
    """Stack sparse vectors into a dense matrix over their feature union."""
    ids = list(doc_vectors)
    feature_ids = sorted({fid for vec in doc_vectors.values() for fid in vec})
    column = {fid: j for j, fid in enumerate(feature_ids)}
    matrix = np.zeros((len(ids), len(feature_ids)))
    for i, doc_id in enumerate(ids):
        for fid, w in doc_vectors[doc_id].items():
            matrix[i, column[fid]] = w
    return ids, matrix


def _l2_normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return matrix / safe


def _check_k(k: int, n: int) -> int:
    if n == 0:
        raise ValueError("cannot cluster an empty document set")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    # More clusters than documents is unsatisfiable; clamp to n.
    return min(k, n)


def hac_complete(doc_vectors: Mapping[str, FeatureVector], k: int) -> Clustering:
    """Agglomerate documents bottom-up under complete linkage.

    Distance is 1 - cosine over the given vectors (all-zero vectors sit at
    distance 1 from everything).  Each step merges the pair of clusters
    with the smallest maximum pairwise distance; exact ties pick the pair
    whose sorted (min doc id, min doc id) key is lexicographically
    smallest.  Stops when ``k`` clusters remain.
    """
    ids, matrix = _dense_matrix(doc_vectors)
    k = _check_k(k, len(ids))
    unit = _l2_normalize_rows(matrix)
    distance = 1.0 - unit @ unit.T

    clusters: list[list[str]] = [[doc_id] for doc_id in ids]
    # Complete-link distance between current clusters, kept as a plain
    # list-of-lists so merged rows can be deleted.
    link = [[float(distance[i, j]) for j in range(len(ids))] for i in range(len(ids))]
    mins = [min(c) for c in clusters]

    while len(clusters) > k:
        best: tuple[float, str, str] | None = None
        best_pair = (0, 1)
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                lo, hi = sorted((mins[i], mins[j]))
                candidate = (link[i][j], lo, hi)
                if best is None or candidate < best:
                    best = candidate
                    best_pair = (i, j)
        i, j = best_pair
        clusters[i] = clusters[i] + clusters[j]
        mins[i] = min(mins[i], mins[j])
        for m in range(len(clusters)):
            link[i][m] = link[m][i] = max(link[i][m], link[j][m])
        del clusters[j], mins[j], link[j]
        for row in link:
            del row[j]

    return Clustering(clusters=clusters, method="hac_complete", k=k)


def _reseed_empty(labels: np.ndarray, matrix: np.ndarray, centroids: np.ndarray) -> None:
    """Give each empty cluster the point farthest from its centroid.

    The relocated point becomes the empty cluster's centroid, so its
    objective contribution drops to zero and the k-means objective stays
    non-increasing through the reseed.  Points alone in their cluster are
    not movable (a new hole would open); by pigeonhole some cluster has
    two points whenever another is empty.
    """
    k = centroids.shape[0]
    for cluster in range(k):
        if np.any(labels == cluster):
            continue
        deltas = matrix - centroids[labels]
        distances = np.einsum("ij,ij->i", deltas, deltas)
        counts = np.bincount(labels, minlength=k)
        distances = np.where(counts[labels] > 1, distances, -np.inf)
        farthest = int(np.argmax(distances))
        labels[farthest] = cluster
        centroids[cluster] = matrix[farthest]


def _lloyd(matrix: np.ndarray, k: int, seed: int, max_iterations: int) -> tuple[np.ndarray, int, list[float]]:
    """Run Lloyd iterations; returns labels, iteration count, objectives.

    The objective (sum of squared distances to the assigned centroid) is
    recorded once per iteration, after the centroid update.
    """
    n = matrix.shape[0]
    rng = np.random.default_rng(seed)
    centroids = matrix[rng.choice(n, size=k, replace=False)].copy()

    labels = np.full(n, -1)
    history: list[float] = []
    n_iterations = 0
    for _ in range(max_iterations):
        n_iterations += 1
        deltas = matrix[:, None, :] - centroids[None, :, :]
        sq_distances = np.einsum("ijk,ijk->ij", deltas, deltas)
        new_labels = np.argmin(sq_distances, axis=1)
        _reseed_empty(new_labels, matrix, centroids)
        converged = np.array_equal(new_labels, labels)
        labels = new_labels
        for cluster in range(k):
            members = matrix[labels == cluster]
            if len(members):
                centroids[cluster] = members.mean(axis=0)
        residuals = matrix - centroids[labels]
        history.append(float(np.einsum("ij,ij->", residuals, residuals)))
        if converged:
            break
    return labels, n_iterations, history


def kmeans(doc_vectors: Mapping[str, FeatureVector], k: int, seed: int, max_iterations: int = 100) -> Clustering:
    """Lloyd iterations on L2-normalized vectors with seeded init.

    Initial centroids are ``k`` distinct documents drawn without
    replacement from ``np.random.default_rng(seed)``.  Assignment ties go
    to the lowest centroid index.  A cluster left empty after assignment
    is reseeded with the farthest point.  Stops when assignments repeat
    or after ``max_iterations``.
    """
    ids, matrix = _dense_matrix(doc_vectors)
    k = _check_k(k, len(ids))
    labels, n_iterations, _ = _lloyd(_l2_normalize_rows(matrix), k, seed, max_iterations)
    clusters = [[ids[i] for i in range(len(ids)) if labels[i] == cluster] for cluster in range(k)]
    clusters = [c for c in clusters if c]
    return Clustering(clusters=clusters, method="kmeans", k=k, seed=seed, n_iterations=n_iterations)


def kmeans_objective(clustering: Clustering, doc_vectors: Mapping[str, FeatureVector]) -> float:
    """Sum of squared distances to cluster means over normalized vectors."""
    ids, matrix = _dense_matrix(doc_vectors)
    matrix = _l2_normalize_rows(matrix)
    row = {doc_id: i for i, doc_id in enumerate(ids)}
    total = 0.0
    for cluster in clustering.clusters:
        members = matrix[[row[doc_id] for doc_id in cluster]]
        centroid = members.mean(axis=0)
        total += float(((members - centroid) ** 2).sum())
    return total


def run_repetitions(doc_vectors: Mapping[str, FeatureVector], k: int, reps: int = 10) -> list[Clustering]:
    """K-Means runs with seeds 1..reps, for averaging metric estimates."""
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    return [kmeans(doc_vectors, k, seed) for seed in range(1, reps + 1)]


def assignment_to_clusters(mapping: Mapping[str, str], doc_ids: Sequence[str] | None = None) -> list[list[str]]:
    """Group documents by assigned class, dropping the class labels.

    ``doc_ids`` restricts and orders the grouping; by default all mapped
    documents are used in mapping order.  Groups appear in first-seen
    order and empty groups are never produced.
    """
    ordered = list(mapping) if doc_ids is None else list(doc_ids)
    groups: dict[str, list[str]] = {}
    for doc_id in ordered:
        groups.setdefault(mapping[doc_id], []).append(doc_id)
    return list(groups.values())
