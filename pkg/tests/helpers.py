"""Shared test utilities: random fixtures and dense oracle assemblies."""

from __future__ import annotations

import numpy as np

from rise.graph import BipartiteGraph, build_bipartite, normalize
from rise.masking import generate_mask, mask_to_index_vectors, scatter


def rand_orthonormal(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return q[:, :k]


def random_normalized_graph(
    rng: np.random.Generator, n: int, n_anchors: int, knn: int, dim: int = 3
) -> BipartiteGraph:
    samples = rng.standard_normal((n, dim))
    anchors = rng.standard_normal((n_anchors, dim))
    return normalize(build_bipartite(samples, anchors, knn))


def random_index_vectors(rng: np.random.Generator, n: int, n_views: int, missing_rate: float):
    mask = generate_mask(n, n_views, missing_rate, int(rng.integers(2**31)))
    return mask_to_index_vectors(mask)


def dense_scatter_outer(embeddings, index_vectors, n: int) -> np.ndarray:
    """Sum over views of the zero-padded embedding outer products (n x n)."""
    total = np.zeros((n, n))
    for emb, idx in zip(embeddings, index_vectors):
        placed = scatter(emb, idx, n)
        total += placed @ placed.T
    return total


def dense_objective(consensus, embeddings, graphs, index_vectors, beta: float) -> float:
    """Model objective evaluated literally with n x n products."""
    n = consensus.shape[0]
    yyt = consensus @ consensus.T
    total = 0.0
    for emb, g, idx in zip(embeddings, graphs, index_vectors):
        placed = scatter(emb, idx, n)
        diff = yyt - placed @ placed.T
        total += float((diff * diff).sum())
        dense_b = g.toarray()
        total -= beta * float(np.trace(emb.T @ dense_b @ dense_b.T @ emb))
    return total
