"""Availability masks for incomplete multi-view data, and the index-driven
row selection operators that stand in for 0/1 selection matrices.

``gather`` pulls the rows of a complete matrix that a view covers;
``scatter`` places view rows back at their global positions, zero
elsewhere. Both are plain index copies, so cost and storage stay linear
in the number of samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset_io import MultiViewDataset
from .seeding import make_rng

_MAX_MASK_RETRIES = 100


class MaskError(ValueError):
    """Infeasible or degenerate availability pattern."""


@dataclass(frozen=True)
class Mask:
    """Boolean availability table, one row per sample, one column per view."""

    table: np.ndarray

    def __post_init__(self) -> None:
        if self.table.ndim != 2 or self.table.dtype != np.bool_:
            raise MaskError("mask table must be a 2-D boolean array")
        if not self.table.any(axis=1).all():
            raise MaskError("every sample must be available in at least one view")
        if not self.table.any(axis=0).all():
            raise MaskError("every view must cover at least one sample")

    @property
    def n(self) -> int:
        return self.table.shape[0]

    @property
    def n_views(self) -> int:
        return self.table.shape[1]


def generate_mask(n: int, n_views: int, missing_rate: float, seed: int) -> Mask:
    """Simulate incompleteness: round((1-p)*n) samples keep all views, the
    rest keep a uniformly random non-empty proper subset of views.

    Deterministic per seed; if a view column ends up empty the draw is
    rerolled deterministically a bounded number of times.
    """
    if n < 1 or n_views < 1:
        raise ValueError("n and n_views must be positive")
    if not 0.0 <= missing_rate < 1.0:
        raise ValueError("missing_rate must lie in [0, 1)")
    if n_views == 1 and missing_rate > 0:
        raise MaskError("cannot drop views from single-view data")
    if n_views > 62:
        raise ValueError("subset sampling supports at most 62 views")

    n_complete = int(round((1.0 - missing_rate) * n))
    for attempt in range(_MAX_MASK_RETRIES):
        rng = make_rng(seed, attempt)
        table = np.zeros((n, n_views), dtype=bool)
        order = rng.permutation(n)
        table[order[:n_complete]] = True
        rest = order[n_complete:]
        if rest.size:
            # codes 1 .. 2^v-2 are exactly the non-empty proper subsets
            codes = rng.integers(1, (1 << n_views) - 1, size=rest.size)
            table[rest] = (codes[:, None] >> np.arange(n_views)) & 1 > 0
        if table.any(axis=0).all():
            return Mask(table)
    raise MaskError(f"no valid mask after {_MAX_MASK_RETRIES} attempts (n={n}, views={n_views})")


def mask_to_index_vectors(mask: Mask) -> list[np.ndarray]:
    """Ascending sample indices covered by each view."""
    return [np.flatnonzero(mask.table[:, j]).astype(np.int64) for j in range(mask.n_views)]


def mask_from_index_vectors(index_vectors: list[np.ndarray], n: int) -> Mask:
    table = np.zeros((n, len(index_vectors)), dtype=bool)
    for j, idx in enumerate(index_vectors):
        table[np.asarray(idx, dtype=np.int64), j] = True
    return Mask(table)


def gather(matrix: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Rows of ``matrix`` at ``indices``, in index order."""
    matrix = np.asarray(matrix)
    indices = np.asarray(indices, dtype=np.int64)
    if matrix.ndim != 2:
        raise ValueError("gather expects a 2-D matrix")
    if indices.size and (indices.min() < 0 or indices.max() >= matrix.shape[0]):
        raise IndexError(
            f"gather index out of range for {matrix.shape[0]} rows"
        )
    return matrix[indices]


def scatter(rows: np.ndarray, indices: np.ndarray, n_total: int) -> np.ndarray:
    """Place ``rows`` at global positions ``indices``; all other rows zero."""
    rows = np.asarray(rows)
    indices = np.asarray(indices, dtype=np.int64)
    if rows.ndim != 2:
        raise ValueError("scatter expects a 2-D matrix")
    if rows.shape[0] != indices.shape[0]:
        raise ValueError("row count does not match index count")
    if indices.size:
        if indices.min() < 0 or indices.max() >= n_total:
            raise IndexError(f"scatter index out of range for {n_total} rows")
        if np.any(np.diff(indices) <= 0):
            raise ValueError("scatter indices must be strictly increasing")
    out = np.zeros((n_total, rows.shape[1]), dtype=rows.dtype)
    out[indices] = rows
    return out


def apply_mask(dataset: MultiViewDataset, mask: Mask) -> MultiViewDataset:
    """Drop unavailable rows from a complete dataset according to ``mask``."""
    if dataset.n_total != mask.n or dataset.n_views != mask.n_views:
        raise ValueError("mask shape does not match dataset")
    for i, idx in enumerate(dataset.index_vectors):
        if idx.shape[0] != dataset.n_total:
            raise ValueError(f"view {i} is already incomplete; apply_mask needs complete views")
    index_vectors = mask_to_index_vectors(mask)
    views = [gather(view, idx) for view, idx in zip(dataset.views, index_vectors)]
    return MultiViewDataset(views, index_vectors, dataset.n_total, labels=dataset.labels)


def write_mask(mask: Mask, path: str | Path) -> None:
    np.savetxt(path, mask.table.astype(np.int64), fmt="%d", delimiter=",")


def read_mask(path: str | Path) -> Mask:
    arr = np.loadtxt(path, delimiter=",", dtype=np.int64, ndmin=2)
    if not np.isin(arr, (0, 1)).all():
        raise MaskError(f"{path}: mask entries must be 0 or 1")
    return Mask(arr.astype(bool))
