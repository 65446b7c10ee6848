"""Clustering agreement scores: accuracy under optimal one-to-one label
matching, normalized mutual information, and purity."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment


def _check_pair(pred, truth) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=np.int64).ravel()
    truth = np.asarray(truth, dtype=np.int64).ravel()
    if pred.shape[0] != truth.shape[0]:
        raise ValueError(f"label lengths differ: {pred.shape[0]} vs {truth.shape[0]}")
    if pred.shape[0] == 0:
        raise ValueError("need at least one label")
    return pred, truth


def _contingency(pred: np.ndarray, truth: np.ndarray) -> np.ndarray:
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    n_pred = int(pi.max()) + 1
    n_true = int(ti.max()) + 1
    flat = np.bincount(pi * n_true + ti, minlength=n_pred * n_true)
    return flat.reshape(n_pred, n_true)


def clustering_accuracy(pred, truth) -> float:
    """Fraction of samples matched under the best one-to-one label mapping."""
    pred, truth = _check_pair(pred, truth)
    counts = _contingency(pred, truth)
    side = max(counts.shape)
    padded = np.zeros((side, side), dtype=np.int64)
    padded[: counts.shape[0], : counts.shape[1]] = counts
    rows, cols = linear_sum_assignment(padded, maximize=True)
    return float(padded[rows, cols].sum()) / pred.shape[0]


def nmi(pred, truth) -> float:
    """Mutual information normalized by the geometric mean of the entropies.

    Returns 0 when either partition has zero entropy (the 0/0 convention).
    """
    pred, truth = _check_pair(pred, truth)
    joint = _contingency(pred, truth) / pred.shape[0]
    p_pred = joint.sum(axis=1)
    p_true = joint.sum(axis=0)
    nz = joint > 0
    outer = p_pred[:, None] * p_true[None, :]
    mi = float((joint[nz] * (np.log(joint[nz]) - np.log(outer[nz]))).sum())
    h_pred = -float((p_pred[p_pred > 0] * np.log(p_pred[p_pred > 0])).sum())
    h_true = -float((p_true[p_true > 0] * np.log(p_true[p_true > 0])).sum())
    denom = np.sqrt(h_pred * h_true)
    if denom <= 0.0:
        return 0.0
    return float(np.clip(max(mi, 0.0) / denom, 0.0, 1.0))


def purity(pred, truth) -> float:
    """Fraction covered by each predicted cluster's majority true class."""
    pred, truth = _check_pair(pred, truth)
    counts = _contingency(pred, truth)
    return float(counts.max(axis=1).sum()) / pred.shape[0]
