"""The six label-distribution evaluation measures and per-dataset aggregation.

Distances (smaller is better): chebyshev, clark, canberra, kl_divergence.
Similarities (larger is better): cosine, intersection.

Zero handling: terms with a 0/0 denominator contribute 0 (clark, canberra);
for the KL divergence the prediction is clamped below at ``KL_EPS`` and
renormalized before taking logs, and true-zero entries contribute 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch

KL_EPS = 1e-12

METRIC_NAMES = ("chebyshev", "clark", "canberra", "kl", "cosine", "intersection")

#: Direction of each metric: True if larger values are better.
HIGHER_IS_BETTER = {
    "chebyshev": False,
    "clark": False,
    "canberra": False,
    "kl": False,
    "cosine": True,
    "intersection": True,
}


def _pair(d, p) -> tuple[np.ndarray, np.ndarray]:
    d = np.asarray(d, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if d.shape != p.shape:
        raise DimensionMismatch(f"shape mismatch: {d.shape} vs {p.shape}")
    return d, p


def chebyshev(d, p) -> float:
    """max_j |d_j - p_j|"""
    d, p = _pair(d, p)
    return float(np.max(np.abs(d - p)))


def clark(d, p) -> float:
    """sqrt(sum_j (d_j - p_j)^2 / (d_j + p_j)^2), 0/0 terms counting as 0."""
    d, p = _pair(d, p)
    s = d + p
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(s > 0, ((d - p) / np.where(s > 0, s, 1.0)) ** 2, 0.0)
    return float(np.sqrt(terms.sum()))


def canberra(d, p) -> float:
    """sum_j |d_j - p_j| / (d_j + p_j), 0/0 terms counting as 0."""
    d, p = _pair(d, p)
    s = d + p
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(s > 0, np.abs(d - p) / np.where(s > 0, s, 1.0), 0.0)
    return float(terms.sum())


def kl_divergence(d, p) -> float:
    """sum_j d_j log(d_j / p_j) with the prediction eps-smoothed."""
    d, p = _pair(d, p)
    q = np.maximum(p, KL_EPS)
    q = q / q.sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(d > 0, d * np.log(np.where(d > 0, d, 1.0) / q), 0.0)
    return float(terms.sum())


def cosine(d, p) -> float:
    """(d . p) / (||d|| ||p||)"""
    d, p = _pair(d, p)
    return float(d @ p / (np.linalg.norm(d) * np.linalg.norm(p)))


def intersection(d, p) -> float:
    """sum_j min(d_j, p_j)"""
    d, p = _pair(d, p)
    return float(np.minimum(d, p).sum())


@dataclass(frozen=True)
class EvalReport:
    """Mean scores over a prediction set, one per metric, plus dispersion.

    ``per_instance`` optionally keeps the raw (n, 6) score matrix in
    ``METRIC_NAMES`` column order.
    """

    chebyshev: float
    clark: float
    canberra: float
    kl: float
    cosine: float
    intersection: float
    chebyshev_std: float
    clark_std: float
    canberra_std: float
    kl_std: float
    cosine_std: float
    intersection_std: float
    n_evaluated: int
    per_instance: Optional[np.ndarray] = None

    def mean(self, metric: str) -> float:
        return float(getattr(self, metric))

    def std(self, metric: str) -> float:
        return float(getattr(self, f"{metric}_std"))


def _per_instance_scores(Dt: np.ndarray, Dp: np.ndarray) -> np.ndarray:
    """Vectorized per-column scores, shape (n, 6) in METRIC_NAMES order."""
    diff = Dt - Dp
    s = Dt + Dp
    cheb = np.abs(diff).max(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(s > 0, diff / np.where(s > 0, s, 1.0), 0.0)
        clrk = np.sqrt((ratio ** 2).sum(axis=0))
        canb = np.abs(ratio).sum(axis=0)
    q = np.maximum(Dp, KL_EPS)
    q = q / q.sum(axis=0, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        kl_terms = np.where(Dt > 0, Dt * np.log(np.where(Dt > 0, Dt, 1.0) / q), 0.0)
    kld = kl_terms.sum(axis=0)
    cos = (Dt * Dp).sum(axis=0) / (
        np.linalg.norm(Dt, axis=0) * np.linalg.norm(Dp, axis=0)
    )
    inter = np.minimum(Dt, Dp).sum(axis=0)
    return np.column_stack([cheb, clrk, canb, kld, cos, inter])


def evaluate(D_true, D_pred, keep_per_instance: bool = False) -> EvalReport:
    """Score a prediction matrix against the ground truth, instance by instance,
    and average arithmetically over instances (columns)."""
    Dt = np.asarray(D_true.data if hasattr(D_true, "data") else D_true, dtype=np.float64)
    Dp = np.asarray(D_pred.data if hasattr(D_pred, "data") else D_pred, dtype=np.float64)
    if Dt.shape != Dp.shape:
        raise DimensionMismatch(f"shape mismatch: {Dt.shape} vs {Dp.shape}")
    scores = _per_instance_scores(Dt, Dp)
    means = scores.mean(axis=0)
    stds = scores.std(axis=0)
    return EvalReport(
        *(float(v) for v in means),
        *(float(v) for v in stds),
        n_evaluated=Dt.shape[1],
        per_instance=scores if keep_per_instance else None,
    )
