"""Principal component analysis via covariance eigendecomposition."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PcaResult:
    projection: np.ndarray  # (M, k)
    components: np.ndarray  # (k, d), orthonormal rows
    explained_variance: np.ndarray  # (k,), non-increasing
    mean: np.ndarray  # (d,) column means removed before projection


def pca_fit_transform(data, k: int) -> PcaResult:
    """Project rows of an (M, d) matrix onto the top-k principal directions.

    Component signs are fixed so each component's largest-magnitude loading
    is positive, which makes the orientation deterministic.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise ValueError("data must be a 2-d matrix")
    m, d = data.shape
    if m < 2:
        raise ValueError(f"need at least 2 rows, got {m}")
    if not 1 <= k <= min(m, d):
        raise ValueError(f"k={k} out of range [1, {min(m, d)}]")

    mean = data.mean(axis=0)
    centered = data - mean
    if np.allclose(centered, 0.0, atol=1e-15):
        warnings.warn("all rows identical; PCA projection is degenerate (all zeros)")
        components = np.zeros((k, d))
        components[np.arange(k), np.arange(k)] = 1.0
        return PcaResult(
            projection=np.zeros((m, k)),
            components=components,
            explained_variance=np.zeros(k),
            mean=mean,
        )

    cov = centered.T @ centered / (m - 1)
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    # eigh returns ascending order; take the top k, largest first.
    order = np.argsort(eigenvalues)[::-1][:k]
    variance = np.clip(eigenvalues[order], 0.0, None)
    components = eigenvectors[:, order].T
    for i in range(k):
        j = int(np.argmax(np.abs(components[i])))
        if components[i, j] < 0:
            components[i] = -components[i]
    projection = centered @ components.T
    return PcaResult(
        projection=projection,
        components=components,
        explained_variance=variance,
        mean=mean,
    )
