"""Internal PCA helper shared by the image latent model and the point cloud."""

from __future__ import annotations

import numpy as np


def sign_normalize(components: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude entry is positive.

    np.argmax returns the lowest index on ties, which is exactly the tie
    rule we want; the convention makes the decomposition deterministic.
    """
    out = components.copy()
    for row in out:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return out


def principal_components(
    rows: np.ndarray, q: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mean and top-q sign-normalized principal axes of ``rows`` (float64).

    SVD runs on the mean-centered data matrix itself (not the covariance)
    for numerical stability.  Returns (mean, components (q, d),
    singular_values (q,)), singular values non-increasing.
    """
    rows = np.asarray(rows, dtype=np.float64)
    mean = rows.mean(axis=0)
    _, s, vt = np.linalg.svd(rows - mean, full_matrices=False)
    return mean, sign_normalize(vt[:q]), s[:q]
