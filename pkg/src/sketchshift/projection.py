"""2-D principal-component projection for cluster inspection plots."""
from __future__ import annotations

import numpy as np

from .errors import DimensionError


def pca_2d(X) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Project rows of ``X`` onto their top two principal components.

    Components come from an eigendecomposition of the covariance matrix
    (computed in the dual when the feature count is much larger than
    the sample count). Sign convention: each component's largest-
    magnitude loading is made positive, so the projection is fully
    deterministic.

    Returns (scores (n, 2), components (2, d), eigenvalues (2,)).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or len(X) < 2:
        raise DimensionError("pca_2d needs a 2-D array with at least 2 rows")
    n, d = X.shape
    center = X.mean(axis=0)
    Xc = X - center

    if d <= max(n, 512):
        cov = (Xc.T @ Xc) / (n - 1)
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals)[::-1][:2]
        vals = eigvals[order]
        comps = eigvecs[:, order].T
    else:
        # dual trick: eigvectors of the Gram matrix map to components
        gram = (Xc @ Xc.T) / (n - 1)
        eigvals, eigvecs = np.linalg.eigh(gram)
        order = np.argsort(eigvals)[::-1][:2]
        vals = eigvals[order]
        comps = np.zeros((2, d))
        for i, (lam, u) in enumerate(zip(vals, eigvecs[:, order].T)):
            if lam > 0:
                comps[i] = (Xc.T @ u) / np.sqrt(lam * (n - 1))

    vals = np.clip(vals, 0.0, None)
    for i in range(2):
        j = int(np.argmax(np.abs(comps[i])))
        if comps[i, j] < 0:
            comps[i] = -comps[i]
    scores = Xc @ comps.T
    return scores, comps, vals
