"""Tiling Laplacian DCD^T, its inverse on Im(D), and the Gaussian law of tile counts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EIGEN_THRESHOLD = 1e-10


def build_laplacian(D, C) -> np.ndarray:
    """Delta = D diag(C) D^T.  ``C`` is the diagonal of the tile-weight matrix."""
    D = np.asarray(D, dtype=float)
    C = np.asarray(C, dtype=float)
    if C.ndim == 2:
        C = np.diag(C)
    if C.shape != (D.shape[1],):
        raise ValueError(f"weight diagonal has {C.shape} entries, D has {D.shape[1]} tiles")
    if np.any(C <= 0):
        raise ValueError("tile weights must be strictly positive")
    delta = (D * C) @ D.T
    return 0.5 * (delta + delta.T)


def pseudo_inverse_on_image(delta, eps: float = EIGEN_THRESHOLD) -> np.ndarray:
    """Invert a symmetric PSD matrix on the span of eigenvalues above eps*lambda_max."""
    delta = np.asarray(delta, dtype=float)
    vals, vecs = np.linalg.eigh(0.5 * (delta + delta.T))
    top = vals.max() if vals.size else 0.0
    keep = vals > eps * top
    return (vecs[:, keep] / vals[keep]) @ vecs[:, keep].T


@dataclass
class GaussianLaw:
    mean: np.ndarray
    covariance: np.ndarray
    N: float

    def check(self, D=None, tol: float = 1e-9) -> None:
        cov = self.covariance
        scale = max(1.0, float(self.N))
        assert np.allclose(cov, cov.T, atol=tol * scale, rtol=0), "covariance must be symmetric"
        floor = -tol * max(np.trace(cov), 1.0)
        assert np.linalg.eigvalsh(cov).min() >= floor, "covariance must be PSD"
        assert np.abs(cov.sum(axis=1)).max() <= tol * scale, "total tile count must be deterministic"
        if D is not None:
            assert np.abs(np.asarray(D, float) @ cov).max() <= tol * scale, \
                "vertex multiplicities must be deterministic"

    @property
    def scaled_covariance(self) -> np.ndarray:
        return self.covariance / self.N


def projection_onto_row_space(D, C) -> np.ndarray:
    """D^T Delta^+ D C."""
    D = np.asarray(D, dtype=float)
    C = np.asarray(C, dtype=float)
    return D.T @ pseudo_inverse_on_image(build_laplacian(D, C)) @ (D * C)


def gaussian_law(D, C, N) -> GaussianLaw:
    """Mean N*C and covariance N C (I - D^T Delta^+ D C)."""
    D = np.asarray(D, dtype=float)
    C = np.asarray(C, dtype=float)
    if C.ndim == 2:
        C = np.diag(C)
    T = D.shape[1]
    cov = N * (C[:, None] * (np.eye(T) - projection_onto_row_space(D, C)))
    cov = 0.5 * (cov + cov.T)
    law = GaussianLaw(N * C, cov, N)
    law.check(D)
    return law
