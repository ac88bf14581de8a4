"""Gaussian kernel, Gram matrices and dominant-eigenvalue estimation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import ContractError, NumericalError


@dataclass(frozen=True)
class KernelParams:
    """Gaussian kernel exp(-h * ||u - v||**2); ``h`` is the kernel size."""

    h: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0):
            raise ContractError(f"kernel size h must be positive and finite, got {self.h}")


def _as_vector(x, name):
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ContractError(f"{name} must be a vector")
    if not np.all(np.isfinite(v)):
        raise ContractError(f"{name} has non-finite entries")
    return v


def gaussian_kernel(u, v, params: KernelParams) -> float:
    u = _as_vector(u, "u")
    v = _as_vector(v, "v")
    if u.shape != v.shape:
        raise ContractError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    diff = u - v
    return math.exp(-params.h * float(diff @ diff))


def kernel_row(centers: np.ndarray, u: np.ndarray, h: float) -> np.ndarray:
    """Kernel values between each row of ``centers`` and ``u`` (no validation)."""
    diff = centers - u
    return np.exp(-h * np.einsum("ij,ij->i", diff, diff))


class GramMatrix(np.ndarray):
    """Symmetric, unit-diagonal kernel matrix (an ndarray subclass)."""

    @property
    def n(self) -> int:
        return self.shape[0]


def gram_matrix(X, params: KernelParams) -> GramMatrix:
    """Kernel matrix of the rows of ``X``.

    Each pair is evaluated once and mirrored, so the result is exactly
    symmetric with an exact unit diagonal.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] == 0:
        raise ContractError("gram_matrix needs a nonempty list of equal-length vectors")
    if not np.all(np.isfinite(X)):
        raise ContractError("gram_matrix input has non-finite entries")
    if X.shape[0] == 1:
        return np.ones((1, 1)).view(GramMatrix)
    G = squareform(np.exp(-params.h * pdist(X, "sqeuclidean")))
    np.fill_diagonal(G, 1.0)
    return G.view(GramMatrix)


def lambda_max(G, rtol: float = 1e-9, max_iter: int = 10_000) -> float:
    """Largest eigenvalue of G / n by power iteration.

    Starts from the normalized all-ones vector and stops once the Rayleigh
    quotient changes by less than ``rtol`` relative to its value.
    """
    A = np.asarray(G, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ContractError("lambda_max needs a nonempty square matrix")
    n = A.shape[0]
    A = A / n
    v = np.full(n, 1.0 / math.sqrt(n))
    estimate = float(v @ A @ v)
    for _ in range(max_iter):
        w = A @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        new = float(v @ A @ v)
        if abs(new - estimate) <= rtol * abs(new):
            return new
        estimate = new
    raise NumericalError(
        f"power iteration did not converge in {max_iter} iterations", v
    )
