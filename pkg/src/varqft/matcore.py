"""Dense complex linear algebra on 2x2 and 4x4 operators.

All helpers accept numpy arrays. Functions that only make sense for a single
matrix (``kron``) validate shapes strictly; the norm and square-root helpers
also broadcast over leading stack dimensions so that a batch of density
matrices can be processed in one call.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_ATOL = 1e-10
EIGEN_CLAMP = 1e-10
PROJECTOR_ATOL = 1e-12

_ALLOWED_DIMS = (2, 4)


class LinAlgError(ValueError):
    """Raised when a matrix violates the preconditions of an operation."""


def as_cmatrix(m, dim: int | None = None) -> np.ndarray:
    """Return ``m`` as a complex128 square matrix of dimension 2 or 4."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in _ALLOWED_DIMS:
        raise LinAlgError(f"expected a 2x2 or 4x4 matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise LinAlgError(f"expected a {dim}x{dim} matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise LinAlgError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit operators.

    Qubit 0 is the most significant bit, so ``kron(a, b)`` acts with ``a`` on
    qubit 0 and ``b`` on qubit 1.
    """
    a = as_cmatrix(a, 2)
    b = as_cmatrix(b, 2)
    return np.kron(a, b)


def frobenius_norm(m) -> np.ndarray | float:
    """sqrt(tr(M^dagger M)); broadcasts over leading axes."""
    m = np.asarray(m)
    out = np.sqrt(np.sum(np.abs(m) ** 2, axis=(-2, -1)))
    return float(out) if out.ndim == 0 else out


def is_hermitian(m, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= atol)


def trace_norm(m) -> np.ndarray | float:
    """Sum of singular values, tr(sqrt(M^dagger M))."""
    m = np.asarray(m, dtype=np.complex128)
    out = np.sum(np.linalg.svd(m, compute_uv=False), axis=-1)
    return float(out) if out.ndim == 0 else out


def hermitian_sqrt(m) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-1e-10, 0)`` are treated as round-off and clamped to 0.
    Projectors (M @ M == M within 1e-12) are returned unchanged: they are
    their own square root, and rooting round-off eigenvalues near 1e-17 would
    otherwise leave spurious components of order 1e-8.

    Raises
    ------
    LinAlgError
        If the input is not Hermitian within 1e-10 or has an eigenvalue below
        -1e-10.
    """
    m = np.asarray(m, dtype=np.complex128)
    if not is_hermitian(m):
        raise LinAlgError("hermitian_sqrt: input is not Hermitian")
    # symmetrise to strip the anti-Hermitian round-off before eigh
    herm = 0.5 * (m + dagger(m))
    w, v = np.linalg.eigh(herm)
    if np.min(w) < -EIGEN_CLAMP:
        raise LinAlgError(f"hermitian_sqrt: eigenvalue {np.min(w):.3e} below -{EIGEN_CLAMP}")
    root = np.sqrt(np.clip(w, 0.0, None))
    out = (v * root[..., None, :]) @ dagger(v)
    proj = np.max(np.abs(herm @ herm - herm), axis=(-2, -1)) < PROJECTOR_ATOL
    return np.where(proj[..., None, None], herm, out)
