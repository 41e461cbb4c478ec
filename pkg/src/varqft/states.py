"""Pure states, density matrices and the fixed input ensembles."""

from __future__ import annotations

import numpy as np

from .gates import u3
from .matcore import EIGEN_CLAMP, HERMITIAN_ATOL, dagger

NORM_ATOL = 1e-10
DIM = 4


class StateError(ValueError):
    pass


def as_pure_state(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=np.complex128)
    if v.shape != (DIM,):
        raise StateError(f"expected 4 amplitudes, got shape {v.shape}")
    if abs(np.vdot(v, v).real - 1.0) > NORM_ATOL:
        raise StateError(f"state is not normalised (norm^2={np.vdot(v, v).real!r})")
    return v


def check_density(rho, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate a density matrix (or a stack of them) and return it.

    Checks Hermiticity and unit trace within ``atol`` and that no eigenvalue
    lies below ``-1e-10``.
    """
    r = np.asarray(rho, dtype=np.complex128)
    if r.shape[-2:] != (DIM, DIM):
        raise StateError(f"expected 4x4 density matrices, got shape {r.shape}")
    if np.max(np.abs(r - dagger(r))) > atol:
        raise StateError("density matrix is not Hermitian")
    tr = np.trace(r, axis1=-2, axis2=-1)
    if np.max(np.abs(tr - 1.0)) > atol:
        raise StateError(f"density matrix trace deviates from 1 by {np.max(np.abs(tr - 1.0)):.3e}")
    w = np.linalg.eigvalsh(0.5 * (r + dagger(r)))
    if np.min(w) < -EIGEN_CLAMP:
        raise StateError(f"density matrix has eigenvalue {np.min(w):.3e}")
    return r


def computational_basis(i: int) -> np.ndarray:
    if not 0 <= i < DIM:
        raise StateError(f"basis index {i} out of range 0..3")
    e = np.zeros(DIM, dtype=np.complex128)
    e[i] = 1.0
    return e


_MUB_ROWS = (
    [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
    [(1, 1, 1, 1), (1, 1, -1, -1), (1, -1, -1, 1), (1, -1, 1, -1)],
    [(1, -1, -1j, -1j), (1, -1, 1j, 1j), (1, 1, 1j, -1j), (1, 1, -1j, 1j)],
    [(1, -1j, -1j, -1), (1, -1j, 1j, 1), (1, 1j, 1j, -1), (1, 1j, -1j, 1)],
    [(1, -1j, -1, -1j), (1, -1j, 1, 1j), (1, 1j, -1, 1j), (1, 1j, 1, -1j)],
)


def mub_states() -> np.ndarray:
    """The five mutually unbiased bases of C^4, shape ``(5, 4, 4)``.

    ``mub_states()[x, a]`` is element ``a`` of basis ``x``. Bases 1..4 carry
    the global factor 1/2.
    """
    bases = np.array(_MUB_ROWS, dtype=np.complex128)
    bases[1:] *= 0.5
    return bases


def mub_list() -> np.ndarray:
    """All 20 MUB vectors flattened in (basis, element) order, shape ``(20, 4)``."""
    return mub_states().reshape(-1, DIM)


def superposition_from_angles(angles) -> np.ndarray:
    """(U3(a0, a1, a2) x U3(a3, a4, a5)) |00>."""
    a = np.asarray(angles, dtype=float)
    if a.shape != (6,):
        raise StateError(f"expected 6 angles, got shape {a.shape}")
    q0 = u3(*a[:3])[:, 0]
    q1 = u3(*a[3:])[:, 0]
    return np.kron(q0, q1)


def state_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, index)``.

    Draw ``index`` does not depend on how many other states were drawn or in
    which order.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def random_superposition(seed: int, index: int = 0) -> np.ndarray:
    """Random product input state with all six U3 angles uniform on [0, 2pi)."""
    angles = state_rng(seed, index).uniform(0.0, 2 * np.pi, size=6)
    return superposition_from_angles(angles)


def random_superpositions(n: int, seed: int) -> np.ndarray:
    if n < 1:
        raise StateError(f"need at least one state, got n={n}")
    return np.array([random_superposition(seed, i) for i in range(n)])


def to_density(psi) -> np.ndarray:
    """|psi><psi|; accepts a single state or a stack of shape ``(n, 4)``."""
    v = np.asarray(psi, dtype=np.complex128)
    return v[..., :, None] * np.conj(v[..., None, :])


def maximally_mixed() -> np.ndarray:
    return np.eye(DIM, dtype=np.complex128) / DIM


def purity(rho) -> np.ndarray | float:
    r = np.asarray(rho)
    out = np.real(np.einsum("...ij,...ji->...", r, r))
    return float(out) if np.ndim(out) == 0 else out


def trace_distance(rho, sigma) -> np.ndarray | float:
    """Half the trace norm of ``rho - sigma`` for Hermitian arguments."""
    d = np.asarray(rho) - np.asarray(sigma)
    w = np.linalg.eigvalsh(0.5 * (d + dagger(d)))
    out = 0.5 * np.sum(np.abs(w), axis=-1)
    return float(out) if np.ndim(out) == 0 else out
