"""Gate matrices for the 2-qubit simulator.

Conventions
-----------
* Big-endian ordering: qubit 0 is the top wire and the most significant bit
  of the 4-dimensional computational index.
* ``Rz(l) = diag(exp(-i l/2), exp(i l/2))`` and
  ``Ry(l) = [[cos(l/2), -sin(l/2)], [sin(l/2), cos(l/2)]]``.
* ``CNOT`` uses qubit 0 as control; :func:`cnot` builds the other orientation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import as_cmatrix, kron

UNITARY_ATOL = 1e-10

I2 = np.eye(2, dtype=np.complex128)
I4 = np.eye(4, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
SWAP = np.eye(4, dtype=np.complex128)[[0, 2, 1, 3]]
CNOT = np.eye(4, dtype=np.complex128)[[0, 1, 3, 2]]

for _m in (I2, I4, X, Y, Z, H, SWAP, CNOT):
    _m.flags.writeable = False


class GateError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    """A unitary matrix together with the wires it acts on.

    ``wires`` lists the target qubits in the order matching the matrix
    factors; a 2-qubit gate always acts on ``(0, 1)`` in this simulator.
    """

    matrix: np.ndarray
    wires: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        m = as_cmatrix(self.matrix)
        wires = tuple(int(w) for w in self.wires)
        if m.shape[0] != 2 ** len(wires):
            raise GateError(f"{self.name or 'gate'}: {m.shape} matrix on wires {wires}")
        if any(w not in (0, 1) for w in wires) or len(set(wires)) != len(wires):
            raise GateError(f"invalid wires {wires}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "wires", wires)

    @property
    def arity(self) -> int:
        return len(self.wires)

    def full_matrix(self) -> np.ndarray:
        """The gate as a 4x4 operator on both qubits."""
        if self.arity == 2:
            if self.wires == (0, 1):
                return self.matrix
            return SWAP @ self.matrix @ SWAP
        return embed(self.matrix, self.wires[0])


def is_unitary(m, atol: float = UNITARY_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=atol, rtol=0))


def rz(lam: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * lam), np.exp(0.5j * lam)])


def ry(lam: float) -> np.ndarray:
    c, s = np.cos(lam / 2), np.sin(lam / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def u3(theta, phi, lam) -> np.ndarray:
    """General single-qubit rotation U3(theta, phi, lambda).

    Broadcasts: array-valued angles give a stack of shape ``(..., 2, 2)``.
    """
    theta, phi, lam = np.broadcast_arrays(
        np.asarray(theta, dtype=float), np.asarray(phi, dtype=float), np.asarray(lam, dtype=float)
    )
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    out = np.empty(theta.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c
    out[..., 0, 1] = -np.exp(1j * lam) * s
    out[..., 1, 0] = np.exp(1j * phi) * s
    out[..., 1, 1] = np.exp(1j * (phi + lam)) * c
    return out


def general_u(alpha: float, beta: float, delta: float, theta: float) -> np.ndarray:
    """Single-qubit unitary exp(i delta) Rz(alpha) Ry(theta) Rz(beta), written out entrywise."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [np.exp(1j * (delta - alpha / 2 - beta / 2)) * c,
             -np.exp(1j * (delta - alpha / 2 + beta / 2)) * s],
            [np.exp(1j * (delta + alpha / 2 - beta / 2)) * s,
             np.exp(1j * (delta + alpha / 2 + beta / 2)) * c],
        ],
        dtype=np.complex128,
    )


def abc_factors(alpha: float, beta: float, theta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Factors A, B, C of the controlled-U construction.

    They satisfy ``A @ B @ C == I`` and ``A @ X @ B @ X @ C == Rz(alpha) Ry(theta) Rz(beta)``.
    """
    a = rz(alpha) @ ry(theta / 2)
    b = ry(-theta / 2) @ rz(-(alpha + beta) / 2)
    c = rz((beta - alpha) / 2)
    return a, b, c


def phase(delta: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * delta)]).astype(np.complex128)


def controlled_u_from_abc(alpha: float, beta: float, delta: float, theta: float) -> np.ndarray:
    """Assemble controlled-``general_u`` (control qubit 0) from the A, B, C factors.

    Time order: C on the target, CNOT, B, CNOT, A, with ``diag(1, e^{i delta})``
    on the control.
    """
    a, b, c = abc_factors(alpha, beta, theta)
    return kron(phase(delta), a) @ CNOT @ kron(I2, b) @ CNOT @ kron(I2, c)


def cphase(phi: float) -> np.ndarray:
    return np.diag([1, 1, 1, np.exp(1j * phi)]).astype(np.complex128)


def cnot(control: int = 0, target: int = 1) -> np.ndarray:
    if {control, target} != {0, 1}:
        raise GateError(f"invalid CNOT wires control={control} target={target}")
    return CNOT.copy() if control == 0 else SWAP @ CNOT @ SWAP


def fixed_gates() -> dict[str, object]:
    """The named constant gates plus the rotation constructors."""
    return {
        "H": H,
        "X": X,
        "Z": Z,
        "CNOT": CNOT,
        "SWAP": SWAP,
        "Rz": rz,
        "Ry": ry,
    }


def embed(gate, qubit: int) -> np.ndarray:
    """Lift a single-qubit operator (or a stack of them) onto the 2-qubit space."""
    g = np.asarray(gate, dtype=np.complex128)
    if g.shape[-2:] != (2, 2):
        raise GateError(f"embed expects a single-qubit operator, got shape {g.shape}")
    if g.ndim == 2:
        if qubit == 0:
            return kron(g, I2)
        if qubit == 1:
            return kron(I2, g)
    elif qubit == 0:
        return np.einsum("...ij,kl->...ikjl", g, I2).reshape(g.shape[:-2] + (4, 4))
    elif qubit == 1:
        return np.einsum("ij,...kl->...ikjl", I2, g).reshape(g.shape[:-2] + (4, 4))
    raise GateError(f"qubit must be 0 or 1, got {qubit}")
