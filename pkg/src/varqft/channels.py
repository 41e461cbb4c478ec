"""Noise channels acting on 2-qubit density matrices.

Channels are stored as Kraus lists. Single-qubit channels are lifted onto the
2-qubit space with :func:`varqft.gates.embed`. Every function that takes a
density matrix also accepts a stack of shape ``(..., 4, 4)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gates import I2, X, Y, Z, embed
from .matcore import dagger

PLANCK = 6.62607015e-34  # J s, exact
BOLTZMANN = 1.380649e-23  # J/K, exact

COMPLETENESS_ATOL = 1e-10
TRACE_ATOL = 1e-8


class ChannelError(ValueError):
    pass


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by Kraus operators of a common dimension (2 or 4)."""

    kraus_ops: tuple
    name: str = ""

    def __post_init__(self):
        ops = np.array([np.asarray(k, dtype=np.complex128) for k in self.kraus_ops])
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2] or ops.shape[1] not in (2, 4):
            raise ChannelError(f"bad Kraus operator shapes {ops.shape}")
        gram = np.sum(dagger(ops) @ ops, axis=0)
        err = np.max(np.abs(gram - np.eye(ops.shape[1])))
        if err > COMPLETENESS_ATOL:
            raise ChannelError(f"{self.name or 'channel'}: completeness violated by {err:.3e}")
        ops.flags.writeable = False
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def arity(self) -> int:
        return 1 if self.kraus_ops.shape[1] == 2 else 2

    def embedded(self, wires) -> np.ndarray:
        """Kraus operators lifted to 4x4 for the given wires, shape ``(m, 4, 4)``."""
        wires = tuple(wires)
        if len(wires) != self.arity:
            raise ChannelError(f"{self.arity}-qubit channel applied to wires {wires}")
        if self.arity == 2:
            return self.kraus_ops
        return np.array([embed(k, wires[0]) for k in self.kraus_ops])


def apply_kraus(rho: np.ndarray, ops: np.ndarray) -> np.ndarray:
    """sum_k K rho K^dagger for 4x4 operators ``ops`` of shape ``(m, 4, 4)``; no validation."""
    out = ops[0] @ rho @ dagger(ops[0])
    for k in ops[1:]:
        out = out + k @ rho @ dagger(k)
    return out


def apply_unitary(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    return u @ rho @ dagger(u)


def apply_channel(rho, ch: KrausChannel, wires) -> np.ndarray:
    """Apply ``ch`` to ``rho`` on ``wires`` and check that the trace survives."""
    rho = np.asarray(rho, dtype=np.complex128)
    out = apply_kraus(rho, ch.embedded(wires))
    drift = np.max(np.abs(np.trace(out, axis1=-2, axis2=-1) - np.trace(rho, axis1=-2, axis2=-1)))
    if drift > TRACE_ATOL:
        raise ChannelError(f"{ch.name or 'channel'} changed the trace by {drift:.3e}")
    return out


def _check_probability(eps: float, what: str = "epsilon") -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ChannelError(f"{what} must lie in [0, 1], got {eps}")
    return eps


def partial_trace(rho: np.ndarray, keep: int) -> np.ndarray:
    """Reduced single-qubit state of ``keep`` (0 or 1)."""
    r = np.asarray(rho).reshape(rho.shape[:-2] + (2, 2, 2, 2))
    if keep == 0:
        return np.einsum("...ijkj->...ik", r)
    return np.einsum("...ijil->...jl", r)


def depolarize(rho, epsilon: float, wires=(0, 1)) -> np.ndarray:
    """Depolarizing noise ``(1 - eps) rho + eps I/2^n`` on one wire or on both.

    On a single wire the affected qubit is replaced by I/2 with probability
    ``eps`` while the other qubit keeps its reduced state.
    """
    eps = _check_probability(epsilon)
    rho = np.asarray(rho, dtype=np.complex128)
    wires = tuple(wires)
    if len(wires) == 2:
        return (1 - eps) * rho + eps * np.eye(4) / 4
    if len(wires) != 1 or wires[0] not in (0, 1):
        raise ChannelError(f"invalid wires {wires}")
    q = wires[0]
    other = partial_trace(rho, 1 - q)
    mixed = np.kron(I2 / 2, other) if q == 0 else np.kron(other, I2 / 2)
    return (1 - eps) * rho + eps * mixed


def depolarizing_kraus(epsilon: float, n_qubits: int = 1) -> KrausChannel:
    """Pauli-sum Kraus form of the depolarizing map; equal to :func:`depolarize`."""
    eps = _check_probability(epsilon)
    paulis = [I2, X, Y, Z]
    if n_qubits == 1:
        basis = paulis
    elif n_qubits == 2:
        basis = [np.kron(a, b) for a in paulis for b in paulis]
    else:
        raise ChannelError("only 1- or 2-qubit depolarizing is supported")
    d2 = len(basis)
    weights = [1 - eps + eps / d2] + [eps / d2] * (d2 - 1)
    return KrausChannel(tuple(math.sqrt(w) * p for w, p in zip(weights, basis)), name="depolarizing")


def excited_population(freq_hz: float, temp_mk: float) -> float:
    """Thermal excited-state population of a two-level system at ``temp_mk`` millikelvin."""
    if freq_hz <= 0 or temp_mk <= 0:
        raise ChannelError("frequency and temperature must be positive")
    x = PLANCK * freq_hz / (BOLTZMANN * temp_mk * 1e-3)
    # 1/(1+e^x) without overflow for very cold or very high-frequency qubits
    return float(math.exp(-x) / (1 + math.exp(-x))) if x > 0 else 1 / (1 + math.exp(x))


@dataclass(frozen=True)
class ThermalParams:
    """Relaxation parameters of one qubit for one gate duration (SI units)."""

    t1: float
    t2: float
    gate_time: float
    p_excited: float

    def __post_init__(self):
        if not self.t1 > 0:
            raise ChannelError(f"T1 must be positive, got {self.t1}")
        if not 0 < self.t2 <= 2 * self.t1:
            raise ChannelError(f"T2 must satisfy 0 < T2 <= 2 T1, got T1={self.t1}, T2={self.t2}")
        if self.gate_time < 0:
            raise ChannelError(f"gate time must be non-negative, got {self.gate_time}")
        _check_probability(self.p_excited, "p_excited")


@dataclass(frozen=True)
class ThermalProbs:
    e_t1: float
    e_t2: float
    p_reset: float
    p_z: float
    p_r0: float
    p_r1: float
    p_id: float


def thermal_probs(p: ThermalParams) -> ThermalProbs:
    """Branch probabilities of thermal relaxation over one gate.

    ``p_z`` comes out negative when ``T1 < T2 <= 2 T1``; the channel is still
    physical in that regime and :func:`thermal_kraus` switches to a Choi
    decomposition for it.
    """
    e_t1 = math.exp(-p.gate_time / p.t1)
    e_t2 = math.exp(-p.gate_time / p.t2)
    p_reset = 1 - e_t1
    # (1 - p_reset)(1 - e_t2/e_t1)/2 with the quotient cancelled, so e_t1 may underflow
    p_z = (e_t1 - e_t2) / 2
    p_r0 = (1 - p.p_excited) * p_reset
    p_r1 = p.p_excited * p_reset
    p_id = 1 - p_z - p_r0 - p_r1
    for name, val in (("p_reset", p_reset), ("p_r0", p_r0), ("p_r1", p_r1), ("p_id", p_id)):
        if not -1e-15 <= val <= 1 + 1e-15:
            raise ChannelError(f"thermal {name}={val} outside [0, 1]; inconsistent T1/T2/gate time")
    return ThermalProbs(e_t1, e_t2, p_reset, p_z, p_r0, p_r1, p_id)


def thermal_kraus(tp: ThermalProbs) -> KrausChannel:
    """Single-qubit thermal relaxation channel.

    For ``p_z >= 0`` (T2 <= T1) these are the six operators
    sqrt(p_id) I, sqrt(p_z) Z, sqrt(p_r0)|0><0|, sqrt(p_r0)|0><1|,
    sqrt(p_r1)|1><0|, sqrt(p_r1)|1><1|. Otherwise the Kraus set is read off
    the eigendecomposition of the Choi matrix of the same map: populations
    relax toward (1 - p_e, p_e) and coherences decay by ``e_t2``.
    """
    if tp.p_z >= 0:
        ops = (
            math.sqrt(max(tp.p_id, 0.0)) * I2,
            math.sqrt(tp.p_z) * Z,
            math.sqrt(tp.p_r0) * np.array([[1, 0], [0, 0]]),
            math.sqrt(tp.p_r0) * np.array([[0, 1], [0, 0]]),
            math.sqrt(tp.p_r1) * np.array([[0, 0], [1, 0]]),
            math.sqrt(tp.p_r1) * np.array([[0, 0], [0, 1]]),
        )
        return KrausChannel(ops, name="thermal_relaxation")
    return thermal_kraus_choi(tp)


def thermal_kraus_choi(tp: ThermalProbs) -> KrausChannel:
    """Kraus operators of the thermal relaxation map from its Choi matrix.

    Valid for any ``T2 <= 2 T1``.
    """
    # Choi matrix J = sum_ij |i><j| (x) E(|i><j|), index (i, a) -> 2 i + a
    choi = np.array(
        [
            [1 - tp.p_r1, 0, 0, tp.e_t2],
            [0, tp.p_r1, 0, 0],
            [0, 0, tp.p_r0, 0],
            [tp.e_t2, 0, 0, 1 - tp.p_r0],
        ],
        dtype=np.complex128,
    )
    w, v = np.linalg.eigh(choi)
    if w.min() < -1e-12:
        raise ChannelError("thermal relaxation parameters give a non-CP map")
    ops = tuple(math.sqrt(max(lam, 0.0)) * v[:, k].reshape(2, 2).T for k, lam in enumerate(w) if lam > 1e-15)
    return KrausChannel(ops, name="thermal_relaxation")


def crosstalk_unitary(zeta_hz: float, duration_s: float) -> np.ndarray:
    """ZZ crosstalk: exp(-i 2 pi zeta T |11><11|)."""
    if duration_s < 0:
        raise ChannelError(f"duration must be non-negative, got {duration_s}")
    return np.diag([1, 1, 1, np.exp(-2j * np.pi * zeta_hz * duration_s)]).astype(np.complex128)
