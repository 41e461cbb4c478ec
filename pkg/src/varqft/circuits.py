"""Circuit construction and execution for the ideal QFT and the variational ansatz.

A circuit is an ordered list of :class:`GateEvent`. Execution either
multiplies state vectors (noiseless) or evolves density matrices with noise
channels inserted after every gate according to a :class:`NoiseScenario`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from functools import lru_cache

import numpy as np

from . import gates
from .channels import (
    ThermalParams,
    apply_kraus,
    crosstalk_unitary,
    depolarize,
    thermal_kraus,
    thermal_probs,
)
from .matcore import dagger
from .states import check_density

N_PARAMS = 12

# The U3 chain of the ansatz sits on this wire; the CNOTs are controlled by the other one.
ANSATZ_TARGET = 0

NOISELESS = "noiseless"
DEPOLARIZING = "depolarizing"
THERMAL = "depolarizing+thermal"
CROSSTALK = "depolarizing+crosstalk"
ALL_NOISE = "depolarizing+crosstalk+thermal"
SCENARIO_KINDS = (NOISELESS, DEPOLARIZING, THERMAL, CROSSTALK, ALL_NOISE)


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class GateEvent:
    """One gate in a circuit.

    ``unitary`` is the 4x4 operator on both qubits; ``wires`` records which
    qubits the gate physically touches and so decides where noise goes.
    """

    name: str
    unitary: np.ndarray
    wires: tuple[int, ...]

    def __post_init__(self):
        if len(self.wires) not in (1, 2) or self.unitary.shape[-2:] != (4, 4):
            raise CircuitError(f"{self.name}: bad wires {self.wires} or shape {self.unitary.shape}")

    @property
    def gate_class(self) -> str:
        return "single-qubit" if len(self.wires) == 1 else "two-qubit"


def single(name: str, m: np.ndarray, wire: int) -> GateEvent:
    return GateEvent(name, gates.embed(m, wire), (wire,))


def double(name: str, m: np.ndarray) -> GateEvent:
    return GateEvent(name, np.asarray(m, dtype=np.complex128), (0, 1))


def as_params(p) -> np.ndarray:
    """Validate ansatz angles: shape ``(12,)`` or a batch ``(m, 12)``."""
    a = np.asarray(p, dtype=float)
    if a.ndim not in (1, 2) or a.shape[-1] != N_PARAMS:
        raise CircuitError(f"ansatz takes {N_PARAMS} angles, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise CircuitError("ansatz angles must be finite")
    return a


def ideal_qft_circuit() -> list[GateEvent]:
    """H on qubit 0, CPhase(pi/2), H on qubit 1, SWAP."""
    return [
        single("H", gates.H, 0),
        double("CPhase", gates.cphase(np.pi / 2)),
        single("H", gates.H, 1),
        double("SWAP", gates.SWAP),
    ]


def ansatz_circuit(p, target: int = ANSATZ_TARGET) -> list[GateEvent]:
    """The 12-angle variational circuit.

    U3(p[0:3]) on ``target``, CNOT, U3(p[3:6]) on ``target``, CNOT,
    U3(p[6:9]) on ``target``, U3(p[9:12]) on the control wire, SWAP. Both CNOTs
    are controlled by the non-target wire.

    A batch of angle vectors ``(m, 12)`` yields events whose unitaries have
    shape ``(m, 4, 4)``.
    """
    p = as_params(p)
    control = 1 - target
    cx = gates.cnot(control, target)
    return [
        single("U3", gates.u3(p[..., 0], p[..., 1], p[..., 2]), target),
        double("CNOT", cx),
        single("U3", gates.u3(p[..., 3], p[..., 4], p[..., 5]), target),
        double("CNOT", cx),
        single("U3", gates.u3(p[..., 6], p[..., 7], p[..., 8]), target),
        single("U3", gates.u3(p[..., 9], p[..., 10], p[..., 11]), control),
        double("SWAP", gates.SWAP),
    ]


def circuit_unitary(circuit) -> np.ndarray:
    u = np.eye(4, dtype=np.complex128)
    for ev in circuit:
        u = ev.unitary @ u
    return u


def run_noiseless(circuit, psi) -> np.ndarray:
    """Apply the circuit to a state vector or a stack of them (shape ``(n, 4)``)."""
    return np.asarray(psi, dtype=np.complex128) @ circuit_unitary(circuit).T


@dataclass(frozen=True)
class NoiseScenario:
    """Which channels follow which gate class.

    ``eps_1q`` holds one depolarizing probability per wire. The thermal blocks
    hold per-wire relaxation parameters evaluated at the single- and two-qubit
    gate durations. Crosstalk needs both ``zeta_hz`` and ``crosstalk_time_s``.
    """

    kind: str = NOISELESS
    eps_1q: tuple[float, float] = (0.0, 0.0)
    eps_2q: float = 0.0
    thermal_1q: tuple[ThermalParams, ThermalParams] | None = None
    thermal_2q: tuple[ThermalParams, ThermalParams] | None = None
    zeta_hz: float | None = None
    crosstalk_time_s: float | None = None

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise CircuitError(f"unknown scenario kind {self.kind!r}; expected one of {SCENARIO_KINDS}")
        eps1 = self.eps_1q
        if np.ndim(eps1) == 0:
            eps1 = (eps1, eps1)
        eps1 = tuple(float(e) for e in eps1)
        object.__setattr__(self, "eps_1q", eps1)
        object.__setattr__(self, "eps_2q", float(self.eps_2q))
        for e in eps1 + (self.eps_2q,):
            if not 0.0 <= e <= 1.0:
                raise CircuitError(f"depolarizing probability {e} outside [0, 1]")
        wants_thermal = "thermal" in self.kind
        has_thermal = self.thermal_1q is not None and self.thermal_2q is not None
        if wants_thermal != has_thermal:
            raise CircuitError(f"{self.kind}: thermal parameters {'missing' if wants_thermal else 'not allowed'}")
        if has_thermal:
            object.__setattr__(self, "thermal_1q", tuple(self.thermal_1q))
            object.__setattr__(self, "thermal_2q", tuple(self.thermal_2q))
        wants_xt = "crosstalk" in self.kind
        has_xt = self.zeta_hz is not None and self.crosstalk_time_s is not None
        if wants_xt != has_xt:
            raise CircuitError(f"{self.kind}: crosstalk parameters {'missing' if wants_xt else 'not allowed'}")

    @property
    def is_noiseless(self) -> bool:
        return self.kind == NOISELESS

    @property
    def has_crosstalk(self) -> bool:
        return "crosstalk" in self.kind

    def with_depolarizing(self, eps_1q, eps_2q: float) -> "NoiseScenario":
        return replace(self, eps_1q=eps_1q, eps_2q=eps_2q)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["eps_1q"] = list(self.eps_1q)
        for key in ("thermal_1q", "thermal_2q"):
            if d[key] is not None:
                d[key] = [dict(t) for t in d[key]]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseScenario":
        d = dict(d)
        for key in ("thermal_1q", "thermal_2q"):
            if d.get(key) is not None:
                d[key] = tuple(ThermalParams(**t) for t in d[key])
        if "eps_1q" in d and np.ndim(d["eps_1q"]) > 0:
            d["eps_1q"] = tuple(d["eps_1q"])
        return cls(**d)


NOISELESS_SCENARIO = NoiseScenario()


@dataclass(frozen=True)
class _NoisePlan:
    thermal_1q: tuple | None
    thermal_2q: tuple | None
    crosstalk: np.ndarray | None


def _embedded_thermal(params: ThermalParams, wire: int) -> np.ndarray:
    ch = thermal_kraus(thermal_probs(params))
    return ch.embedded((wire,))


@lru_cache(maxsize=128)
def _plan(scenario: NoiseScenario) -> _NoisePlan:
    th1 = th2 = xt = None
    if scenario.thermal_1q is not None:
        th1 = tuple(_embedded_thermal(scenario.thermal_1q[w], w) for w in (0, 1))
        th2 = tuple(_embedded_thermal(scenario.thermal_2q[w], w) for w in (0, 1))
    if scenario.has_crosstalk:
        xt = crosstalk_unitary(scenario.zeta_hz, scenario.crosstalk_time_s)
    return _NoisePlan(th1, th2, xt)


def _lift(u: np.ndarray, rho: np.ndarray, batched: bool) -> np.ndarray:
    # (m, 4, 4) unitaries act on every state of an (n, 4, 4) stack
    if batched and u.ndim == 3 and rho.ndim >= 3:
        return u[:, None]
    return u


def run_noisy(circuit, rho, scenario: NoiseScenario = NOISELESS_SCENARIO, validate: bool = True) -> np.ndarray:
    """Evolve density matrices through the circuit with noise after each gate.

    After a single-qubit gate on wire ``q``: depolarizing on ``q``, then
    thermal relaxation on ``q``. After a two-qubit gate: crosstalk, then
    two-qubit depolarizing, then thermal relaxation on wire 0 and wire 1.
    Channels absent from the scenario are skipped.

    ``rho`` may be a stack of shape ``(n, 4, 4)``. A batched circuit (from a
    ``(m, 12)`` ansatz) maps it to ``(m, n, 4, 4)``. With ``validate`` the
    output is checked for Hermiticity, unit trace and positivity.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    batched = any(ev.unitary.ndim == 3 for ev in circuit)
    if scenario.is_noiseless:
        u = _lift(circuit_unitary(circuit), rho, batched)
        out = u @ rho @ dagger(u)
        return check_density(out) if validate else out
    plan = _plan(scenario)
    for ev in circuit:
        u = _lift(ev.unitary, rho, batched)
        rho = u @ rho @ dagger(u)
        if len(ev.wires) == 1:
            q = ev.wires[0]
            rho = depolarize(rho, scenario.eps_1q[q], (q,))
            if plan.thermal_1q is not None:
                rho = apply_kraus(rho, plan.thermal_1q[q])
        else:
            if plan.crosstalk is not None:
                rho = plan.crosstalk @ rho @ dagger(plan.crosstalk)
            rho = depolarize(rho, scenario.eps_2q, (0, 1))
            if plan.thermal_2q is not None:
                rho = apply_kraus(rho, plan.thermal_2q[0])
                rho = apply_kraus(rho, plan.thermal_2q[1])
    return check_density(rho) if validate else rho
