"""Cost functions and fidelities against the ideal QFT."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import (
    NOISELESS_SCENARIO,
    NoiseScenario,
    ansatz_circuit,
    circuit_unitary,
    ideal_qft_circuit,
    run_noisy,
)
from .matcore import hermitian_sqrt, trace_norm
from .states import mub_list, random_superpositions, to_density

FIDELITY_SLACK = 1e-9

QFT = circuit_unitary(ideal_qft_circuit())
QFT.flags.writeable = False

_MUB = mub_list()
_MUB_RHO = to_density(_MUB)
_MUB_TARGET = to_density(_MUB @ QFT.T)
for _a in (_MUB, _MUB_RHO, _MUB_TARGET):
    _a.flags.writeable = False


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class FidelityReport:
    """Aggregate of per-state fidelities.

    ``per_state`` keeps the raw values; ``mean`` and ``std_dev`` (population
    std) are taken over values clamped to [0, 1].
    """

    mean: float
    std_dev: float
    per_state: tuple = field(repr=False)

    @property
    def infidelity(self) -> float:
        return 1.0 - self.mean

    @classmethod
    def from_values(cls, values) -> "FidelityReport":
        raw = np.asarray(values, dtype=float)
        if raw.size == 0:
            raise MetricError("no fidelities to aggregate")
        if np.any(raw < -FIDELITY_SLACK) or np.any(raw > 1 + FIDELITY_SLACK):
            raise MetricError(f"fidelity outside [0, 1]: min={raw.min()}, max={raw.max()}")
        clamped = np.clip(raw, 0.0, 1.0)
        # fixed-order summation keeps the mean bit-stable
        mean = float(np.sum(clamped) / clamped.size)
        std = float(np.sqrt(np.sum((clamped - mean) ** 2) / clamped.size))
        return cls(mean, std, tuple(float(v) for v in raw))

    def to_dict(self, per_state: bool = True) -> dict:
        d = {"mean": self.mean, "std_dev": self.std_dev, "infidelity": self.infidelity}
        if per_state:
            d["per_state"] = list(self.per_state)
        return d


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def cost_noiseless(p):
    """Mean squared Euclidean distance between ansatz and QFT outputs on |0>..|3>.

    Phase sensitive: a global phase on the ansatz raises the cost. Accepts a
    batch of angle vectors and then returns one cost per row.
    """
    diff = circuit_unitary(ansatz_circuit(p)) - QFT
    # column i is U|i> - QFT|i>
    return _scalar(np.sum(np.abs(diff) ** 2, axis=(-2, -1)) / 4)


def fidelity_pure_avg(p) -> FidelityReport:
    """Basis-state fidelities |<i| U^dagger QFT |i>|^2 of the noiseless ansatz."""
    u = circuit_unitary(ansatz_circuit(p))
    overlaps = np.einsum("ki,ki->i", np.conj(u), QFT)
    return FidelityReport.from_values(np.abs(overlaps) ** 2)


def unitary_distance(p) -> float:
    """Frobenius distance between the ansatz unitary and the QFT matrix."""
    return float(np.linalg.norm(circuit_unitary(ansatz_circuit(p)) - QFT))


def cost_noisy(p, scenario: NoiseScenario):
    """Mean squared Frobenius distance between noisy ansatz outputs and ideal QFT outputs over the 20 MUB states.

    Accepts a batch of angle vectors like :func:`cost_noiseless`.
    """
    out = run_noisy(ansatz_circuit(p), _MUB_RHO, scenario, validate=False)
    return _scalar(np.sum(np.abs(out - _MUB_TARGET) ** 2, axis=(-3, -2, -1)) / len(_MUB_RHO))


def fidelity_mixed(rho, q) -> np.ndarray | float:
    """Uhlmann fidelity ||sqrt(rho) sqrt(q)||_tr^2; broadcasts over stacks."""
    return trace_norm(hermitian_sqrt(rho) @ hermitian_sqrt(q)) ** 2


def _report(circuit, states, scenario: NoiseScenario, reference) -> FidelityReport:
    reference = QFT if reference is None else np.asarray(reference)
    out = run_noisy(circuit, to_density(states), scenario)
    target = to_density(states @ reference.T)
    return FidelityReport.from_values(fidelity_mixed(out, target))


def fidelity_mub_avg(circuit, scenario: NoiseScenario = NOISELESS_SCENARIO, reference=None) -> FidelityReport:
    """Fidelity of ``circuit`` under ``scenario`` with the ideal reference over the 20 MUB inputs."""
    return _report(circuit, _MUB, scenario, reference)


def fidelity_random_avg(
    circuit,
    scenario: NoiseScenario = NOISELESS_SCENARIO,
    n_states: int = 1000,
    seed: int = 0,
    reference=None,
) -> FidelityReport:
    """Same as :func:`fidelity_mub_avg` over ``n_states`` random U3 x U3 product inputs."""
    if n_states < 1:
        raise MetricError(f"n_states must be >= 1, got {n_states}")
    return _report(circuit, random_superpositions(n_states, seed), scenario, reference)


def mub_outputs(circuit, scenario: NoiseScenario) -> np.ndarray:
    """Output density matrices for the 20 MUB inputs, shape ``(20, 4, 4)``."""
    return run_noisy(circuit, _MUB_RHO, scenario)
