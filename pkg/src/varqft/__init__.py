"""Variational replacement of the 2-qubit QFT under realistic noise.

Density-matrix simulation of a two-qubit register with depolarizing, thermal
relaxation and ZZ crosstalk noise, a 12-angle variational ansatz trained by
finite-difference gradient descent, and the experiment drivers comparing it
with the textbook QFT circuit.
"""

from .calibration import (
    CalibrationRecord,
    build_scenario,
    build_thermal_params,
    default_scenario_constants,
    format_calibration,
    load_calibration,
    parse_calibration,
)
from .channels import KrausChannel, ThermalParams, depolarize, excited_population, thermal_kraus, thermal_probs
from .circuits import (
    ALL_NOISE,
    CROSSTALK,
    DEPOLARIZING,
    NOISELESS,
    THERMAL,
    NoiseScenario,
    ansatz_circuit,
    circuit_unitary,
    ideal_qft_circuit,
    run_noiseless,
    run_noisy,
)
from .experiments import ExperimentConfig, ExperimentReport, histogram_export, run_experiment, sweep_epsilon
from .metrics import (
    QFT,
    FidelityReport,
    cost_noiseless,
    cost_noisy,
    fidelity_mixed,
    fidelity_mub_avg,
    fidelity_random_avg,
)
from .optimizer import OptimizerConfig, TrainingTrace, gradient_descent, numerical_gradient
from .states import mub_list, mub_states, random_superpositions

__version__ = "0.1.0"

__all__ = [
    "ALL_NOISE",
    "CROSSTALK",
    "DEPOLARIZING",
    "NOISELESS",
    "QFT",
    "THERMAL",
    "CalibrationRecord",
    "ExperimentConfig",
    "ExperimentReport",
    "FidelityReport",
    "KrausChannel",
    "NoiseScenario",
    "OptimizerConfig",
    "ThermalParams",
    "TrainingTrace",
    "ansatz_circuit",
    "build_scenario",
    "build_thermal_params",
    "circuit_unitary",
    "cost_noiseless",
    "cost_noisy",
    "default_scenario_constants",
    "depolarize",
    "excited_population",
    "fidelity_mixed",
    "fidelity_mub_avg",
    "fidelity_random_avg",
    "format_calibration",
    "gradient_descent",
    "histogram_export",
    "ideal_qft_circuit",
    "load_calibration",
    "mub_list",
    "mub_states",
    "numerical_gradient",
    "parse_calibration",
    "random_superpositions",
    "run_experiment",
    "run_noiseless",
    "run_noisy",
    "sweep_epsilon",
    "thermal_kraus",
    "thermal_probs",
]
