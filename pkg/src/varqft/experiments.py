"""Training and evaluation runs, epsilon sweeps and the files they produce.

A run trains the ansatz for one noise scenario, then evaluates both the
trained circuit and the textbook QFT under that same scenario. Reports are
JSON written with sorted keys so identical configurations give identical
bytes; traces, sweeps and histograms are CSV.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import calibration
from .circuits import NOISELESS, SCENARIO_KINDS, NoiseScenario, ansatz_circuit, ideal_qft_circuit
from .metrics import (
    FidelityReport,
    cost_noiseless,
    cost_noisy,
    fidelity_mub_avg,
    fidelity_pure_avg,
    fidelity_random_avg,
    mub_outputs,
    unitary_distance,
)
from .optimizer import OptimizerConfig, TrainingTrace, gradient_descent
from .states import maximally_mixed, trace_distance

SCHEMA_VERSION = 1

BASIS = "basis"
MUBS = "mubs"
TRAINING_SETS = (BASIS, MUBS)

SWEEP_EPSILONS = (1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1)
SWEEP_MAX_ITERATIONS = 500
# two-qubit depolarizing rate relative to the single-qubit one in sweeps
SWEEP_2Q_RATIO = 10.0
MIXED_TRACE_DISTANCE = 0.05

# short names accepted wherever a scenario kind is expected
SCENARIO_ALIASES = {
    "noiseless": NOISELESS,
    "depolarizing": "depolarizing",
    "thermal": "depolarizing+thermal",
    "crosstalk": "depolarizing+crosstalk",
    "all": "depolarizing+crosstalk+thermal",
    "all_noise": "depolarizing+crosstalk+thermal",
}


class ConfigError(ValueError):
    pass


def resolve_kind(name: str) -> str:
    kind = SCENARIO_ALIASES.get(name, name)
    if kind not in SCENARIO_KINDS:
        raise ConfigError(f"unknown scenario {name!r}; use one of {sorted(SCENARIO_ALIASES)} or {SCENARIO_KINDS}")
    return kind


def default_optimizer(kind: str, seed: int = 0) -> OptimizerConfig:
    """Noiseless runs stop at convergence; noisy runs take the full 2000 steps."""
    if kind == NOISELESS:
        return OptimizerConfig(max_iterations=5000, seed=seed)
    return OptimizerConfig(max_iterations=2000, run_to_max=True, seed=seed)


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: NoiseScenario
    optimizer: OptimizerConfig = OptimizerConfig()
    training_set: str = MUBS
    eval_random_n: int = 1000
    eval_seed: int = 0
    output_dir: str | None = None

    def __post_init__(self):
        if self.training_set not in TRAINING_SETS:
            raise ConfigError(f"training_set must be one of {TRAINING_SETS}, got {self.training_set!r}")
        if self.training_set == BASIS and not self.scenario.is_noiseless:
            # basis states do not constrain off-diagonal terms once noise is present
            raise ConfigError("training_set 'basis' is only valid for the noiseless scenario")
        if self.eval_random_n < 1:
            raise ConfigError(f"eval_random_n must be >= 1, got {self.eval_random_n}")

    @classmethod
    def for_scenario(cls, kind: str, seed: int = 0, records=None, **kw) -> "ExperimentConfig":
        kind = resolve_kind(kind)
        scenario = calibration.build_scenario(kind, records)
        kw.setdefault("optimizer", default_optimizer(kind, seed))
        kw.setdefault("training_set", BASIS if kind == NOISELESS else MUBS)
        return cls(scenario=scenario, **kw)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.to_dict(),
            "optimizer": asdict(self.optimizer),
            "training_set": self.training_set,
            "eval_random_n": self.eval_random_n,
            "eval_seed": self.eval_seed,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, d: dict, records=None) -> "ExperimentConfig":
        """Build from a JSON-style mapping.

        ``scenario`` is either a kind name (parameters then come from the
        calibration data) or a full scenario mapping. ``optimizer`` entries
        override the scenario's default optimizer settings.
        """
        d = dict(d)
        unknown = set(d) - {"scenario", "optimizer", "training_set", "eval_random_n", "eval_seed", "output_dir"}
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        if "scenario" not in d:
            raise ConfigError("config needs a 'scenario' field")
        try:
            sc = d["scenario"]
            if isinstance(sc, str):
                scenario = calibration.build_scenario(resolve_kind(sc), records)
            elif isinstance(sc, dict):
                scenario = NoiseScenario.from_dict(sc)
            else:
                raise ConfigError("scenario must be a kind name or a mapping")
            opt = default_optimizer(scenario.kind)
            opt = replace(opt, **d.get("optimizer", {}))
            return cls(
                scenario=scenario,
                optimizer=opt,
                training_set=d.get("training_set", BASIS if scenario.is_noiseless else MUBS),
                eval_random_n=int(d.get("eval_random_n", 1000)),
                eval_seed=int(d.get("eval_seed", 0)),
                output_dir=d.get("output_dir"),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc

    @classmethod
    def from_json(cls, path, records=None) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data, records)


def cost_function(cfg: ExperimentConfig):
    if cfg.training_set == BASIS:
        return cost_noiseless
    return lambda p: cost_noisy(p, cfg.scenario)


def train(cfg: ExperimentConfig) -> tuple[np.ndarray, TrainingTrace]:
    """Fit the 12 ansatz angles for ``cfg``; the trace logs cost and MUB fidelity."""
    if cfg.training_set == BASIS:
        probe = lambda p: fidelity_pure_avg(p).mean  # noqa: E731
    else:
        probe = lambda p: fidelity_mub_avg(ansatz_circuit(p), cfg.scenario).mean  # noqa: E731
    return gradient_descent(cost_function(cfg), cfg.optimizer, probe, vectorized=True)


def suppression_factor(f_qft: float, f_var: float) -> float | None:
    """(1 - F_qft) / (1 - F_var); None when the variational infidelity vanishes."""
    den = 1.0 - f_var
    if den <= 0.0:
        return None
    return (1.0 - f_qft) / den


@dataclass
class ExperimentReport:
    scenario: NoiseScenario
    trained_params: list[float]
    trace_summary: dict
    fidelity_mub: dict[str, FidelityReport]
    fidelity_random: dict[str, FidelityReport]
    fidelity_basis: FidelityReport | None = None
    frobenius_distance: float = math.nan
    config: dict = field(default_factory=dict)
    trace: TrainingTrace | None = field(default=None, repr=False)

    @property
    def suppression_factor(self) -> float | None:
        if self.scenario.is_noiseless:
            return None
        return suppression_factor(self.fidelity_mub["qft"].mean, self.fidelity_mub["variational"].mean)

    @property
    def suppression_factor_random(self) -> float | None:
        if self.scenario.is_noiseless:
            return None
        return suppression_factor(self.fidelity_random["qft"].mean, self.fidelity_random["variational"].mean)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario.to_dict(),
            "trained_params": list(self.trained_params),
            "trace_summary": self.trace_summary,
            "fidelity_mub": {k: v.to_dict() for k, v in self.fidelity_mub.items()},
            "fidelity_random": {k: v.to_dict() for k, v in self.fidelity_random.items()},
            "suppression_factor": self.suppression_factor,
            "suppression_factor_random": self.suppression_factor_random,
            "fidelity_basis": None if self.fidelity_basis is None else self.fidelity_basis.to_dict(),
            "frobenius_distance": self.frobenius_distance,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        def fr(x):
            return FidelityReport(x["mean"], x["std_dev"], tuple(x.get("per_state", ())))

        return cls(
            scenario=NoiseScenario.from_dict(d["scenario"]),
            trained_params=list(d["trained_params"]),
            trace_summary=d["trace_summary"],
            fidelity_mub={k: fr(v) for k, v in d["fidelity_mub"].items()},
            fidelity_random={k: fr(v) for k, v in d["fidelity_random"].items()},
            fidelity_basis=None if d.get("fidelity_basis") is None else fr(d["fidelity_basis"]),
            frobenius_distance=d.get("frobenius_distance", math.nan),
            config=d.get("config", {}),
        )

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(self.to_json(), encoding="utf-8")
        if self.trace is not None:
            (out / "trace.csv").write_text(self.trace.to_csv(), encoding="utf-8")
        return out / "report.json"


def evaluate(params, scenario: NoiseScenario, eval_random_n: int = 1000, eval_seed: int = 0) -> dict:
    """Fidelities of the ansatz at ``params`` and of the plain QFT under ``scenario``."""
    var, qft = ansatz_circuit(params), ideal_qft_circuit()
    return {
        "fidelity_mub": {
            "qft": fidelity_mub_avg(qft, scenario),
            "variational": fidelity_mub_avg(var, scenario),
        },
        "fidelity_random": {
            "qft": fidelity_random_avg(qft, scenario, eval_random_n, eval_seed),
            "variational": fidelity_random_avg(var, scenario, eval_random_n, eval_seed),
        },
        "fidelity_basis": fidelity_pure_avg(params),
        "frobenius_distance": unitary_distance(params),
    }


def report_for(params, cfg: ExperimentConfig, trace: TrainingTrace | None = None) -> ExperimentReport:
    ev = evaluate(params, cfg.scenario, cfg.eval_random_n, cfg.eval_seed)
    return ExperimentReport(
        scenario=cfg.scenario,
        trained_params=[float(x) for x in params],
        trace_summary=trace.summary() if trace is not None else {},
        config=cfg.to_dict(),
        trace=trace,
        **ev,
    )


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Train under ``cfg``, evaluate both circuits and write files if ``output_dir`` is set.

    Raises
    ------
    OptimizerError
        When training diverges or the cost turns non-finite.
    """
    params, trace = train(cfg)
    rep = report_for(params, cfg, trace)
    if cfg.output_dir is not None:
        rep.write(cfg.output_dir)
    return rep


@dataclass(frozen=True)
class SweepPoint:
    epsilon: float
    eps_1q: float
    eps_2q: float
    fidelity_qft: float
    fidelity_var: float
    difference: float
    convention: str
    trace_distance_qft: float
    trace_distance_var: float
    final_cost: float

    @property
    def maximally_mixed(self) -> bool:
        """Both circuits output states indistinguishable from I/4."""
        return max(self.trace_distance_qft, self.trace_distance_var) < MIXED_TRACE_DISTANCE


def sweep_scenario(scenario: NoiseScenario, eps: float) -> NoiseScenario:
    """``scenario`` with depolarizing rates eps (single-qubit) and 10 eps (two-qubit, capped at 1)."""
    if not 0.0 <= eps <= 1.0:
        raise ConfigError(f"sweep epsilon {eps} outside [0, 1]")
    return scenario.with_depolarizing((eps, eps), min(SWEEP_2Q_RATIO * eps, 1.0))


def _max_distance_to_mixed(circuit, scenario) -> float:
    out = mub_outputs(circuit, scenario)
    return float(np.max(trace_distance(out, maximally_mixed())))


def sweep_point(cfg: ExperimentConfig, eps: float, max_iterations: int = SWEEP_MAX_ITERATIONS) -> SweepPoint:
    sc = sweep_scenario(cfg.scenario, eps)
    opt = replace(cfg.optimizer, max_iterations=max_iterations)
    params, trace = train(replace(cfg, scenario=sc, optimizer=opt, output_dir=None))
    var, qft = ansatz_circuit(params), ideal_qft_circuit()
    f_var = fidelity_mub_avg(var, sc).mean
    f_qft = fidelity_mub_avg(qft, sc).mean
    # crosstalk sweeps report how much the ansatz gains, the others how much it loses
    if sc.has_crosstalk:
        convention, diff = "var-qft", f_var - f_qft
    else:
        convention, diff = "qft-var", f_qft - f_var
    return SweepPoint(
        epsilon=float(eps),
        eps_1q=sc.eps_1q[0],
        eps_2q=sc.eps_2q,
        fidelity_qft=f_qft,
        fidelity_var=f_var,
        difference=diff,
        convention=convention,
        trace_distance_qft=_max_distance_to_mixed(qft, sc),
        trace_distance_var=_max_distance_to_mixed(var, sc),
        final_cost=trace.final_cost,
    )


def _sweep_job(args):
    return sweep_point(*args)


def sweep_epsilon(
    cfg: ExperimentConfig,
    eps_list=SWEEP_EPSILONS,
    max_iterations: int = SWEEP_MAX_ITERATIONS,
    workers: int = 1,
) -> list[SweepPoint]:
    """Retrain and evaluate at every epsilon; the result keeps the input order.

    With ``workers > 1`` the points run in separate processes. Each point is
    self-contained, so the table does not depend on the worker count.
    """
    jobs = [(cfg, float(e), max_iterations) for e in eps_list]
    for _, e, _ in jobs:
        if not 0.0 <= e <= 1.0:
            raise ConfigError(f"sweep epsilon {e} outside [0, 1]")
    if workers <= 1:
        return [_sweep_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_job, jobs))


SWEEP_COLUMNS = (
    "epsilon", "eps_1q", "eps_2q", "fidelity_qft", "fidelity_var", "difference", "convention",
    "trace_distance_qft", "trace_distance_var", "maximally_mixed", "final_cost",
)


def sweep_to_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for p in points:
        d = asdict(p)
        d["maximally_mixed"] = p.maximally_mixed
        w.writerow([repr(d[c]) if isinstance(d[c], float) else d[c] for c in SWEEP_COLUMNS])
    return buf.getvalue()


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    count_var: np.ndarray
    count_qft: np.ndarray
    mean_var: float
    mean_qft: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_left", "bin_right", "count_var", "count_qft"])
        for i in range(len(self.count_var)):
            w.writerow([repr(float(self.edges[i])), repr(float(self.edges[i + 1])),
                        int(self.count_var[i]), int(self.count_qft[i])])
        return buf.getvalue()


def histogram(values_var, values_qft, bins: int = 50) -> Histogram:
    """Counts of both fidelity series over one shared set of bins."""
    var = np.asarray(values_var, dtype=float)
    qft = np.asarray(values_qft, dtype=float)
    if var.size == 0 or qft.size == 0:
        raise ValueError("histogram needs non-empty fidelity lists")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    both = np.concatenate([var, qft])
    edges = np.histogram_bin_edges(both, bins=bins)
    cv, _ = np.histogram(var, bins=edges)
    cq, _ = np.histogram(qft, bins=edges)
    return Histogram(edges, cv, cq, float(var.mean()), float(qft.mean()))


def histogram_export(report: ExperimentReport, bins: int = 50, path=None) -> Histogram:
    """Histogram of the random-state fidelities in ``report``; written as CSV when ``path`` is given."""
    h = histogram(report.fidelity_random["variational"].per_state, report.fidelity_random["qft"].per_state, bins)
    if path is not None:
        Path(path).write_text(h.to_csv(), encoding="utf-8")
    return h
