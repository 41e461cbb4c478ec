"""Plain gradient descent with central-difference gradients."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circuits import N_PARAMS

CONVERGED = "converged"
MAX_ITERS = "max_iters"
PLATEAU = "plateau"

DIVERGENCE_FACTOR = 10.0
DIVERGENCE_PATIENCE = 100


class OptimizerError(RuntimeError):
    def __init__(self, msg: str, trace: "TrainingTrace | None" = None):
        super().__init__(msg)
        self.trace = trace


@dataclass(frozen=True)
class OptimizerConfig:
    """Gradient-descent settings.

    With ``run_to_max`` the loop keeps going after the convergence test first
    passes (the iteration is still recorded in ``TrainingTrace.converged_at``).
    """

    learning_rate: float = 0.3
    max_iterations: int = 5000
    convergence_delta: float = 1e-9
    gradient_step: float = 1e-6
    seed: int = 0
    run_to_max: bool = False
    snapshot_every: int = 100

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.convergence_delta < 0:
            raise ValueError("convergence_delta must be >= 0")
        if not self.gradient_step > 0:
            raise ValueError("gradient_step must be positive")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")


@dataclass
class TrainingTrace:
    iterations: list[int] = field(default_factory=list)
    costs: list[float] = field(default_factory=list)
    fidelities: list[float] = field(default_factory=list)
    snapshots: dict[int, list[float]] = field(default_factory=dict)
    stop_reason: str | None = None
    converged_at: int | None = None

    def record(self, it: int, cost: float, fidelity: float | None):
        if not math.isfinite(cost):
            raise OptimizerError(f"non-finite cost {cost} at iteration {it}", self)
        self.iterations.append(it)
        self.costs.append(cost)
        self.fidelities.append(float("nan") if fidelity is None else fidelity)

    @property
    def final_cost(self) -> float:
        return self.costs[-1]

    def tail_stats(self, n: int = 200) -> tuple[float, float]:
        """Mean and std of the cost over the last ``n`` records."""
        tail = np.asarray(self.costs[-n:])
        return float(tail.mean()), float(tail.std())

    def summary(self) -> dict:
        mean, std = self.tail_stats()
        return {
            "iterations": self.iterations[-1] if self.iterations else 0,
            "final_cost": self.final_cost,
            "final_fidelity": self.fidelities[-1],
            "stop_reason": self.stop_reason,
            "converged_at": self.converged_at,
            "tail_cost_mean": mean,
            "tail_cost_std": std,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "cost", "fidelity"])
        for row in zip(self.iterations, self.costs, self.fidelities):
            w.writerow([row[0], repr(row[1]), repr(row[2])])
        return buf.getvalue()


def numerical_gradient(cost: Callable, p, h: float = 1e-6, vectorized: bool = False) -> np.ndarray:
    """Central finite differences (C(p + h e_j) - C(p - h e_j)) / 2h.

    With ``vectorized`` the cost is called once on the ``(2n, n)`` array of
    shifted points and must return one value per row.
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    p = np.asarray(p, dtype=float)
    if vectorized:
        shifts = h * np.eye(p.size)
        vals = np.asarray(cost(np.concatenate([p + shifts, p - shifts])), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise OptimizerError("non-finite cost while differentiating")
        return (vals[: p.size] - vals[p.size:]) / (2 * h)
    grad = np.empty_like(p)
    for j in range(p.size):
        step = np.zeros_like(p)
        step[j] = h
        hi, lo = cost(p + step), cost(p - step)
        if not (math.isfinite(hi) and math.isfinite(lo)):
            raise OptimizerError(f"non-finite cost while differentiating parameter {j}")
        grad[j] = (hi - lo) / (2 * h)
    return grad


def initial_params(seed: int, n: int = N_PARAMS) -> np.ndarray:
    return np.random.default_rng(seed).uniform(0.0, 2 * np.pi, size=n)


def gradient_descent(
    cost: Callable[[np.ndarray], float],
    cfg: OptimizerConfig = OptimizerConfig(),
    fidelity_probe: Callable[[np.ndarray], float] | None = None,
    init=None,
    vectorized: bool = False,
) -> tuple[np.ndarray, TrainingTrace]:
    """Minimise ``cost`` with theta <- theta - lr * grad.

    Stops once |C(theta_{t+1}) - C(theta_t)| < ``convergence_delta`` unless
    ``cfg.run_to_max`` is set, and always after ``max_iterations`` steps.
    ``vectorized`` is forwarded to :func:`numerical_gradient`.

    Raises
    ------
    OptimizerError
        If the cost stays above ten times its initial value for 100
        consecutive steps, or becomes non-finite. The trace is attached.
    """
    theta = initial_params(cfg.seed) if init is None else np.array(init, dtype=float)
    trace = TrainingTrace()
    c = float(cost(theta))
    c0 = c
    trace.record(0, c, fidelity_probe(theta) if fidelity_probe else None)
    trace.snapshots[0] = theta.tolist()
    bad_streak = 0
    for it in range(1, cfg.max_iterations + 1):
        theta = theta - cfg.learning_rate * numerical_gradient(cost, theta, cfg.gradient_step, vectorized)
        c_new = float(cost(theta))
        trace.record(it, c_new, fidelity_probe(theta) if fidelity_probe else None)
        if it % cfg.snapshot_every == 0:
            trace.snapshots[it] = theta.tolist()

        bad_streak = bad_streak + 1 if c_new > DIVERGENCE_FACTOR * c0 else 0
        if bad_streak >= DIVERGENCE_PATIENCE:
            trace.stop_reason = "diverged"
            raise OptimizerError(f"cost diverged: {c_new:.3e} vs initial {c0:.3e}", trace)

        if abs(c_new - c) < cfg.convergence_delta:
            if trace.converged_at is None:
                trace.converged_at = it
            if not cfg.run_to_max:
                trace.stop_reason = CONVERGED
                trace.snapshots[it] = theta.tolist()
                return theta, trace
        c = c_new
    trace.stop_reason = PLATEAU if trace.converged_at is not None else MAX_ITERS
    trace.snapshots[cfg.max_iterations] = theta.tolist()
    return theta, trace
