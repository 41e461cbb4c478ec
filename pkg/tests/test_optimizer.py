import math

import numpy as np
import pytest

from varqft.metrics import cost_noiseless
from varqft.optimizer import (
    CONVERGED,
    MAX_ITERS,
    PLATEAU,
    OptimizerConfig,
    OptimizerError,
    TrainingTrace,
    gradient_descent,
    initial_params,
    numerical_gradient,
)


def bowl(p):
    p = np.asarray(p)
    return np.sum(p**2, axis=-1)


def test_gradient_of_quadratic():
    assert np.allclose(numerical_gradient(bowl, np.zeros(12)), 0.0)
    e0 = np.eye(12)[0]
    assert np.allclose(numerical_gradient(bowl, e0), 2 * e0, atol=1e-8)


def test_vectorized_gradient_matches_loop(rng):
    p = rng.uniform(0, 6, 12)
    assert np.allclose(numerical_gradient(cost_noiseless, p), numerical_gradient(cost_noiseless, p, vectorized=True))


def test_gradient_step_self_consistency(rng):
    for _ in range(10):
        p = rng.uniform(0, 2 * np.pi, 12)
        g1 = numerical_gradient(cost_noiseless, p, 1e-6)
        g2 = numerical_gradient(cost_noiseless, p, 1e-7)
        assert np.linalg.norm(g1 - g2) <= 1e-4 * np.linalg.norm(g1)


def test_gradient_rejects_bad_inputs():
    with pytest.raises(ValueError):
        numerical_gradient(bowl, np.zeros(3), h=0)
    with pytest.raises(OptimizerError):
        numerical_gradient(lambda p: math.nan, np.zeros(3))


def test_descent_on_bowl_converges():
    cfg = OptimizerConfig(max_iterations=200, convergence_delta=1e-18)
    p, trace = gradient_descent(bowl, cfg, init=np.ones(12))
    assert np.max(np.abs(p)) < 1e-8
    assert trace.stop_reason == CONVERGED
    assert trace.iterations[-1] < 200


def test_descent_run_to_max_and_snapshots():
    cfg = OptimizerConfig(max_iterations=120, run_to_max=True, snapshot_every=50)
    _, trace = gradient_descent(bowl, cfg, init=np.ones(12))
    assert trace.stop_reason == PLATEAU
    assert trace.converged_at is not None
    assert sorted(trace.snapshots) == [0, 50, 100, 120]
    assert len(trace.costs) == 121


def test_descent_max_iters():
    _, trace = gradient_descent(bowl, OptimizerConfig(max_iterations=3, learning_rate=0.01), init=np.ones(12))
    assert trace.stop_reason == MAX_ITERS


def test_descent_is_deterministic():
    cfg = OptimizerConfig(max_iterations=40, seed=3)
    a = gradient_descent(cost_noiseless, cfg, vectorized=True)
    b = gradient_descent(cost_noiseless, cfg, vectorized=True)
    assert np.array_equal(a[0], b[0])
    assert a[1].to_csv() == b[1].to_csv()


def test_divergence_detected():
    cfg = OptimizerConfig(learning_rate=1.05, max_iterations=500)
    with pytest.raises(OptimizerError) as err:
        gradient_descent(bowl, cfg, init=np.ones(12))
    assert err.value.trace is not None
    assert err.value.trace.stop_reason == "diverged"


def test_non_finite_cost_reported_with_trace():
    calls = {"n": 0}

    def flaky(p):
        calls["n"] += 1
        return math.inf if calls["n"] > 30 else float(np.sum(p**2))

    with pytest.raises(OptimizerError):
        gradient_descent(flaky, OptimizerConfig(max_iterations=10), init=np.ones(12))


def test_config_validation():
    for bad in (dict(learning_rate=0), dict(max_iterations=0), dict(convergence_delta=-1), dict(gradient_step=0)):
        with pytest.raises(ValueError):
            OptimizerConfig(**bad)


def test_trace_csv_and_summary():
    t = TrainingTrace()
    t.record(0, 1.0, 0.5)
    t.record(1, 0.5, None)
    t.stop_reason = MAX_ITERS
    assert t.to_csv().splitlines()[0] == "iter,cost,fidelity"
    assert t.summary()["final_cost"] == 0.5
    with pytest.raises(OptimizerError):
        t.record(2, math.nan, 0.1)


def test_initial_params_range():
    p = initial_params(0)
    assert p.shape == (12,)
    assert np.all((p >= 0) & (p < 2 * np.pi))
    assert np.array_equal(p, initial_params(0))


def test_noiseless_training_success_rate():
    ok = 0
    for seed in range(10):
        _, trace = gradient_descent(cost_noiseless, OptimizerConfig(seed=seed), vectorized=True)
        ok += trace.final_cost <= 1e-3
    assert ok >= 8
