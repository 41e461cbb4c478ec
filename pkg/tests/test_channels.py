import math

import numpy as np
import pytest

from conftest import random_density
from varqft.channels import (
    BOLTZMANN,
    PLANCK,
    ChannelError,
    KrausChannel,
    ThermalParams,
    apply_channel,
    apply_kraus,
    crosstalk_unitary,
    depolarize,
    depolarizing_kraus,
    excited_population,
    partial_trace,
    thermal_kraus,
    thermal_kraus_choi,
    thermal_probs,
)
from varqft.gates import Z, cphase, embed
from varqft.matcore import frobenius_norm
from varqft.states import maximally_mixed

# Oracle values evaluated at 30 digits with mpmath
P_EXCITED_Q2 = 3.9291438249425696e-7
P_EXCITED_Q3 = 1.7657012436800748e-7
E_T1_Q2_60NS = 0.99981065387584978
XT_PHASE_660NS = 0.62203534541077906

QUBIT2 = ThermalParams(316.85e-6, 311.90e-6, 60e-9, P_EXCITED_Q2)
QUBIT3 = ThermalParams(315.50e-6, 409.37e-6, 660e-9, P_EXCITED_Q3)


def assert_density(rho, tol=1e-10):
    assert np.max(np.abs(rho - rho.conj().swapaxes(-1, -2))) < tol
    assert np.max(np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1)) < tol
    assert np.min(np.linalg.eigvalsh(rho)) > -tol


def test_depolarize_examples(densities):
    rho = densities[0]
    assert np.allclose(depolarize(rho, 0.0), rho)
    assert np.allclose(depolarize(rho, 1.0, (0, 1)), maximally_mixed())
    for wires in ((0,), (1,), (0, 1)):
        assert np.allclose(depolarize(maximally_mixed(), 0.37, wires), maximally_mixed())


def test_single_wire_depolarize_replaces_marginal(rng):
    a, b = random_density(rng)[:2, :2], np.diag([0.3, 0.7])
    a = a / np.trace(a)
    rho = np.kron(a, b)
    out = depolarize(rho, 1.0, (0,))
    assert np.allclose(out, np.kron(np.eye(2) / 2, b))
    assert np.allclose(partial_trace(depolarize(rho, 0.4, (1,)), 0), a)


def test_depolarize_matches_pauli_kraus(densities):
    for n, wires in ((1, (0,)), (1, (1,)), (2, (0, 1))):
        ch = depolarizing_kraus(0.23, n)
        for rho in densities[:50]:
            assert np.allclose(apply_channel(rho, ch, wires), depolarize(rho, 0.23, wires), atol=1e-12)


def test_depolarize_contracts(densities):
    for rho in densities:
        out = depolarize(rho, 0.3)
        assert frobenius_norm(out - maximally_mixed()) <= 0.7 * frobenius_norm(rho - maximally_mixed()) + 1e-12


def test_depolarize_rejects_bad_eps():
    with pytest.raises(ChannelError):
        depolarize(maximally_mixed(), 1.5)
    with pytest.raises(ChannelError):
        depolarize(maximally_mixed(), 0.1, (2,))


def test_excited_population():
    assert excited_population(1.0, 15) == pytest.approx(0.5, abs=1e-9)
    assert excited_population(4.61e9, 15) == pytest.approx(P_EXCITED_Q2, rel=1e-12)
    assert excited_population(4.86e9, 15) == pytest.approx(P_EXCITED_Q3, rel=1e-12)
    assert excited_population(1e15, 15) == 0.0
    assert PLANCK == 6.62607015e-34 and BOLTZMANN == 1.380649e-23
    with pytest.raises(ChannelError):
        excited_population(0, 15)


def test_thermal_probs_examples():
    tp = thermal_probs(ThermalParams(1e-4, 1e-4, 0.0, 0.1))
    assert (tp.p_reset, tp.p_z, tp.p_id) == (0.0, 0.0, 1.0)
    tp = thermal_probs(QUBIT2)
    assert tp.e_t1 == pytest.approx(E_T1_Q2_60NS, rel=1e-14)
    t1, tg = 1e-4, 3e-5
    tp = thermal_probs(ThermalParams(t1, 2 * t1, tg, 0.0))
    e1, e2 = math.exp(-tg / t1), math.exp(-tg / (2 * t1))
    assert tp.p_z == pytest.approx(e1 * (1 - e2 / e1) / 2, rel=1e-12)
    assert tp.p_id + tp.p_z + tp.p_r0 + tp.p_r1 == pytest.approx(1.0, abs=1e-12)


def test_thermal_params_invariants():
    with pytest.raises(ChannelError):
        ThermalParams(1e-4, 2.1e-4, 1e-8, 0.0)
    with pytest.raises(ChannelError):
        ThermalParams(0.0, 1e-4, 1e-8, 0.0)
    with pytest.raises(ChannelError):
        ThermalParams(1e-4, 1e-4, -1.0, 0.0)


def test_thermal_kraus_identity_and_limits(densities):
    ident = thermal_kraus(thermal_probs(ThermalParams(1e-4, 1e-4, 0.0, 0.0)))
    rho = densities[3]
    assert np.allclose(apply_channel(rho, ident, (0,)), rho)
    # p_e = 0 and a very long gate: every state resets to |0>
    reset = thermal_kraus(thermal_probs(ThermalParams(1e-6, 1e-6, 1.0, 0.0)))
    out = apply_kraus(np.eye(2) / 2 + 0.2 * np.array([[0, 1], [1, 0]]), reset.kraus_ops)
    assert np.allclose(out, [[1, 0], [0, 0]])


def test_thermal_kraus_explicit_operators():
    tp = thermal_probs(QUBIT2)
    ops = thermal_kraus(tp).kraus_ops
    assert len(ops) == 6
    assert np.allclose(ops[1], math.sqrt(tp.p_z) * Z)
    assert np.allclose(ops[3], math.sqrt(tp.p_r0) * np.array([[0, 1], [0, 0]]))


def test_thermal_choi_branch_agrees_with_explicit_form(densities):
    for params in (QUBIT2, ThermalParams(50e-6, 20e-6, 5e-6, 0.05)):
        tp = thermal_probs(params)
        assert tp.p_z >= 0
        a, b = thermal_kraus(tp), thermal_kraus_choi(tp)
        for rho in densities[:20]:
            for w in (0, 1):
                assert np.allclose(apply_channel(rho, a, (w,)), apply_channel(rho, b, (w,)), atol=1e-12)


def test_thermal_t2_above_t1_uses_choi_and_matches_bloch_picture():
    tp = thermal_probs(QUBIT3)
    assert tp.p_z < 0
    ch = thermal_kraus(tp)
    rho = np.array([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, 0.7]])
    out = apply_kraus(rho, ch.kraus_ops)
    p_e = QUBIT3.p_excited
    assert out[1, 1].real == pytest.approx(0.7 * tp.e_t1 + p_e * tp.p_reset, rel=1e-12)
    assert out[0, 1] == pytest.approx(rho[0, 1] * tp.e_t2, rel=1e-12)


def test_thermal_monotone_decay():
    excited = np.diag([0.0, 1.0])
    pops = []
    for tg in (0.0, 1e-4, 1e-3):
        ch = thermal_kraus(thermal_probs(ThermalParams(1e-4, 1e-4, tg, 0.0)))
        pops.append(apply_kraus(excited, ch.kraus_ops)[0, 0].real)
    assert pops[0] < pops[1] < pops[2]
    assert pops[0] == 0.0 and pops[2] == pytest.approx(1.0, abs=1e-4)


def test_thermal_completeness_table_values():
    for params in (QUBIT2, QUBIT3):
        ops = thermal_kraus(thermal_probs(params)).kraus_ops
        gram = sum(k.conj().T @ k for k in ops)
        assert np.max(np.abs(gram - np.eye(2))) < 1e-12


def test_kraus_channel_checks_completeness():
    with pytest.raises(ChannelError):
        KrausChannel((np.eye(2), np.eye(2)))
    with pytest.raises(ChannelError):
        KrausChannel((np.eye(3),))
    with pytest.raises(ChannelError):
        KrausChannel((np.eye(2),)).embedded((0, 1))


def test_apply_channel_detects_trace_loss():
    leaky = KrausChannel.__new__(KrausChannel)
    object.__setattr__(leaky, "kraus_ops", np.array([0.5 * np.eye(4)]))
    object.__setattr__(leaky, "name", "leaky")
    with pytest.raises(ChannelError):
        apply_channel(maximally_mixed(), leaky, (0, 1))


def test_crosstalk_unitary():
    assert np.allclose(crosstalk_unitary(0.0, 1e-6), np.eye(4))
    u = crosstalk_unitary(1.5e5, 660e-9)
    assert np.allclose(u, np.diag([1, 1, 1, np.exp(-1j * XT_PHASE_660NS)]), atol=1e-14)
    assert np.allclose(crosstalk_unitary(1.0, 0.5), np.diag([1, 1, 1, -1]))
    assert np.allclose(u @ cphase(0.7), cphase(0.7) @ u)
    with pytest.raises(ChannelError):
        crosstalk_unitary(1.0, -1.0)


@pytest.mark.parametrize(
    "label, apply",
    [
        ("depolarizing-1q", lambda r: depolarize(r, 0.2, (1,))),
        ("depolarizing-2q", lambda r: depolarize(r, 0.2)),
        ("thermal-q2", lambda r: apply_kraus(r, thermal_kraus(thermal_probs(QUBIT2)).embedded((0,)))),
        ("thermal-q3", lambda r: apply_kraus(r, thermal_kraus(thermal_probs(QUBIT3)).embedded((1,)))),
        ("crosstalk", lambda r: crosstalk_unitary(1.5e5, 660e-9) @ r @ crosstalk_unitary(1.5e5, 660e-9).conj().T),
    ],
)
def test_channels_preserve_density_matrices(label, apply, densities):
    assert_density(apply(densities))


def test_embedded_thermal_is_local(rng):
    ch = thermal_kraus(thermal_probs(QUBIT3))
    lifted = ch.embedded((1,))
    assert np.allclose(lifted[0], embed(ch.kraus_ops[0], 1))
