import numpy as np
import pytest

from conftest import random_density, random_unitary
from varqft.gates import H, I2, X
from varqft.matcore import LinAlgError, as_cmatrix, frobenius_norm, hermitian_sqrt, is_hermitian, kron, trace_norm


def test_kron_examples():
    assert np.allclose(kron(I2, I2), np.eye(4))
    e0 = np.eye(4)[0]
    assert np.allclose(kron(X, I2) @ e0, np.eye(4)[2])
    assert np.allclose(kron(H, H) @ e0, np.full(4, 0.5))


def test_kron_index_formula(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    k = kron(a, b)
    for i, j, p, q in np.ndindex(2, 2, 2, 2):
        assert np.isclose(k[2 * i + p, 2 * j + q], a[i, j] * b[p, q], rtol=1e-14, atol=0)


def test_kron_mixed_product(rng):
    a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
    assert np.allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d))
    assert np.allclose(kron(2 * a + c, b), 2 * kron(a, b) + kron(c, b))


def test_kron_rejects_bad_shapes():
    with pytest.raises(LinAlgError):
        kron(np.eye(4), I2)
    with pytest.raises(LinAlgError):
        kron(np.eye(3), I2)


def test_as_cmatrix_rejects_non_finite():
    with pytest.raises(LinAlgError):
        as_cmatrix([[np.nan, 0], [0, 1]])


def test_frobenius_examples(rng):
    assert frobenius_norm(np.eye(4)) == pytest.approx(2.0)
    assert frobenius_norm(np.zeros((4, 4))) == 0.0
    assert frobenius_norm(np.diag([3, 4, 0, 0])) == pytest.approx(5.0)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert abs(frobenius_norm(random_unitary(rng) @ m) - frobenius_norm(m)) < 1e-10


def test_trace_norm_examples(rng):
    assert trace_norm(np.eye(4)) == pytest.approx(4.0)
    assert trace_norm(random_density(rng)) == pytest.approx(1.0)
    assert trace_norm(np.diag([1, -1, 0, 0])) == pytest.approx(2.0)
    for _ in range(20):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = g + g.conj().T
        assert trace_norm(m) >= abs(np.trace(m)) - 1e-12


def test_hermitian_sqrt_examples():
    assert np.allclose(hermitian_sqrt(np.eye(4)), np.eye(4))
    assert np.allclose(hermitian_sqrt(np.diag([4.0, 1, 0, 0])), np.diag([2.0, 1, 0, 0]))
    assert np.allclose(hermitian_sqrt(np.eye(4) / 4), np.eye(4) / 2)


def test_hermitian_sqrt_squares_back(rng):
    for rank in (1, 2, 4):
        rho = random_density(rng, rank)
        s = hermitian_sqrt(rho)
        assert is_hermitian(s)
        assert np.min(np.linalg.eigvalsh(s)) >= -1e-12
        assert frobenius_norm(s @ s - rho) < 1e-9


def test_hermitian_sqrt_broadcasts(rng):
    stack = np.array([random_density(rng) for _ in range(5)])
    s = hermitian_sqrt(stack)
    assert s.shape == (5, 4, 4)
    assert np.allclose(s[3], hermitian_sqrt(stack[3]))


def test_hermitian_sqrt_clamps_roundoff_only():
    tiny = np.diag([1.0, -5e-11, 0, 0])
    assert np.allclose(hermitian_sqrt(tiny), np.diag([1.0, 0, 0, 0]))
    with pytest.raises(LinAlgError):
        hermitian_sqrt(np.diag([1.0, -1e-6, 0, 0]))
    with pytest.raises(LinAlgError):
        hermitian_sqrt(np.array([[1, 1], [0, 1]]))
