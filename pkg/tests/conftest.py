import numpy as np
import pytest

from varqft.states import to_density

_CRITERIA: dict[str, list[tuple[str, str]]] = {}


def random_density(rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random 4x4 density matrix of the given rank (full rank by default)."""
    k = rank or 4
    g = rng.normal(size=(4, k)) + 1j * rng.normal(size=(4, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_pure(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, n: int = 4) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def densities(rng):
    return np.array([random_density(rng, rank=1 + i % 4) for i in range(100)])


@pytest.fixture
def pure_density(rng):
    return to_density(random_pure(rng))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, check): acceptance criterion sub-check")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        num, check = marker
        _CRITERIA.setdefault(num, []).append((check, report.outcome))


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", tuple(m.args)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA, key=int):
        checks = _CRITERIA[num]
        failed = [c for c, outcome in checks if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(checks) - len(failed)}/{len(checks)} checks"
        if failed:
            detail += "; failed: " + ", ".join(failed)
        tr.write_line(f"criterion {num}: {status} ({detail})")
