import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from tensornorms import DenseTensor, OptimizerSettings, PureTensor, PureTuple

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

FAST = OptimizerSettings(restarts=16)


def unit(v):
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def random_unit(rng, n):
    return unit(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def random_pure(rng, dims):
    return PureTensor(tuple(random_unit(rng, n) for n in dims))


def random_tuple(rng, r, dims):
    return PureTuple.of([random_pure(rng, dims) for _ in range(r)])


def random_tensor(rng, dims):
    return DenseTensor(rng.standard_normal(dims) + 1j * rng.standard_normal(dims))


def random_unitary(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def e(n, i):
    v = np.zeros(n, dtype=complex)
    v[i] = 1
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# One PASS/FAIL line per acceptance criterion, printed after the run.
_ACCEPTANCE: dict[int, bool] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    crit = int(name.split("_")[2])
    if report.when == "call" or report.failed or report.skipped:
        _ACCEPTANCE[crit] = _ACCEPTANCE.get(crit, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {crit:2d}: {'PASS' if _ACCEPTANCE[crit] else 'FAIL'}")
