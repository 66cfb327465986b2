import pytest

from dtlab.arith import build_factor_sieve
from dtlab.factor import BigFactorizer
from dtlab.modforms import NewformSpec, angle_table, expand_coefficients
from dtlab.stats import factor_coefficients


@pytest.fixture(scope="session")
def sieve():
    return build_factor_sieve(2_000_000)


@pytest.fixture(scope="session")
def factorizer(sieve):
    return BigFactorizer(sieve)


@pytest.fixture(scope="session")
def tau_table():
    return expand_coefficients(NewformSpec(12), 10_000)


@pytest.fixture(scope="session")
def tau_angles(tau_table, sieve):
    return angle_table(tau_table, sieve, 10_000)


@pytest.fixture(scope="session")
def tau_factors(tau_angles, factorizer):
    return factor_coefficients(tau_angles, factorizer)


ACCEPTANCE_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_LINES] = []


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one verdict line per acceptance criterion for the terminal summary."""
    return request.config.stash[ACCEPTANCE_LINES]


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
