import numpy as np
import pytest

from entangled_banks import canonical_scenario, sample_valid_params

ACCEPTANCE_RESULTS = {}


def valid_sets(seed, count, **kwargs):
    rng = np.random.default_rng(seed)
    return [sample_valid_params(rng, **kwargs) for _ in range(count)]


@pytest.fixture
def p0():
    return canonical_scenario()


@pytest.fixture
def record_acceptance():
    def record(number, title, passed, detail=""):
        ACCEPTANCE_RESULTS[number] = (title, passed, detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, passed, detail = ACCEPTANCE_RESULTS[number]
        line = f"[{number}] {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
