import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracles():
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def cx(pair):
    return complex(pair[0], pair[1])


# ---------------------------------------------------------- acceptance lines

ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """record(number, name, passed, detail): print one PASS/FAIL line and assert."""

    def record(number, name, passed, detail):
        line = f"criterion {number:2d}  {'PASS' if passed else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE[number] = line
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
