import sys

import pytest

from hilbtaut.ringmodel import preset_surface, truncated_poly_model


@pytest.fixture(scope="session")
def affine1():
    return preset_surface("affine", d=1)


@pytest.fixture(scope="session")
def ring1():
    return truncated_poly_model(1)


@pytest.fixture(scope="session")
def ring2():
    return truncated_poly_model(2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
