from importlib.resources import files

import pytest

from cechmc.cech import build_cech_scs, constant_presheaf
from cechmc.glie import sl2, sl2_dual_de_rham
from cechmc.workspace import Workspace

CORPUS = files("cechmc") / "corpus" / "corpus.json"
NEGATIVE = files("cechmc") / "corpus" / "negative_control.json"

A1_OBJECTS = ("sl2_2opens", "sl2_3opens", "line_3opens", "trace_presheaf")


@pytest.fixture(scope="session")
def corpus():
    return Workspace.load(CORPUS)


@pytest.fixture(scope="session")
def negative():
    return Workspace.load(NEGATIVE)


@pytest.fixture(scope="session")
def sl2_two():
    return build_cech_scs(constant_presheaf(["U1", "U2"], sl2()))


@pytest.fixture(scope="session")
def sl2_three():
    return build_cech_scs(constant_presheaf(["U1", "U2", "U3"], sl2()))


@pytest.fixture(scope="session")
def de_rham_three():
    """sl2 tensor Q[u, du]: a Čech object whose DGLA has a nonzero differential."""
    return build_cech_scs(constant_presheaf(["U1", "U2", "U3"], sl2_dual_de_rham()))


ACCEPTANCE_LINES = []


def acceptance_line(criterion, ok, detail):
    line = f"{criterion} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
