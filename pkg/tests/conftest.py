import numpy as np
import pytest

from ncga import build_layout, make_canonical, make_cascade


@pytest.fixture(scope="session")
def butterfly():
    return make_canonical("B")


@pytest.fixture(scope="session")
def butterfly_prime():
    return make_canonical("B_prime")


@pytest.fixture(scope="session")
def cascade3():
    return make_cascade(3)


@pytest.fixture(scope="session")
def cascade7():
    return make_cascade(7)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def layout_of(network):
    return build_layout(network)


# One summary line per acceptance criterion, printed after the run.
_criteria: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    number = name.split("_")[2]
    detail = dict(report.user_properties).get("detail", "")
    _criteria[number] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria, key=int):
        status, detail = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
