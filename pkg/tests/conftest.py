from __future__ import annotations

import pytest

from cds_arbitrage import DiscountCurve, RecoverySpec
from cds_arbitrage.fixtures import aib_curve, freddie_mac_curve, microsoft_curve

_CRITERIA: dict[int, tuple[str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion gate")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    number, title = marker.args
    outcome = "PASS" if call.excinfo is None else "FAIL"
    _CRITERIA.setdefault(number, (title, []))[1].append(outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, outcomes = _CRITERIA[number]
        verdict = "PASS" if outcomes and all(o == "PASS" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"AC{number} {verdict}  {title}")


@pytest.fixture
def zero_rates():
    return DiscountCurve.flat(0.0)


@pytest.fixture
def lgd60():
    return RecoverySpec(0.6)


@pytest.fixture
def msft():
    return microsoft_curve()


@pytest.fixture
def aib():
    return aib_curve()


@pytest.fixture
def fre():
    return freddie_mac_curve()
