import re

import numpy as np
import pytest

from sbm_spectral.model import SbmParams, expected_adjacency, sample_graph

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): acceptance criterion id and summary")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    _CRITERIA.append((props["criterion"], report.outcome, props.get("summary", ""), props.get("detail", "")))


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        label, text = mark.args
        item.user_properties.append(("criterion", label))
        item.user_properties.append(("summary", text))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    def order(c):
        m = re.match(r"(\d+)(.*)", c[0])
        return (int(m.group(1)), m.group(2)) if m else (10**6, c[0])

    for label, outcome, text, detail in sorted(_CRITERIA, key=order):
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"criterion {label:<3} {status}  {text}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture
def detail(request):
    """Attach a measured value to the acceptance summary line."""
    def record(text):
        request.node.user_properties.append(("detail", text))
        print(f"{request.node.name}: {text}")
    return record


@pytest.fixture(scope="session")
def params500():
    return SbmParams(500, 30.0, 20.0)


@pytest.fixture(scope="session")
def expected500(params500):
    return expected_adjacency(params500)


@pytest.fixture(scope="session")
def graph500(params500):
    return sample_graph(params500, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

