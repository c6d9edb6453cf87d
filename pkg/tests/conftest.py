import warnings
from collections import defaultdict

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_criteria = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


@pytest.fixture(autouse=True)
def _quiet_runtime_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        yield


@pytest.fixture
def note(request):
    """Attach a measured value to the acceptance summary line of this test."""

    def add(text):
        request.node.user_properties.append(("note", text))

    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = marker.args
        notes = [v for k, v in item.user_properties if k == "note"]
        if hasattr(rep, "wasxfail"):
            status = "FAIL"
            notes.append("known shortfall: " + rep.wasxfail)
        elif rep.passed:
            status = "PASS"
        else:
            status = "FAIL"
        _criteria[number].append((status, title, item.name, "; ".join(notes)))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria, key=lambda s: int(s)):
        parts = _criteria[number]
        overall = "PASS" if all(p[0] == "PASS" for p in parts) else "FAIL"
        tr.write_line(f"criterion {number:>2}: {overall}  {parts[0][1]}")
        for status, _title, name, notes in parts:
            detail = f"  ({notes})" if notes else ""
            tr.write_line(f"    {status}  {name}{detail}")
