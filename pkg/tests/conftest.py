import sys
from importlib import resources

import pytest

from tmchaos.machine import parse_machine

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

CORPUS = ("halter", "toggler", "right_mover", "incrementer")


def machine_path(name):
    return resources.files("tmchaos") / "machines" / f"{name}.tm"


def load_machine(name):
    return parse_machine(machine_path(name).read_text())


@pytest.fixture(scope="session")
def corpus():
    return {name: load_machine(name) for name in CORPUS}


# one PASS/FAIL line per acceptance criterion, after the run
_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    _criteria[number] = (title, call.excinfo is None, call.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, secs = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title} ({secs:.1f}s)")
