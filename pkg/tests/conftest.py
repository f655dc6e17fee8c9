from pathlib import Path

import pytest
from hypothesis import settings

from flourish.dsl import parse_file

settings.register_profile("suite", max_examples=50, deadline=None)
settings.load_profile("suite")

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
FIXTURE_NAMES = ["hiring", "jack_hill", "jack_paths", "jessica", "jill_exercise", "jill_gift"]


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.scn"


@pytest.fixture(scope="session")
def load():
    cache = {}

    def _load(name):
        if name not in cache:
            cache[name] = parse_file(fixture_path(name))
        return cache[name]

    return _load


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
