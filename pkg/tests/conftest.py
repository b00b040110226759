import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile("default", deadline=None, max_examples=100)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def record(number, title, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  [{number}] {title}  {detail}".rstrip())
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def gen():
    return np.random.default_rng(20240601)
