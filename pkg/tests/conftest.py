import numpy as np
import pytest

_acceptance_key = pytest.StashKey[dict]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance(request):
    """Record a criterion outcome; the terminal summary lists one line per criterion."""
    book = request.config.stash.setdefault(_acceptance_key, {})

    def record(number, title, passed, detail):
        book[number] = (title, passed, detail)
        print(f"ACCEPTANCE {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    book = config.stash.get(_acceptance_key, {})
    if not book:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(book):
        title, passed, detail = book[number]
        terminalreporter.write_line(f"{number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
