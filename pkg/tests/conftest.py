import pytest

from acceptance_log import RESULTS


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number].line())
    passed = sum(o.passed for o in RESULTS.values())
    terminalreporter.write_line(f"{passed}/{len(RESULTS)} criteria passed")


@pytest.fixture(scope="session")
def universe():
    from universe import full_universe

    return full_universe()
