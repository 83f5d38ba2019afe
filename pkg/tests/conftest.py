import pytest

from contactlab.config import config_from_dict
from contactlab.suites import run_suite

ACCEPTANCE_RESULTS = []


def _reduced_all_config():
    return config_from_dict(dict(
        suite="all", seed=11,
        n_twist=25, n_strict=25, n_liouville=15, n_surface_scan=400,
        n_monodromy=12, n_giroux=12, n_giroux_numeric=2, n_chains=60,
        n_nonconnected=12, n_window=5))


@pytest.fixture(scope="session")
def all_suite_report():
    return run_suite(_reduced_all_config())


@pytest.fixture(scope="session")
def all_suite_report_rerun():
    return run_suite(_reduced_all_config())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for num, name, passed, detail in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if passed else "FAIL"
        line = f"  [{verdict}] criterion {num:2d} - {name}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
