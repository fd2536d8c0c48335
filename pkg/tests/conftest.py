import pytest

from ptlattice.topology import critical_exponents


@pytest.fixture(scope="session")
def n8_report():
    """Critical exponents at n = 8; computed once because it takes seconds."""
    return critical_exponents(8, 0.5, 5.0, tol=1e-5)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
