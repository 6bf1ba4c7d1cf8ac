import pytest

from diatomic_langevin import N2_WATER, Harmonic


@pytest.fixture
def n2():
    return N2_WATER.params


@pytest.fixture
def ks():
    return N2_WATER.spring_constant


@pytest.fixture
def harmonic(ks):
    return Harmonic(ks, 0.0)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for the acceptance summary, then assert it."""

    def check(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        assert ok, f"{label}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
