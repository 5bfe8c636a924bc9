import numpy as np
import pytest

from bohmlab.wavefield import Grid1D, SpinorField

# Acceptance criteria report one PASS/FAIL line each; collect them here so
# the terminal summary shows the verdicts even without -s.
ACCEPTANCE_LINES: list[str] = []


def record_acceptance(tag: str, passed: bool, detail: str) -> None:
    line = f"{tag} {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def analytic_free_gaussian(grid: Grid1D, width: float, t: float,
                           momentum: float = 0.0, center: float = 0.0,
                           alpha: complex = 1.0, beta: complex = 0.0) -> SpinorField:
    """Closed-form free Gaussian at time t, used as a solver-independent
    oracle: psi evolves with complex width w0^2 -> w0^2 (1 + i t / (2 w0^2))."""
    x = grid.nodes
    z = 1.0 + 1j * t / (2.0 * width**2)
    xc = center + momentum * t
    psi = z**-0.5 * np.exp(-((x - xc) ** 2) / (4.0 * width**2 * z)
                           + 1j * momentum * (x - xc) + 0.5j * momentum**2 * t)
    psi = psi / np.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx)
    return SpinorField(grid, alpha * psi, beta * psi, time=t)


@pytest.fixture
def grid512():
    return Grid1D(-16.0, 16.0, 512)
