import numpy as np
import pytest

#: (alpha, rho) pairs of the approximation figure, on [0, 0.5]
FIGURE1_PAIRS = [(0.1, 2.3), (0.9, 0.2), (1.5, 0.8), (2.4, 0.1)]
#: (alpha, rho) pairs of the integral equation figure, on [0, 0.5]
FIGURE2_PAIRS = [(3.5, 1.5), (1.8, 2.1), (3.3, 1.9), (1.4, 1.0)]


@pytest.fixture
def rng():
    return np.random.default_rng(seed=42)


_acceptance_lines: list[str] = []


@pytest.fixture
def report():
    """Record one pass/fail line for an acceptance criterion."""

    def record(number: int, title: str, failures: list[str], detail: str = "") -> None:
        status = "PASS" if not failures else "FAIL"
        line = f"criterion {number} {status}: {title}"
        if detail:
            line += f" ({detail})"
        if failures:
            line += "; " + "; ".join(failures[:5])
        _acceptance_lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
