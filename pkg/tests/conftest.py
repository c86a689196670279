"""Shared fixtures: the benchmark scenario is expensive enough to build once."""

import pytest

import specsmooth as ss

_CRITERION_LINES = []


@pytest.fixture(scope="session")
def criterion():
    """Record one PASS/FAIL summary line per acceptance criterion.

    Returns a callable ``record(number, passed, detail) -> passed`` that
    prints the line immediately and queues it for the terminal summary, so
    the verdicts survive pytest's output capturing.
    """

    def record(number: int, passed: bool, detail: str) -> bool:
        line = f"criterion {number:02d}: {'PASS' if passed else 'FAIL'} - {detail}"
        _CRITERION_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERION_LINES):
            terminalreporter.line(line)


@pytest.fixture(scope="session")
def benchmark():
    """The standard 8192-channel synthetic scenario, seed 42."""
    return ss.benchmark_scenario()


@pytest.fixture(scope="session")
def benchmark_smoothed(benchmark):
    """Default-config spline smoothing of the benchmark noisy spectrum:
    (smoothed spectrum, refinement trace)."""
    return ss.smooth(benchmark.noisy)


@pytest.fixture(scope="session")
def benchmark_wavg3(benchmark):
    """The 3-point weighted average iterated 5000 times on the benchmark."""
    return ss.convolve_smooth(
        benchmark.noisy, ss.builtin_kernel("wavg3"), iterations=5000
    )
