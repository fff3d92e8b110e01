from fractions import Fraction

import mpmath
import pytest

from besseldiff.numerics import NumericContext


def to_fraction(x) -> Fraction:
    """Exact value of a finite mpmath real."""
    if not hasattr(x, "_mpf_"):
        x = mpmath.mpf(x)
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    return (-1) ** sign * Fraction(man) * Fraction(2) ** exp


@pytest.fixture(scope="session")
def ctx():
    return NumericContext(256)


@pytest.fixture(scope="session")
def hi_ctx():
    return NumericContext(1024)


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    grouped = {}
    for name, outcome, duration in _acceptance:
        entry = grouped.setdefault(name.split("[")[0], [True, 0, 0.0])
        entry[0] &= outcome == "passed"
        entry[1] += 1
        entry[2] += duration
    terminalreporter.section("acceptance criteria")
    for name, (ok, cases, duration) in grouped.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({cases} case{'s' * (cases > 1)}, {duration:.1f} s)")
