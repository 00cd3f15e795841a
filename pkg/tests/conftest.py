"""Shared fixtures and the acceptance summary printed after the run."""

from __future__ import annotations

import pytest

from quillen_gl3.curve import EllipticCurve
from quillen_gl3.graph import build_parabolic_graph

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}

REFERENCE = (11, (1, 8), 5)


@pytest.fixture(scope="session")
def ref_curve() -> EllipticCurve:
    q, coeffs, _ = REFERENCE
    return EllipticCurve.from_coefficients(q, coeffs)


@pytest.fixture(scope="session")
def ref_graph(ref_curve):
    return build_parabolic_graph(ref_curve, REFERENCE[2])


@pytest.fixture(scope="session")
def rank_one_graph():
    return build_parabolic_graph(EllipticCurve.from_coefficients(11, (1, 10)), 5)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
