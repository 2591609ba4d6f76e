import numpy as np
import pytest

from negwit.ensembles import RngStream, haar_orthogonal, random_density_matrix, weyl_diagonal


def random_separable_parts(d, k, rng: RngStream):
    """``k`` product terms ``(p, rho_a, rho_b)`` with one real factor each.

    The real factor is ``O diag(w) O^T``; which side gets it alternates.
    """
    weights = weyl_diagonal(k, rng)
    weights = weights / weights.sum()
    parts = []
    for i, w in enumerate(weights):
        o = haar_orthogonal(d, rng)
        real = ((o * weyl_diagonal(d, rng)) @ o.T).astype(complex)
        other = random_density_matrix(d, rng).matrix
        parts.append((w, real, other) if i % 2 == 0 else (w, other, real))
    return parts


@pytest.fixture
def separable_parts():
    return random_separable_parts


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record (and print) one pass/fail line per acceptance criterion."""

    def record(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
