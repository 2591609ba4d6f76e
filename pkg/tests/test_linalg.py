import itertools

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from negwit.linalg import (
    ConvergenceError,
    RankDeficiencyError,
    dagger,
    flatten_index,
    hermitian_eigenvalues,
    jacobi_eigenvalues,
    matmul,
    purity,
    qr_phase_corrected,
    trace,
    unflatten_index,
)


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def loop_matmul(a, b):
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            for k in range(a.shape[1]):
                out[i, j] += a[i, k] * b[k, j]
    return out


def test_matmul_matches_triple_loop():
    # [DERIVED] oracle: explicit index sums
    rng = np.random.default_rng(1)
    a = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    b = rng.standard_normal((4, 2)) - 1j * rng.standard_normal((4, 2))
    assert np.allclose(matmul(a, b), loop_matmul(a, b), atol=1e-14)
    with pytest.raises(ValueError):
        matmul(a, a)


def test_dagger_trace_purity():
    a = np.array([[1, 2j], [3, 4 - 1j]])
    assert np.array_equal(dagger(a), np.array([[1, 3], [-2j, 4 + 1j]]))
    assert trace(a) == 5 - 1j
    rho = np.diag([0.75, 0.25]).astype(complex)
    assert purity(rho) == pytest.approx(0.625, abs=1e-15)
    with pytest.raises(ValueError):
        trace(np.ones((2, 3)))


@pytest.mark.parametrize("method", ["jacobi", "lapack"])
def test_two_by_two_closed_form(method):
    # [DERIVED] eigenvalues of [[a, b], [b*, c]]: (a+c)/2 +- sqrt(((a-c)/2)^2 + |b|^2)
    a, c, b = 0.3, -1.2, 0.4 - 0.7j
    h = np.array([[a, b], [np.conj(b), c]])
    mid, rad = (a + c) / 2, np.hypot((a - c) / 2, abs(b))
    assert np.allclose(hermitian_eigenvalues(h, method), [mid - rad, mid + rad], atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5, 8, 17, 30])
def test_jacobi_matches_lapack(n):
    h = random_hermitian(n, n)
    ref = scipy.linalg.eigh(h, eigvals_only=True)
    assert np.allclose(jacobi_eigenvalues(h), ref, atol=1e-11 * max(1, np.abs(ref).max()))


def test_jacobi_degenerate_and_diagonal():
    h = np.diag([3.0, -1.0, 3.0, 0.0]).astype(complex)
    assert np.array_equal(jacobi_eigenvalues(h), [-1.0, 0.0, 3.0, 3.0])
    # rank-one projector: eigenvalues {0, 0, 0, 1}
    v = np.array([1, 1j, -1, 0.5]) / np.sqrt(3.25)
    vals = hermitian_eigenvalues(np.outer(v, v.conj()), "jacobi")
    assert np.allclose(vals, [0, 0, 0, 1], atol=1e-14)


def test_jacobi_nonconvergence_raises():
    with pytest.raises(ConvergenceError):
        jacobi_eigenvalues(random_hermitian(6, 0), max_sweeps=1)


def test_non_hermitian_rejected():
    with pytest.raises(ValueError, match="not Hermitian"):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        hermitian_eigenvalues(np.ones((2, 3)))
    with pytest.raises(ValueError):
        hermitian_eigenvalues(np.eye(2), method="magic")


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_eigen_invariants(n, seed):
    h = random_hermitian(n, seed)
    vals = hermitian_eigenvalues(h)
    assert np.all(np.diff(vals) >= 0)
    assert vals.sum() == pytest.approx(np.trace(h).real, abs=1e-10)
    assert np.dot(vals, vals) == pytest.approx(np.linalg.norm(h) ** 2, rel=1e-10)


def test_qr_phase_corrected_reference():
    q, r = qr_phase_corrected(np.diag([-2.0, 3.0]))
    assert np.allclose(q, np.diag([-1.0, 1.0]))
    assert np.allclose(r, np.diag([2.0, 3.0]))


@pytest.mark.parametrize("n", [1, 3, 8])
def test_qr_phase_corrected_properties(n):
    rng = np.random.default_rng(n)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = qr_phase_corrected(z)
    assert np.allclose(q @ r, z, atol=1e-12)
    assert np.allclose(q.conj().T @ q, np.eye(n), atol=1e-12)
    assert np.allclose(np.tril(r, -1), 0)
    diag = np.diag(r)
    assert np.all(diag.real > 0) and np.allclose(diag.imag, 0)


def test_qr_rank_deficient():
    with pytest.raises(RankDeficiencyError):
        qr_phase_corrected(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_flatten_round_trip_exhaustive():
    # [DERIVED] row-major k = n d + m, checked against itertools.product order
    for d in (1, 2, 3, 8):
        for k, (n, m) in enumerate(itertools.product(range(d), repeat=2)):
            assert flatten_index(n, m, d) == k
            assert unflatten_index(k, d) == (n, m)
    with pytest.raises(IndexError):
        flatten_index(2, 0, 2)
    with pytest.raises(IndexError):
        unflatten_index(4, 2)
