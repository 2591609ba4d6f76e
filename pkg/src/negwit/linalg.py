"""Dense complex linear algebra used by the witnesses and samplers.

Matrices are plain ``numpy.ndarray`` objects (complex128 unless noted).
The Hermitian eigensolver has two engines: a cyclic Jacobi solver written
here, and LAPACK (``numpy.linalg.eigvalsh``) for large problems. Both are
checked against the same trace / Frobenius invariants on every call.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ConvergenceError",
    "RankDeficiencyError",
    "matmul",
    "dagger",
    "trace",
    "purity",
    "hermitian_eigenvalues",
    "jacobi_eigenvalues",
    "qr_phase_corrected",
    "flatten_index",
    "unflatten_index",
]

HERMITICITY_RTOL = 1e-10
JACOBI_MAX_SWEEPS = 100
JACOBI_RTOL = 1e-12
INVARIANT_RTOL = 1e-9
# auto mode hands anything larger than this to LAPACK
JACOBI_AUTO_MAX_DIM = 8


class ConvergenceError(RuntimeError):
    """Raised when an iterative eigensolver fails to converge."""


class RankDeficiencyError(ValueError):
    """Raised when a QR factorisation meets a (numerically) singular input."""


def _as_matrix(a, name="a"):
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"{name} must be a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def _as_square(a, name="a"):
    a = _as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def matmul(a, b):
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def dagger(a):
    """Conjugate transpose."""
    return _as_matrix(a).conj().T


def trace(a) -> complex:
    a = _as_square(a)
    return complex(np.trace(a))


def purity(rho) -> float:
    """Return ``Re Tr[rho @ rho]``.

    For a Hermitian ``rho`` this equals the squared Frobenius norm, which is
    what is computed (it avoids forming the product).
    """
    rho = _as_square(rho, "rho")
    return float(np.real(np.vdot(rho.conj().T, rho)))


def _hermitize(h):
    h = _as_square(h, "h")
    scale = np.max(np.abs(h)) if h.size else 0.0
    skew = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if skew > HERMITICITY_RTOL * scale:
        raise ValueError(
            f"matrix is not Hermitian: max|h - h^dagger| = {skew:.3e} "
            f"exceeds {HERMITICITY_RTOL:g} * max|h| = {HERMITICITY_RTOL * scale:.3e}"
        )
    return (h + h.conj().T) / 2


def _off_diagonal_norm(a):
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return np.linalg.norm(off)


def jacobi_eigenvalues(h, max_sweeps=JACOBI_MAX_SWEEPS, rtol=JACOBI_RTOL):
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each pivot ``(p, q)`` is first rotated to a real off-diagonal element by a
    diagonal phase, then annihilated by the classical real rotation.  Sweeps
    stop once the off-diagonal Frobenius mass drops below
    ``rtol * ||h||_F``.

    Returns
    -------
    numpy.ndarray
        Real eigenvalues in ascending order.

    Raises
    ------
    ConvergenceError
        If ``max_sweeps`` sweeps do not reach the threshold.
    """
    a = np.array(_hermitize(h), dtype=complex)
    n = a.shape[0]
    norm = np.linalg.norm(a)
    if n <= 1 or norm == 0.0:
        return np.sort(np.real(np.diag(a)))
    tol = rtol * norm
    for _ in range(max_sweeps):
        off = _off_diagonal_norm(a)
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                w = np.conj(apq) / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - s * w * col_q
                a[:, q] = s * col_p + c * w * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - s * np.conj(w) * row_q
                a[q, :] = s * row_p + c * np.conj(w) * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        off = _off_diagonal_norm(a)
        if off > tol:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})"
            )
    return np.sort(np.real(np.diag(a)))


def _check_invariants(h, values):
    tr = float(np.real(np.trace(h)))
    fro2 = float(np.real(np.vdot(h, h)))
    if abs(values.sum() - tr) > INVARIANT_RTOL * max(1.0, abs(tr), np.sqrt(fro2)):
        raise ConvergenceError("eigenvalue sum disagrees with the trace")
    if abs(np.dot(values, values) - fro2) > INVARIANT_RTOL * max(1.0, fro2):
        raise ConvergenceError("eigenvalue squares disagree with the Frobenius norm")


def hermitian_eigenvalues(h, method="auto"):
    """All eigenvalues of a Hermitian matrix, ascending.

    Parameters
    ----------
    h : array_like
        Square matrix, Hermitian to within ``1e-10 * max|h|``; it is
        symmetrised before solving.
    method : {"auto", "jacobi", "lapack"}
        ``auto`` uses Jacobi up to dimension 8 and LAPACK above.

    Raises
    ------
    ValueError
        Non-square or non-Hermitian input.
    ConvergenceError
        Non-convergence, or a spectrum that fails the trace/Frobenius check.
    """
    herm = _hermitize(h)
    n = herm.shape[0]
    if method == "auto":
        method = "jacobi" if n <= JACOBI_AUTO_MAX_DIM else "lapack"
    if method == "jacobi":
        values = jacobi_eigenvalues(herm)
    elif method == "lapack":
        try:
            values = np.linalg.eigvalsh(herm)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(str(exc)) from exc
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")
    _check_invariants(herm, values)
    return values


def qr_phase_corrected(z):
    """QR factorisation made unique by a positive real diagonal on ``r``.

    With ``z = q r`` from Householder QR, the diagonal phases
    ``lam_i = r_ii / |r_ii|`` are moved from ``r`` into ``q``
    (``q <- q lam``, ``r <- lam^-1 r``).  Real input stays real.

    Raises
    ------
    RankDeficiencyError
        If some ``|r_ii|`` is below ``1e-12 * ||z||_F``.
    """
    z = _as_square(z, "z")
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    mag = np.abs(diag)
    if np.any(mag < 1e-12 * np.linalg.norm(z)) or np.any(mag == 0.0):
        raise RankDeficiencyError("matrix is numerically rank deficient")
    lam = diag / mag
    q = q * lam
    r = np.conj(lam)[:, None] * r
    r[np.diag_indices_from(r)] = mag
    return q, r


def flatten_index(n: int, m: int, d: int) -> int:
    """Row-major position of the pair ``(n, m)`` in a ``d*d`` vector."""
    if not (0 <= n < d and 0 <= m < d):
        raise IndexError(f"({n}, {m}) out of range for d={d}")
    return n * d + m


def unflatten_index(k: int, d: int) -> tuple[int, int]:
    if not 0 <= k < d * d:
        raise IndexError(f"{k} out of range for d={d}")
    return divmod(k, d)
