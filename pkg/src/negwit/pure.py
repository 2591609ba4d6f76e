"""Entanglement of bipartite pure states from their amplitude matrix.

A state ``|psi> = sum_nm c_nm |n m>`` is held as the ``d x d`` matrix
``C = (c_nm)``.  The central quantity is the determinant witness

    N_a = 1/2 sum_{n != m} |c_nn c_mm - c_nm c_mn|,   LN_a = log2(1 + 2 N_a),

which needs no eigenvalues.  It is compared against the exact Log
Negativity from the spectrum of the partial transpose, the Schmidt-form
Log Negativity, and the linear entropy.  All logarithms are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_eigenvalues
from .states import DensityMatrix, PureState

__all__ = [
    "NEGATIVE_EIGENVALUE_EPS",
    "COHERENT_TAIL_LIMIT",
    "WitnessReport",
    "make_pure",
    "diagonal_state",
    "product_state",
    "bell_state",
    "nmmn_superposition",
    "coherent_coeffs",
    "symmetric_product_superposition",
    "pure_density",
    "partial_transpose",
    "log_negativity",
    "ln_exact",
    "negativity_components",
    "determinant_terms",
    "ln_approx",
    "ln_variation",
    "schmidt_spectrum",
    "ln_schmidt",
    "linear_entropy",
    "amplitude_purity",
    "two_qubit_pt_spectrum",
    "witness_report",
]

NEGATIVE_EIGENVALUE_EPS = 1e-10
COHERENT_TAIL_LIMIT = 0.01


def _amplitudes(state) -> np.ndarray:
    if isinstance(state, PureState):
        return state.amplitudes
    return make_pure(state).amplitudes


def log_negativity(negativity: float) -> float:
    return math.log2(1.0 + 2.0 * negativity)


# -- constructors -----------------------------------------------------------


def make_pure(raw) -> PureState:
    """Normalise a square amplitude matrix to ``Tr[C C^dagger] = 1``."""
    c = np.asarray(raw, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"amplitudes must be square, got shape {c.shape}")
    norm = np.linalg.norm(c)
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("cannot normalise a zero (or non-finite) amplitude matrix")
    return PureState(c / norm)


def diagonal_state(coeffs) -> PureState:
    """``sum_n c_n |n n>``, normalised."""
    coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
    return make_pure(np.diag(coeffs))


def product_state(a, b) -> PureState:
    """``|a> (x) |b>``: amplitudes ``c_nm = a_n b_m``."""
    return make_pure(np.outer(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)))


def bell_state(d: int) -> PureState:
    """Maximally entangled state with ``C = I / sqrt(d)``."""
    return make_pure(np.eye(d))


def nmmn_superposition(d: int, coeffs) -> PureState:
    """Superposition ``sum c_nm (|nm> + |mn>) / sqrt(2)`` over pairs ``n != m``.

    ``coeffs`` maps ``(n, m)`` to a complex weight.
    """
    if not coeffs:
        raise ValueError("need at least one (n, m) coefficient")
    c = np.zeros((d, d), dtype=complex)
    for (n, m), value in coeffs.items():
        if n == m:
            raise ValueError(f"NmmN pair needs n != m, got ({n}, {m})")
        if not (0 <= n < d and 0 <= m < d):
            raise IndexError(f"pair ({n}, {m}) out of range for d={d}")
        c[n, m] += value / math.sqrt(2)
        c[m, n] += value / math.sqrt(2)
    return make_pure(c)


def coherent_coeffs(beta: complex, M: int) -> np.ndarray:
    """Fock amplitudes ``beta^n / sqrt(n!) exp(-|beta|^2 / 2)`` for ``n <= M``.

    The truncated vector is renormalised.  Raises ``ValueError`` when the
    probability mass beyond ``M`` exceeds ``COHERENT_TAIL_LIMIT``.
    """
    if M < 0:
        raise ValueError("cutoff M must be >= 0")
    beta = complex(beta)
    c = np.empty(M + 1, dtype=complex)
    c[0] = math.exp(-abs(beta) ** 2 / 2)
    for n in range(1, M + 1):
        c[n] = c[n - 1] * beta / math.sqrt(n)
    tail = max(0.0, 1.0 - float(np.sum(np.abs(c) ** 2)))
    if tail > COHERENT_TAIL_LIMIT:
        raise ValueError(
            f"coherent state |beta|={abs(beta):g} loses {tail:.3g} probability beyond M={M}"
        )
    return c / np.linalg.norm(c)


def symmetric_product_superposition(psi, phi) -> PureState:
    """``N (|psi>|phi> + |phi>|psi>) / sqrt(2)`` with ``N = (1 + |<psi|phi>|^2)^(-1/2)``."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if psi.shape != phi.shape:
        raise ValueError("psi and phi must have the same length")
    for name, v in (("psi", psi), ("phi", phi)):
        if abs(np.linalg.norm(v) - 1.0) > 1e-10:
            raise ValueError(f"{name} must be a unit vector")
    overlap = np.vdot(psi, phi)
    norm = 1.0 / math.sqrt(1.0 + abs(overlap) ** 2)
    c = norm * (np.outer(psi, phi) + np.outer(phi, psi)) / math.sqrt(2)
    return make_pure(c)


def pure_density(state: PureState) -> DensityMatrix:
    """``|psi><psi|`` on the row-major ``d^2`` basis, tagged with split ``d``."""
    v = _amplitudes(state).reshape(-1)
    return DensityMatrix(np.outer(v, v.conj()), state.d if isinstance(state, PureState) else None)


# -- exact oracle -----------------------------------------------------------


def partial_transpose(rho, d: int | None = None) -> np.ndarray:
    """Transpose on subsystem b: ``out[(n,m),(n',m')] = rho[(n,m'),(n',m)]``."""
    if d is None and isinstance(rho, DensityMatrix):
        d = rho.require_split()
    r = np.asarray(rho)
    if d is None or r.ndim != 2 or r.shape != (d * d, d * d):
        raise ValueError(f"matrix of shape {r.shape} is not (d^2, d^2) for d={d}")
    return r.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)


def ln_exact(rho, d: int | None = None, method: str = "auto") -> tuple[float, float]:
    """Exact negativity and Log Negativity from the partial-transpose spectrum.

    ``rho`` may be a :class:`DensityMatrix`, a :class:`PureState` or a raw
    ``d^2 x d^2`` array.  Eigenvalues below ``-NEGATIVE_EIGENVALUE_EPS``
    count towards the negativity.
    """
    if isinstance(rho, PureState):
        rho = pure_density(rho)
    spectrum = hermitian_eigenvalues(partial_transpose(rho, d), method=method)
    negative = spectrum[spectrum < -NEGATIVE_EIGENVALUE_EPS]
    negativity = float(-negative.sum()) if negative.size else 0.0
    return negativity, log_negativity(negativity)


# -- amplitude witnesses ----------------------------------------------------


def determinant_terms(state) -> np.ndarray:
    """Matrix of 2x2 minors ``c_nn c_mm - c_nm c_mn`` (zero on the diagonal)."""
    c = _amplitudes(state)
    diag = np.diag(c)
    terms = np.outer(diag, diag) - c * c.T
    np.fill_diagonal(terms, 0.0)
    return terms


def negativity_components(state) -> tuple[float, float]:
    """Diagonal-pair and NmmN-pair contributions.

    Returns ``(1/2 sum_{n!=m} |c_nn c_mm|, 1/2 sum_{n!=m} |c_nm c_mn|)``.
    """
    c = _amplitudes(state)
    diag = np.abs(np.diag(c))
    off = ~np.eye(c.shape[0], dtype=bool)
    n1 = 0.5 * float(np.sum(np.outer(diag, diag)[off]))
    n2 = 0.5 * float(np.sum(np.abs(c * c.T)[off]))
    return n1, n2


def ln_approx(state) -> tuple[float, float]:
    """Determinant witness ``(N_a, LN_a)``; zero on product states."""
    negativity = 0.5 * float(np.sum(np.abs(determinant_terms(state))))
    return negativity, log_negativity(negativity)


def ln_variation(state, form: str = "trace_square") -> float:
    """Trace-only variant ``log2(1 + |(Tr C)^2 - Tr[C^2]|)``.

    ``(Tr C)^2 - Tr[C^2]`` is twice the signed sum of the determinant terms,
    so this never exceeds :func:`ln_approx`.  ``form="trace_modulus"``
    evaluates ``|Tr C Tr C^dagger - Tr[C C^dagger]|`` instead; the two agree
    whenever ``C`` is Hermitian.
    """
    c = _amplitudes(state)
    tr = np.trace(c)
    if form == "trace_square":
        value = tr * tr - np.trace(c @ c)
    elif form == "trace_modulus":
        value = tr * np.conj(tr) - np.vdot(c, c)
    else:
        raise ValueError(f"unknown form {form!r}")
    return math.log2(1.0 + abs(value))


# -- Schmidt-based baselines ------------------------------------------------


def schmidt_spectrum(state) -> np.ndarray:
    """Schmidt weights: eigenvalues of ``C C^dagger``, descending, clipped at 0."""
    c = _amplitudes(state)
    sigmas = hermitian_eigenvalues(c @ c.conj().T)[::-1]
    if sigmas[-1] < -1e-12:
        raise ValueError(f"C C^dagger has eigenvalue {sigmas[-1]:.3e} < 0")
    return np.clip(sigmas, 0.0, None)


def ln_schmidt(state) -> float:
    """``log2((sum_n sqrt(sigma_n))^2)`` from the Schmidt weights."""
    return math.log2(float(np.sum(np.sqrt(schmidt_spectrum(state)))) ** 2)


def linear_entropy(state) -> float:
    """``1 - Tr[rho_a^2]`` with ``rho_a = C C^dagger``."""
    c = _amplitudes(state)
    rho_a = c @ c.conj().T
    return 1.0 - float(np.real(np.vdot(rho_a, rho_a)))


def two_qubit_pt_spectrum(state) -> tuple[float, float, float, float]:
    """Closed-form partial-transpose eigenvalues of a two-qubit pure state.

    ``lam1 = |c00 c11 - c01 c10| = -lam2`` and
    ``lam_pm = (1 +- sqrt(1 - 4 lam1^2)) / 2``; returned as
    ``(lam1, lam2, lam_plus, lam_minus)``.
    """
    c = _amplitudes(state)
    if c.shape != (2, 2):
        raise ValueError("two-qubit closed form needs d = 2")
    lam1 = abs(c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0])
    root = math.sqrt(max(0.0, 1.0 - 4.0 * lam1 * lam1))
    return lam1, -lam1, 0.5 * (1.0 + root), 0.5 * (1.0 - root)


def amplitude_purity(state) -> float:
    """Purity of the amplitudes as a density matrix, ``Tr[C C^dagger] / |Tr C|^2``.

    This is ``Tr[rho^2]`` for ``rho = C / Tr C``; for positive Hermitian ``C``
    it lies in ``[1/d, 1]`` and ``LN_e = -log2`` of it.  For general ``C`` it
    is unbounded above, and ``inf`` when ``Tr C = 0``.
    """
    c = _amplitudes(state)
    tr2 = abs(np.trace(c)) ** 2
    fro2 = float(np.real(np.vdot(c, c)))
    return fro2 / tr2 if tr2 > 0 else math.inf


@dataclass(frozen=True)
class WitnessReport:
    """All pure-state measures evaluated on one normalised amplitude matrix.

    ``purity_of_C`` is :func:`amplitude_purity`, the purity of ``C`` read as
    a density matrix.  The purity of the reduced state ``C C^dagger`` is
    ``1 - linear_entropy``.
    """

    ln_exact: float
    ln_approx: float
    ln_variation: float
    linear_entropy: float
    purity_of_C: float
    negativity_exact: float
    negativity_approx: float

    @property
    def diff_exact_minus_approx(self) -> float:
        return self.ln_exact - self.ln_approx


def witness_report(state, method: str = "auto") -> WitnessReport:
    state = state if isinstance(state, PureState) else make_pure(state)
    neg_e, ln_e = ln_exact(pure_density(state), state.d, method=method)
    neg_a, ln_a = ln_approx(state)
    le = linear_entropy(state)
    return WitnessReport(
        ln_exact=ln_e,
        ln_approx=ln_a,
        ln_variation=ln_variation(state),
        linear_entropy=le,
        purity_of_C=amplitude_purity(state),
        negativity_exact=neg_e,
        negativity_approx=neg_a,
    )
