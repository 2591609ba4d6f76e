"""Mixed bipartite states: matrix-element witness, Werner states, ensembles.

The mixed witness replaces the pure-state minors by density-matrix
elements, ``N_a = 1/2 sum_{n != m} |rho_{nn,mm} - rho_{nm,mn}|``, where
``rho_{nm,n'm'}`` is the element between ``|n m>`` and ``|n' m'>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import AmplitudeClass, RngStream, sample_amplitudes, weyl_diagonal
from .pure import ln_approx, ln_exact, log_negativity, make_pure, pure_density
from .states import DensityMatrix, PureState

__all__ = [
    "PsdEnsemble",
    "WernerAnalytics",
    "ln_exact_mixed",
    "ln_approx_mixed",
    "ln_approx_mixed_sym",
    "werner_state",
    "werner_analytics",
    "werner_two_component",
    "werner_separable_terms",
    "separable_mixture",
    "psd_sample",
    "psd_to_density",
    "avg_ln",
    "average_ln_mixture",
]


def _split(rho: DensityMatrix) -> tuple[np.ndarray, int]:
    d = rho.require_split()
    return rho.matrix.reshape(d, d, d, d), d


def _witness_elements(rho):
    """Return ``(X, Y)`` with ``X[n, m] = rho_{nn,mm}`` and ``Y[n, m] = rho_{nm,mn}``."""
    r, d = _split(rho)
    n, m = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return r[n, n, m, m], r[n, m, m, n]


def ln_exact_mixed(rho: DensityMatrix, method: str = "auto") -> tuple[float, float]:
    """Exact ``(negativity, LN)`` of a bipartite density matrix."""
    d = rho.require_split()
    return ln_exact(rho, d, method=method)


def ln_approx_mixed(rho: DensityMatrix) -> tuple[float, float]:
    x, y = _witness_elements(rho)
    terms = np.abs(x - y)
    np.fill_diagonal(terms, 0.0)
    negativity = 0.5 * float(terms.sum())
    return negativity, log_negativity(negativity)


def ln_approx_mixed_sym(rho: DensityMatrix) -> tuple[float, float]:
    """Symmetrised witness ``1/2 sum |(X + X^T)/2 - (Y + Y^T)/2|``.

    For a valid (Hermitian) ``rho`` this is ``|Re(X - Y)|`` termwise, which
    vanishes on separable mixtures where each term has a real factor.
    """
    x, y = _witness_elements(rho)
    terms = np.abs(0.5 * (x + x.T) - 0.5 * (y + y.T))
    np.fill_diagonal(terms, 0.0)
    negativity = 0.5 * float(terms.sum())
    return negativity, log_negativity(negativity)


# -- Werner states ----------------------------------------------------------


def _check_werner(d, p):
    if int(d) != d or d < 2:
        raise ValueError("Werner dimension d must be an integer >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner probability p={p!r} outside [0, 1]")


def werner_state(d: int, p: float) -> DensityMatrix:
    """``p |Bell><Bell| + (1 - p) I / d^2`` with ``|Bell> = sum_n |nn> / sqrt(d)``."""
    _check_werner(d, p)
    bell = np.eye(d).reshape(-1) / math.sqrt(d)
    rho = p * np.outer(bell, bell) + (1.0 - p) * np.eye(d * d) / (d * d)
    return DensityMatrix(rho.astype(complex), d)


@dataclass(frozen=True)
class WernerAnalytics:
    d: int
    p: float
    lambda_minus: float
    multiplicity: int
    negativity_exact: float
    ln_exact: float
    negativity_approx: float
    ln_approx: float
    purity: float
    p_star: float
    mu_star: float


def werner_analytics(d: int, p: float) -> WernerAnalytics:
    """Closed-form spectrum, negativities and purity of a Werner state.

    The partial transpose has the eigenvalue ``(1 - (d + 1) p) / d^2`` with
    multiplicity ``d (d - 1) / 2``; it is negative only above
    ``p* = 1 / (d + 1)``, below which the exact negativity is zero.  The
    purity is ``(1 + (d^2 - 1) p^2) / d^2``, which is ``2 / (d (d + 1))`` at
    ``p*``.
    """
    _check_werner(d, p)
    p_star = 1.0 / (d + 1)
    lam = (1.0 - (d + 1) * p) / d**2
    neg_e = 0.5 * (d - 1) / d * ((d + 1) * p - 1.0) if p > p_star else 0.0
    neg_a = p * (d - 1) / 2
    return WernerAnalytics(
        d=d,
        p=p,
        lambda_minus=lam,
        multiplicity=d * (d - 1) // 2,
        negativity_exact=neg_e,
        ln_exact=log_negativity(neg_e),
        negativity_approx=neg_a,
        ln_approx=log_negativity(neg_a),
        purity=(1.0 + (d * d - 1) * p * p) / d**2,
        p_star=p_star,
        mu_star=2.0 / (d * (d + 1)),
    )


def werner_two_component(d: int, p: float) -> list[tuple[float, DensityMatrix]]:
    """Werner state as the mixture ``[(p, Bell projector), (1 - p, I / d^2)]``."""
    _check_werner(d, p)
    return [(p, werner_state(d, 1.0)), (1.0 - p, werner_state(d, 0.0))]


def werner_separable_terms(p: float) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """Product-state decomposition of the two-qubit Werner state for ``p <= 1/3``.

    Returns ``(weight, rho_a, rho_b)`` triples: the identity remainder plus
    the Z, X and Y basis pairs ``|00>,|11>``, ``|++>,|-->`` and
    ``|y+ y->,|y- y+>``, each pair with weight ``p / 2``.  The Y pair has
    both factors complex.
    """
    if not 0.0 <= p <= 1.0 / 3.0 + 1e-15:
        raise ValueError("the separable decomposition needs 0 <= p <= 1/3")
    s = 1 / math.sqrt(2)
    kets = {
        "0": np.array([1, 0], dtype=complex),
        "1": np.array([0, 1], dtype=complex),
        "+": np.array([s, s], dtype=complex),
        "-": np.array([s, -s], dtype=complex),
        "y+": np.array([s, 1j * s]),
        "y-": np.array([s, -1j * s]),
    }
    proj = {k: np.outer(v, v.conj()) for k, v in kets.items()}
    half = np.eye(2, dtype=complex) / 2
    terms = [(1.0 - 3.0 * p, half, half)]
    for a, b in (("0", "0"), ("1", "1"), ("+", "+"), ("-", "-"), ("y+", "y-"), ("y-", "y+")):
        terms.append((p / 2, proj[a], proj[b]))
    return terms


def separable_mixture(parts) -> DensityMatrix:
    """``sum_i p_i rho_a^(i) (x) rho_b^(i)`` from ``(p_i, rho_a, rho_b)`` triples."""
    parts = list(parts)
    if not parts:
        raise ValueError("separable mixture needs at least one term")
    weights = np.array([float(w) for w, _, _ in parts])
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be nonnegative and sum to 1")
    d = np.asarray(parts[0][1]).shape[0]
    total = np.zeros((d * d, d * d), dtype=complex)
    for w, rho_a, rho_b in parts:
        rho_a = np.asarray(rho_a, dtype=complex)
        rho_b = np.asarray(rho_b, dtype=complex)
        if rho_a.shape != (d, d) or rho_b.shape != (d, d):
            raise ValueError("all factors must be d x d with a common d")
        total += w * np.kron(rho_a, rho_b)
    return DensityMatrix(total, d)


# -- pure-state decompositions ----------------------------------------------


@dataclass(frozen=True, eq=False)
class PsdEnsemble:
    """Weighted pure states ``{(p_i, psi_i)}`` of a common dimension."""

    weights: tuple[float, ...]
    states: tuple[PureState, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        states = tuple(self.states)
        if len(weights) != len(states) or not states:
            raise ValueError("need one weight per state and at least one state")
        if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        if len({s.d for s in states}) != 1:
            raise ValueError("all states must share the same dimension")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "states", states)

    @property
    def d(self) -> int:
        return self.states[0].d


def psd_sample(d: int, k: int, cls, rng: RngStream) -> PsdEnsemble:
    """``k`` amplitude-class pure states with Weyl-simplex weights."""
    if k < 1:
        raise ValueError("k must be >= 1")
    cls = AmplitudeClass.parse(cls)
    weights = weyl_diagonal(k, rng)
    weights = weights / weights.sum()
    states = [make_pure(sample_amplitudes(cls, d, rng)) for _ in range(k)]
    return PsdEnsemble(tuple(weights), tuple(states))


def psd_to_density(ens: PsdEnsemble) -> DensityMatrix:
    d = ens.d
    rho = np.zeros((d * d, d * d), dtype=complex)
    for w, state in zip(ens.weights, ens.states):
        v = state.vector()
        rho += w * np.outer(v, v.conj())
    return DensityMatrix((rho + rho.conj().T) / 2, d)


def avg_ln(ens: PsdEnsemble, measure: str = "approx_pure") -> float:
    """Weighted average of a pure-state Log Negativity over the ensemble.

    ``measure`` is ``"exact"`` (partial-transpose spectrum of each
    component) or ``"approx_pure"`` (determinant witness of each component).
    """
    if measure == "exact":
        values = [ln_exact(pure_density(s), s.d)[1] for s in ens.states]
    elif measure == "approx_pure":
        values = [ln_approx(s)[1] for s in ens.states]
    else:
        raise ValueError(f"unknown measure {measure!r}")
    return float(np.dot(ens.weights, values))


def average_ln_mixture(parts, measure: str = "exact") -> float:
    """``sum_i p_i LN(rho_i)`` for a mixture given as ``(p_i, DensityMatrix)``.

    ``measure`` is ``"exact"`` or ``"approx"`` (the mixed witness).
    """
    if measure == "exact":
        fn = ln_exact_mixed
    elif measure == "approx":
        fn = ln_approx_mixed
    else:
        raise ValueError(f"unknown measure {measure!r}")
    return float(sum(w * fn(rho)[1] for w, rho in parts))
