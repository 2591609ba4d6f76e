"""Seeded random matrices: Ginibre, Haar unitaries, random density matrices.

Every sampler takes an explicit :class:`RngStream`.  Streams are PCG64
generators keyed by ``(seed, *stream_key)`` through ``numpy``'s
``SeedSequence``, so a sweep can hand sample ``i`` the stream
``RngStream(seed, i)`` and get the same draw no matter how the sweep is
scheduled.
"""

from __future__ import annotations

import enum

import numpy as np

from .linalg import RankDeficiencyError, hermitian_eigenvalues, qr_phase_corrected
from .states import DensityMatrix

__all__ = [
    "RNG_ALGORITHM",
    "RngStream",
    "AmplitudeClass",
    "ginibre",
    "real_ginibre",
    "haar_unitary",
    "haar_orthogonal",
    "weyl_diagonal",
    "random_density_matrix",
    "sample_amplitudes",
    "check_amplitude_class",
    "purity_targeted_density",
    "purity_targeted_amplitudes",
    "histogram",
]

RNG_ALGORITHM = "PCG64/SeedSequence-v1"
MAX_QR_ATTEMPTS = 3
EDGE_SNAP = 1e-9


class RngStream:
    """Deterministic random stream identified by a seed and a stream key.

    ``RngStream(seed, 3)`` and ``RngStream(seed, 3)`` produce identical
    sequences; ``RngStream(seed, 3)`` and ``RngStream(seed, 4)`` are
    independent.  ``split`` derives child streams without consuming draws.
    """

    def __init__(self, seed: int, *stream_key: int):
        if not 0 <= int(seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = int(seed)
        self.stream_key = tuple(int(k) for k in stream_key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream_key)
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def split(self, *key: int) -> "RngStream":
        return RngStream(self.seed, *self.stream_key, *key)

    def normal(self, size):
        return self.generator.standard_normal(size)

    def integers(self, high: int) -> int:
        return int(self.generator.integers(high))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_key={self.stream_key})"


class AmplitudeClass(str, enum.Enum):
    POSITIVE_HERMITIAN = "PositiveHermitian"
    HERMITIAN = "Hermitian"
    NORMAL_COMPLEX_DIAG = "NormalComplexDiag"
    ARBITRARY_COMPLEX = "ArbitraryComplex"
    REAL_SYMMETRIC_POSITIVE = "RealSymmetricPositive"

    @classmethod
    def parse(cls, tag) -> "AmplitudeClass":
        if isinstance(tag, cls):
            return tag
        for member in cls:
            if tag in (member.value, member.name, member.value.lower()):
                return member
        raise ValueError(f"unknown amplitude class {tag!r}")


def _check_dim(d):
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def ginibre(d: int, rng: RngStream) -> np.ndarray:
    """``d x d`` matrix of i.i.d. ``(g1 + i g2) / sqrt(2)`` entries."""
    d = _check_dim(d)
    re = rng.normal((d, d))
    im = rng.normal((d, d))
    return (re + 1j * im) / np.sqrt(2.0)


def real_ginibre(d: int, rng: RngStream) -> np.ndarray:
    d = _check_dim(d)
    return rng.normal((d, d))


def _haar_from(draw, d, rng):
    for _ in range(MAX_QR_ATTEMPTS):
        try:
            q, _ = qr_phase_corrected(draw(d, rng))
        except RankDeficiencyError:
            continue
        return q
    raise RankDeficiencyError(f"{MAX_QR_ATTEMPTS} consecutive rank-deficient draws")


def haar_unitary(d: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed unitary from the phase-corrected QR of a Ginibre matrix."""
    return _haar_from(ginibre, d, rng)


def haar_orthogonal(d: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed real orthogonal matrix (real Ginibre + sign-fixed QR)."""
    return _haar_from(real_ginibre, d, rng)


def weyl_diagonal(d: int, rng: RngStream) -> np.ndarray:
    """Point of the probability simplex: ``|row|^2`` of a fresh Haar unitary.

    The row index is itself drawn at random.
    """
    d = _check_dim(d)
    u = haar_unitary(d, rng)
    row = rng.integers(d)
    return np.abs(u[row]) ** 2


def _conjugate(u, diag):
    m = (u * diag) @ u.conj().T
    return (m + m.conj().T) / 2


def random_density_matrix(d: int, rng: RngStream, split: int | None = None) -> DensityMatrix:
    """``U diag(w) U^dagger`` with ``w = weyl_diagonal(d)`` and a fresh Haar ``U``.

    The Weyl diagonal is drawn first, so ``weyl_diagonal(d, same_stream)``
    reproduces the spectrum.  ``split`` tags the result as bipartite.
    """
    w = weyl_diagonal(d, rng)
    u = haar_unitary(d, rng)
    return DensityMatrix(_conjugate(u, w), split)


def sample_amplitudes(cls, d: int, rng: RngStream, check: bool = True) -> np.ndarray:
    """Draw an unnormalised amplitude matrix ``C`` of the requested class.

    ======================  ==============================================
    PositiveHermitian       ``U diag(w) U^dagger``, ``w`` a Weyl diagonal
    NormalComplexDiag       ``U diag(u) U^dagger``, ``u`` a Haar row
    Hermitian               ``(Z + Z^dagger) / 2``, ``Z`` Ginibre
    ArbitraryComplex        ``Z`` Ginibre
    RealSymmetricPositive   ``O diag(w) O^T``, ``O`` Haar orthogonal
    ======================  ==============================================

    With ``check`` the defining property of the class is verified on the
    result (:func:`check_amplitude_class`).
    """
    cls = AmplitudeClass.parse(cls)
    d = _check_dim(d)
    if cls is AmplitudeClass.POSITIVE_HERMITIAN:
        w = weyl_diagonal(d, rng)
        c = _conjugate(haar_unitary(d, rng), w)
    elif cls is AmplitudeClass.NORMAL_COMPLEX_DIAG:
        row = haar_unitary(d, rng)[rng.integers(d)]
        u = haar_unitary(d, rng)
        c = (u * row) @ u.conj().T
    elif cls is AmplitudeClass.HERMITIAN:
        z = ginibre(d, rng)
        c = (z + z.conj().T) / 2
    elif cls is AmplitudeClass.ARBITRARY_COMPLEX:
        c = ginibre(d, rng)
    else:
        w = weyl_diagonal(d, rng)
        o = haar_orthogonal(d, rng)
        c = (o * w) @ o.T
        c = ((c + c.T) / 2).astype(complex)
    if check:
        check_amplitude_class(cls, c)
    return c


def check_amplitude_class(cls, c, atol: float = 1e-10) -> None:
    """Raise ``ValueError`` unless ``c`` has the property named by ``cls``."""
    cls = AmplitudeClass.parse(cls)
    c = np.asarray(c)
    scale = max(1.0, float(np.max(np.abs(c))))
    herm_err = np.max(np.abs(c - c.conj().T))
    if cls in (AmplitudeClass.POSITIVE_HERMITIAN, AmplitudeClass.HERMITIAN,
               AmplitudeClass.REAL_SYMMETRIC_POSITIVE):
        if herm_err > atol * scale:
            raise ValueError(f"{cls.value} sample is not Hermitian ({herm_err:.2e})")
    if cls in (AmplitudeClass.POSITIVE_HERMITIAN, AmplitudeClass.REAL_SYMMETRIC_POSITIVE):
        low = hermitian_eigenvalues(c)[0]
        if low < -atol * scale:
            raise ValueError(f"{cls.value} sample has eigenvalue {low:.2e} < 0")
    if cls is AmplitudeClass.REAL_SYMMETRIC_POSITIVE:
        if np.max(np.abs(c.imag)) > atol * scale:
            raise ValueError("RealSymmetricPositive sample has imaginary entries")
    if cls is AmplitudeClass.NORMAL_COMPLEX_DIAG:
        comm = c @ c.conj().T - c.conj().T @ c
        if np.max(np.abs(comm)) > atol * scale:
            raise ValueError("NormalComplexDiag sample is not normal")


def purity_targeted_density(base: DensityMatrix, eta: float, rng: RngStream) -> DensityMatrix:
    """``(base + eta * sigma) / Tr[base + eta * sigma]`` with Haar-random ``sigma``.

    ``eta = 0`` returns ``base`` itself without consuming draws.  The
    bipartite split of ``base`` carries over.
    """
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    if not isinstance(base, DensityMatrix):
        base = DensityMatrix(base)
    if eta == 0:
        return base
    sigma = random_density_matrix(base.dim, rng).matrix
    rho = base.matrix + eta * sigma
    rho = rho / np.real(np.trace(rho))
    return DensityMatrix((rho + rho.conj().T) / 2, base.d)


def purity_targeted_amplitudes(base, eta: float, rng: RngStream) -> np.ndarray:
    """Unit-Frobenius amplitude matrix deviating from a Hermitian ``base``.

    ``rho = base / sqrt(Tr[base^2]) + eta * sigma`` with ``sigma`` a random
    density matrix, then ``C = rho / sqrt(Tr[rho^2])``.
    """
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    base = np.asarray(base, dtype=complex)
    if np.max(np.abs(base - base.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(base))):
        raise ValueError("base must be Hermitian")
    base_norm = np.linalg.norm(base)
    if base_norm == 0.0:
        raise ValueError("base is the zero matrix")
    rho = base / base_norm
    if eta > 0:
        rho = rho + eta * random_density_matrix(base.shape[0], rng).matrix
    norm = np.linalg.norm(rho)
    if norm == 0.0:
        raise ValueError("deviation cancelled to the zero matrix")
    return rho / norm


def histogram(values, bins: int, value_range) -> list[tuple[float, int]]:
    """Fixed-width histogram as ``(bin_center, count)`` pairs.

    Bin ``k`` is ``[lo + k w, lo + (k + 1) w)`` with the last bin closed at
    ``hi``.  A value's bin is ``floor((x - lo) * bins / (hi - lo))``;
    values outside ``[lo, hi]`` are dropped.
    """
    lo, hi = (float(v) for v in value_range)
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if not lo < hi:
        raise ValueError("range must satisfy lo < hi")
    counts = [0] * bins
    span = hi - lo
    slack = EDGE_SNAP * span
    for x in values:
        x = float(x)
        if not lo - slack <= x <= hi + slack:
            continue
        x = min(max(x, lo), hi)
        k = min(int(np.floor((x - lo) * bins / span)), bins - 1)
        counts[k] += 1
    width = span / bins
    return [(lo + (k + 0.5) * width, counts[k]) for k in range(bins)]
