"""Value types for bipartite pure states and density matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["PureState", "DensityMatrix", "NORM_ATOL"]

NORM_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class PureState:
    """Bipartite pure state ``sum_nm C[n, m] |n m>`` of two ``d``-level systems.

    ``amplitudes`` must have unit Frobenius norm (``Tr[C C^dagger] = 1``);
    use :func:`negwit.pure.make_pure` to normalise raw input.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        c = np.array(self.amplitudes, dtype=complex)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] < 1:
            raise ValueError(f"amplitudes must be a non-empty square matrix, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("amplitudes must be finite")
        norm2 = float(np.real(np.vdot(c, c)))
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise ValueError(f"Tr[C C^dagger] = {norm2!r}, expected 1")
        c.setflags(write=False)
        object.__setattr__(self, "amplitudes", c)

    @property
    def d(self) -> int:
        return self.amplitudes.shape[0]

    def vector(self) -> np.ndarray:
        """Row-major flattening of the amplitudes (index ``n * d + m``)."""
        return self.amplitudes.reshape(-1)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix, optionally split as ``d x d`` subsystems.

    Hermiticity and trace are always validated.  ``check_psd`` additionally
    rejects eigenvalues below ``-1e-9``.
    """

    matrix: np.ndarray
    d: int | None = None
    check_psd: bool = field(default=False, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix must be finite")
        if np.max(np.abs(m - m.conj().T)) > NORM_ATOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.real(np.trace(m))
        if abs(tr - 1.0) > NORM_ATOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        if self.d is not None:
            d = int(self.d)
            if d < 1 or d * d != m.shape[0]:
                raise ValueError(f"dimension {m.shape[0]} is not d^2 for d={self.d}")
            object.__setattr__(self, "d", d)
        if self.check_psd:
            low = np.linalg.eigvalsh((m + m.conj().T) / 2)[0]
            if low < -1e-9:
                raise ValueError(f"density matrix has eigenvalue {low:.3e} < 0")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def require_split(self) -> int:
        if self.d is None:
            raise ValueError("density matrix has no bipartite split; pass d")
        return self.d
