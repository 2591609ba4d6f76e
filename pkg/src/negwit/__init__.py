"""Amplitude-based Log Negativity witnesses for bipartite quantum states."""

__version__ = "0.1.0"

from .linalg import ConvergenceError, RankDeficiencyError, hermitian_eigenvalues
from .states import DensityMatrix, PureState
from .ensembles import AmplitudeClass, RngStream
from .pure import (
    WitnessReport,
    bell_state,
    diagonal_state,
    ln_approx,
    ln_exact,
    ln_schmidt,
    ln_variation,
    linear_entropy,
    make_pure,
    partial_transpose,
    pure_density,
    witness_report,
)
from .mixed import (
    PsdEnsemble,
    avg_ln,
    ln_approx_mixed,
    ln_approx_mixed_sym,
    ln_exact_mixed,
    werner_analytics,
    werner_state,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "RankDeficiencyError",
    "hermitian_eigenvalues",
    "DensityMatrix",
    "PureState",
    "AmplitudeClass",
    "RngStream",
    "WitnessReport",
    "bell_state",
    "diagonal_state",
    "ln_approx",
    "ln_exact",
    "ln_schmidt",
    "ln_variation",
    "linear_entropy",
    "make_pure",
    "partial_transpose",
    "pure_density",
    "witness_report",
    "PsdEnsemble",
    "avg_ln",
    "ln_approx_mixed",
    "ln_approx_mixed_sym",
    "ln_exact_mixed",
    "werner_analytics",
    "werner_state",
]
