"""Experiment sweeps behind the ``negwit`` command line.

Each command turns an :class:`ExperimentConfig` into a :class:`Table`.
Sample ``i`` always draws from ``RngStream(seed, i)`` (or
``RngStream(seed, eta_index, i)`` for eta sweeps), so results do not depend
on evaluation order and rows can be computed in parallel.
"""

from __future__ import annotations

import dataclasses
import functools
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .ensembles import (
    RNG_ALGORITHM,
    AmplitudeClass,
    RngStream,
    ginibre,
    haar_unitary,
    histogram,
    purity_targeted_amplitudes,
    purity_targeted_density,
    random_density_matrix,
    sample_amplitudes,
)
from .linalg import hermitian_eigenvalues, purity
from .mixed import (
    average_ln_mixture,
    avg_ln,
    ln_approx_mixed,
    ln_approx_mixed_sym,
    ln_exact_mixed,
    psd_sample,
    psd_to_density,
    werner_analytics,
    werner_state,
    werner_two_component,
)
from .pure import (
    bell_state,
    coherent_coeffs,
    ln_approx,
    ln_exact,
    log_negativity,
    make_pure,
    partial_transpose,
    pure_density,
    symmetric_product_superposition,
    two_qubit_pt_spectrum,
    witness_report,
)
from .states import DensityMatrix

__all__ = [
    "COMMANDS",
    "ConfigError",
    "ExperimentConfig",
    "Table",
    "run",
    "config_hash",
]


class ConfigError(ValueError):
    """Invalid experiment configuration."""


DEFAULT_M = {
    "pure-sweep": 40,
    "coherent": 20,
    "random-rows": 20,
    "eta-deviation": 20,
    "two-qubit": 1,
    "werner": 1,
    "psd": 10,
    "purity-hist": 10,
    "mixed-random": 1,
}
DEFAULT_SAMPLES = {"two-qubit": 1000}
DEFAULT_ETA = {
    "projector": [0.0, 1e-5, 1.0, 10.0, 100.0],
    "identity": [0.0, 0.1, 1.0, 10.0],
    "purity-hist": [0.0, 0.01, 0.1, 0.25, 0.5, 0.75, 1.0, 5.0, 100.0, 1000.0],
}
COMMANDS = tuple(DEFAULT_M)
# fields that change where/how output is written but not its content
_OUTPUT_ONLY = ("out", "force", "emit_plotscript", "sorted", "jobs")


@dataclass
class ExperimentConfig:
    experiment: str
    M: int | None = None
    samples: int | None = None
    seed: int = 0
    cls: str | None = None
    eta: list[float] | None = None
    p_grid: list[float] | None = None
    k: int = 5
    bins: int = 20
    hist_range: list[float] = field(default_factory=lambda: [0.0, 1.0])
    beta1: float = 0.5
    beta2_grid: list[float] | None = None
    base: str = "projector"
    same_unitary: bool = False
    force_same_row: bool = False
    inject_maximally_mixed: bool = False
    out: str | None = None
    sorted: bool = False
    force: bool = False
    emit_plotscript: bool = False
    jobs: int = 1

    @classmethod
    def from_mapping(cls, experiment: str, mapping: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        mapping = {k.replace("-", "_"): v for k, v in mapping.items()}
        if "class" in mapping:
            mapping["cls"] = mapping.pop("class")
        if "dim_M" in mapping:
            mapping["M"] = mapping.pop("dim_M")
        declared = mapping.pop("experiment", experiment)
        if declared != experiment:
            raise ConfigError(f"config is for {declared!r}, not {experiment!r}")
        unknown = set(mapping) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(experiment=experiment, **mapping).resolved()

    def resolved(self) -> "ExperimentConfig":
        """Fill per-command defaults and validate."""
        cfg = dataclasses.replace(self)
        if cfg.experiment not in COMMANDS:
            raise ConfigError(f"unknown experiment {cfg.experiment!r}")
        if cfg.M is None:
            cfg.M = DEFAULT_M[cfg.experiment]
        if cfg.samples is None:
            cfg.samples = DEFAULT_SAMPLES.get(cfg.experiment, 100)
        if cfg.cls is None:
            cfg.cls = AmplitudeClass.POSITIVE_HERMITIAN.value
        try:
            cfg.cls = AmplitudeClass.parse(cfg.cls).value
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if cfg.base not in ("projector", "identity"):
            raise ConfigError(f"base must be 'projector' or 'identity', got {cfg.base!r}")
        if cfg.eta is None:
            key = "purity-hist" if cfg.experiment == "purity-hist" else cfg.base
            cfg.eta = list(DEFAULT_ETA[key])
        if cfg.p_grid is None:
            cfg.p_grid = [i / 20 for i in range(21)]
        if cfg.beta2_grid is None:
            cfg.beta2_grid = [round(-1.5 + 0.1 * i, 10) for i in range(31)]
        cfg.eta = [float(x) for x in cfg.eta]
        cfg.p_grid = [float(x) for x in cfg.p_grid]
        cfg.beta2_grid = [float(x) for x in cfg.beta2_grid]
        checks = [
            (int(cfg.M) == cfg.M and cfg.M >= 0, "M must be an integer >= 0"),
            (int(cfg.samples) == cfg.samples and cfg.samples >= 1, "samples must be >= 1"),
            (0 <= int(cfg.seed) < 2**64, "seed must be a 64-bit unsigned integer"),
            (all(0.0 <= p <= 1.0 for p in cfg.p_grid), "p_grid values must lie in [0, 1]"),
            (all(e >= 0.0 for e in cfg.eta), "eta values must be >= 0"),
            (cfg.k >= 1, "k must be >= 1"),
            (cfg.bins >= 1, "bins must be >= 1"),
            (len(cfg.hist_range) == 2 and cfg.hist_range[0] < cfg.hist_range[1],
             "hist_range must be [lo, hi] with lo < hi"),
            (cfg.jobs >= 1, "jobs must be >= 1"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)
        if cfg.experiment == "werner" and cfg.M < 1:
            raise ConfigError("Werner states need M >= 1 (d >= 2)")
        if cfg.experiment == "random-rows" and cfg.M < 1:
            raise ConfigError("random-rows needs M >= 1")
        cfg.M, cfg.samples, cfg.seed = int(cfg.M), int(cfg.samples), int(cfg.seed)
        return cfg

    @property
    def d(self) -> int:
        return self.M + 1

    def content_dict(self) -> dict:
        data = dataclasses.asdict(self)
        for key in _OUTPUT_ONLY:
            data.pop(key)
        return data


def config_hash(cfg: ExperimentConfig) -> str:
    payload = json.dumps(cfg.content_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[tuple]
    comments: list[str] = field(default_factory=list)
    # (suffix, column, descending) variants that are always written
    variants: list[tuple[str, str, bool]] = field(default_factory=list)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def sorted_by(self, name: str, descending: bool = True) -> "Table":
        i = self.columns.index(name)
        rows = sorted(self.rows, key=lambda r: r[i], reverse=descending)
        return Table(self.columns, rows, list(self.comments))


def _map(fn, items, jobs):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# -- pure-state sweeps ------------------------------------------------------

PURE_COLUMNS = ("sample_index", "purity", "ln_exact", "ln_approx", "ln_variation",
                "linear_entropy", "diff_exact_minus_approx")


def pure_sweep_row(cfg: ExperimentConfig, index: int) -> tuple:
    rng = RngStream(cfg.seed, index)
    state = make_pure(sample_amplitudes(cfg.cls, cfg.d, rng))
    rep = witness_report(state)
    return (index, rep.purity_of_C, rep.ln_exact, rep.ln_approx, rep.ln_variation,
            rep.linear_entropy, rep.ln_exact - rep.ln_approx)


def cmd_pure_sweep(cfg: ExperimentConfig) -> Table:
    rows = _map(functools.partial(pure_sweep_row, cfg), range(cfg.samples), cfg.jobs)
    table = Table(PURE_COLUMNS, rows, variants=[("sorted", "ln_exact", True)])
    diffs = table.column("diff_exact_minus_approx")
    le_below = sum(le <= e for le, e in zip(table.column("linear_entropy"), table.column("ln_exact")))
    table.comments += [
        f"class={cfg.cls} d={cfg.d} max_abs_diff={max(abs(x) for x in diffs):.17g} "
        f"min_diff={min(diffs):.17g}",
        f"fraction_linear_entropy_le_ln_exact={le_below / len(rows):.17g}",
    ]
    return table


def _pair_row(state):
    _, ln_e = ln_exact(state)
    _, ln_a = ln_approx(state)
    return ln_e, ln_a, ln_e - ln_a


def cmd_coherent(cfg: ExperimentConfig) -> Table:
    psi = coherent_coeffs(cfg.beta1, cfg.M)
    rows = []
    for beta2 in cfg.beta2_grid:
        state = symmetric_product_superposition(psi, coherent_coeffs(beta2, cfg.M))
        rows.append((beta2, *_pair_row(state)))
    table = Table(("beta2", "ln_exact", "ln_approx", "diff_exact_minus_approx"), rows)
    table.comments.append(f"beta1={cfg.beta1!r} M={cfg.M}")
    return table


def random_rows_row(cfg: ExperimentConfig, index: int) -> tuple:
    rng = RngStream(cfg.seed, index)
    d = cfg.d
    u_a = haar_unitary(d, rng)
    u_b = u_a if cfg.same_unitary else haar_unitary(d, rng)
    row_a = rng.integers(d)
    row_b = row_a if cfg.force_same_row else rng.integers(d)
    state = symmetric_product_superposition(u_a[row_a], u_b[row_b])
    return (index, row_a, row_b, *_pair_row(state))


def cmd_random_rows(cfg: ExperimentConfig) -> Table:
    rows = _map(functools.partial(random_rows_row, cfg), range(cfg.samples), cfg.jobs)
    table = Table(("sample_index", "row_a", "row_b", "ln_exact", "ln_approx",
                   "diff_exact_minus_approx"), rows)
    table.comments.append(f"same_unitary={int(cfg.same_unitary)} force_same_row={int(cfg.force_same_row)}")
    return table


def eta_deviation_row(cfg: ExperimentConfig, key: tuple[int, int]) -> tuple:
    eta_index, index = key
    eta = cfg.eta[eta_index]
    rng = RngStream(cfg.seed, eta_index, index)
    d = cfg.d
    if cfg.base == "projector":
        phi0 = haar_unitary(d, rng)[rng.integers(d)]
        base = np.outer(phi0, phi0.conj())
    else:
        base = np.eye(d, dtype=complex) / d
    state = make_pure(purity_targeted_amplitudes(base, eta, rng))
    return (eta, index, *_pair_row(state))


def cmd_eta_deviation(cfg: ExperimentConfig) -> Table:
    keys = [(e, i) for e in range(len(cfg.eta)) for i in range(cfg.samples)]
    rows = _map(functools.partial(eta_deviation_row, cfg), keys, cfg.jobs)
    table = Table(("eta", "sample_index", "ln_exact", "ln_approx", "diff_exact_minus_approx"), rows)
    table.comments.append(f"base={cfg.base} d={cfg.d}")
    if cfg.base == "identity":
        table.comments.append(
            f"eta=0 with the identity base gives the maximally entangled state: "
            f"LN = log2(d) = {math.log2(cfg.d):.17g} (equals 1 only for d=2)"
        )
    return table


def two_qubit_row_for(state, index: int = 0) -> tuple:
    """Numeric, witness and closed-form LN of one two-qubit state."""
    rho = pure_density(state)
    numeric = hermitian_eigenvalues(partial_transpose(rho, 2))
    closed = np.sort(two_qubit_pt_spectrum(state))
    ln_e = ln_exact(rho, 2)[1]
    ln_a = ln_approx(state)[1]
    ln_c = log_negativity(abs(closed[0]))
    spread = max(ln_e, ln_a, ln_c) - min(ln_e, ln_a, ln_c)
    return (index, ln_e, ln_a, ln_c, spread, float(np.max(np.abs(numeric - closed))))


def two_qubit_row(cfg: ExperimentConfig, index: int) -> tuple:
    state = make_pure(ginibre(2, RngStream(cfg.seed, index)))
    return two_qubit_row_for(state, index)


def cmd_two_qubit(cfg: ExperimentConfig) -> Table:
    rows = _map(functools.partial(two_qubit_row, cfg), range(cfg.samples), cfg.jobs)
    return Table(("sample_index", "ln_exact", "ln_approx", "ln_closed_form",
                  "max_discrepancy", "spectrum_residual"), rows)


# -- mixed-state sweeps -----------------------------------------------------


def cmd_werner(cfg: ExperimentConfig) -> Table:
    d = cfg.d
    rows = []
    for p in cfg.p_grid:
        a = werner_analytics(d, p)
        rho = werner_state(d, p)
        parts = werner_two_component(d, p)
        rows.append((
            p, a.purity, purity(rho.matrix),
            a.ln_exact, ln_exact_mixed(rho)[1],
            a.ln_approx, ln_approx_mixed(rho)[1], ln_approx_mixed_sym(rho)[1],
            average_ln_mixture(parts, "exact"), average_ln_mixture(parts, "approx"),
            int(p <= a.p_star),
        ))
    columns = ("p", "purity", "purity_numeric", "ln_exact_analytic", "ln_exact_numeric",
               "ln_approx_analytic", "ln_approx_numeric", "ln_approx_sym_numeric",
               "avg_ln_exact", "avg_ln_approx", "separable")
    a = werner_analytics(d, 0.0)
    table = Table(columns, rows)
    table.comments.append(f"d={d} p_star={a.p_star:.17g} mu_star={a.mu_star:.17g}")
    return table


PSD_COLUMNS = ("sample_index", "purity", "ln_exact", "ln_approx_mixed",
               "avg_ln_approx_pure", "avg_ln_exact", "chain_holds")


def psd_row(cfg: ExperimentConfig, index: int) -> tuple:
    ens = psd_sample(cfg.d, cfg.k, cfg.cls, RngStream(cfg.seed, index))
    rho = psd_to_density(ens)
    ln_e = ln_exact_mixed(rho)[1]
    ln_a = ln_approx_mixed(rho)[1]
    avg_a = avg_ln(ens, "approx_pure")
    avg_e = avg_ln(ens, "exact")
    chain = int(avg_a <= ln_e + 1e-9 and ln_e <= ln_a + 1e-9)
    return (index, purity(rho.matrix), ln_e, ln_a, avg_a, avg_e, chain)


def cmd_psd(cfg: ExperimentConfig) -> Table:
    rows = _map(functools.partial(psd_row, cfg), range(cfg.samples), cfg.jobs)
    table = Table(PSD_COLUMNS, rows, variants=[("by_purity", "purity", False)])
    ln_e = table.column("ln_exact")
    ln_a = table.column("ln_approx_mixed")
    avg_a = table.column("avg_ln_approx_pure")
    below = sum(a <= m <= e for a, m, e in zip(ln_a, avg_a, ln_e))
    table.comments += [
        f"class={cfg.cls} d={cfg.d} k={cfg.k} chain_holds={sum(table.column('chain_holds'))}/{len(rows)}",
        f"ln_approx_mixed<=avg_ln_approx_pure<=ln_exact in {below}/{len(rows)} rows",
    ]
    return table


def purity_hist_sample(cfg: ExperimentConfig, key: tuple[int, int]) -> float:
    eta_index, index = key
    base = pure_density(bell_state(cfg.d))
    rho = purity_targeted_density(base, cfg.eta[eta_index], RngStream(cfg.seed, eta_index, index))
    return purity(rho.matrix)


def cmd_purity_hist(cfg: ExperimentConfig) -> Table:
    rows, comments = [], []
    for e, eta in enumerate(cfg.eta):
        keys = [(e, i) for i in range(cfg.samples)]
        values = _map(functools.partial(purity_hist_sample, cfg), keys, cfg.jobs)
        for center, count in histogram(values, cfg.bins, cfg.hist_range):
            rows.append((eta, center, count))
        comments.append(f"eta={eta!r} mean_purity={float(np.mean(values)):.17g}")
    return Table(("eta", "bin_center", "count"), rows, comments)


def mixed_random_row(cfg: ExperimentConfig, index: int) -> tuple:
    d = cfg.d
    if cfg.inject_maximally_mixed and index == 0:
        rho = DensityMatrix(np.eye(d * d, dtype=complex) / (d * d), d)
    else:
        rho = random_density_matrix(d * d, RngStream(cfg.seed, index), split=d)
    ln_e = ln_exact_mixed(rho)[1]
    ln_a = ln_approx_mixed(rho)[1]
    return (index, purity(rho.matrix), ln_e, ln_a, ln_e - ln_a)


def cmd_mixed_random(cfg: ExperimentConfig) -> Table:
    rows = _map(functools.partial(mixed_random_row, cfg), range(cfg.samples), cfg.jobs)
    table = Table(("sample_index", "purity", "ln_exact", "ln_approx", "diff_exact_minus_approx"), rows)
    diffs = table.column("diff_exact_minus_approx")
    table.comments.append(
        f"d={cfg.d} rows_with_positive_diff={sum(x > 0 for x in diffs)} "
        f"rows_with_negative_diff={sum(x < 0 for x in diffs)}"
    )
    return table


_RUNNERS = {
    "pure-sweep": cmd_pure_sweep,
    "coherent": cmd_coherent,
    "random-rows": cmd_random_rows,
    "eta-deviation": cmd_eta_deviation,
    "two-qubit": cmd_two_qubit,
    "werner": cmd_werner,
    "psd": cmd_psd,
    "purity-hist": cmd_purity_hist,
    "mixed-random": cmd_mixed_random,
}


def run(cfg: ExperimentConfig) -> Table:
    """Run one experiment and prepend the provenance comment."""
    cfg = cfg.resolved()
    table = _RUNNERS[cfg.experiment](cfg)
    header = (
        f"negwit {cfg.experiment} seed={cfg.seed} config_sha256={config_hash(cfg)} "
        f"negwit={__version__} numpy={np.__version__} rng={RNG_ALGORITHM}"
    )
    table.comments.insert(0, header)
    return table
