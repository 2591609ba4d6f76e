import math

import numpy as np
import pytest

from negwit.ensembles import RngStream, ginibre, random_density_matrix, sample_amplitudes
from negwit.linalg import purity
from negwit.mixed import (
    PsdEnsemble,
    average_ln_mixture,
    avg_ln,
    ln_approx_mixed,
    ln_approx_mixed_sym,
    ln_exact_mixed,
    psd_sample,
    psd_to_density,
    separable_mixture,
    werner_analytics,
    werner_separable_terms,
    werner_state,
    werner_two_component,
)
from negwit.pure import bell_state, ln_approx, ln_exact, make_pure, pure_density
from negwit.states import DensityMatrix


def loop_witness(rho, d):
    """[DERIVED] 1/2 sum_{n != m} |<nn|rho|mm> - <nm|rho|mn>| by explicit indexing."""
    total = 0.0
    for n in range(d):
        for m in range(d):
            if n != m:
                total += abs(rho[n * d + n, m * d + m] - rho[n * d + m, m * d + n])
    return total / 2


def test_witness_matches_loop():
    rho = random_density_matrix(16, RngStream(0), split=4)
    neg, ln = ln_approx_mixed(rho)
    assert neg == pytest.approx(loop_witness(rho.matrix, 4), abs=1e-15)
    assert ln == pytest.approx(math.log2(1 + 2 * neg))


def test_mixed_requires_split():
    with pytest.raises(ValueError):
        ln_approx_mixed(DensityMatrix(np.eye(4) / 4))


def test_maximally_mixed_is_zero():
    rho = DensityMatrix(np.eye(9, dtype=complex) / 9, 3)
    assert ln_exact_mixed(rho)[1] == 0.0
    assert ln_approx_mixed(rho)[1] == 0.0
    assert ln_approx_mixed_sym(rho)[1] == 0.0


def test_reduces_to_pure_witness_for_real_amplitudes():
    # rho_{nn,mm} - rho_{nm,mn} = c_nn c_mm^* - c_nm c_mn^*, the pure minor when C is real
    c = np.random.default_rng(1).standard_normal((4, 4))
    s = make_pure(c)
    assert ln_approx_mixed(pure_density(s))[0] == pytest.approx(ln_approx(s)[0], abs=1e-14)
    # bell state: the pure witness is recovered exactly, also in symmetrised form
    b = pure_density(bell_state(3))
    assert ln_approx_mixed(b)[1] == pytest.approx(math.log2(3), abs=1e-12)
    assert ln_approx_mixed_sym(b)[1] == pytest.approx(math.log2(3), abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_werner_closed_forms(d):
    for p in np.linspace(0, 1, 11):
        a = werner_analytics(d, p)
        rho = werner_state(d, p)
        assert ln_exact_mixed(rho)[1] == pytest.approx(a.ln_exact, abs=1e-10)
        assert ln_approx_mixed(rho)[1] == pytest.approx(a.ln_approx, abs=1e-12)
        assert purity(rho.matrix) == pytest.approx(a.purity, abs=1e-14)
        # [DERIVED] direct spectrum of the partial transpose
        vals = np.linalg.eigvalsh(
            rho.matrix.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)
        )
        assert vals.min() == pytest.approx(min(a.lambda_minus, (1 + (d - 1) * p) / d**2), abs=1e-14)
        assert np.sum(np.isclose(vals, a.lambda_minus, atol=1e-12)) >= a.multiplicity


def test_werner_reference_values():
    a = werner_analytics(2, 0.5)
    assert a.purity == pytest.approx(0.4375)
    assert a.p_star == pytest.approx(1 / 3)
    assert a.mu_star == pytest.approx(1 / 3)
    assert werner_analytics(2, a.p_star).purity == pytest.approx(a.mu_star)
    one = werner_analytics(4, 1.0)
    assert one.ln_exact == pytest.approx(2.0) and one.ln_approx == pytest.approx(2.0)
    with pytest.raises(ValueError):
        werner_state(1, 0.5)
    with pytest.raises(ValueError):
        werner_state(2, 1.5)


def test_werner_averages():
    for p in (0.0, 0.3, 1.0):
        parts = werner_two_component(3, p)
        assert average_ln_mixture(parts, "exact") == pytest.approx(p * math.log2(3), abs=1e-10)
        assert average_ln_mixture(parts, "approx") == pytest.approx(p * math.log2(3), abs=1e-12)
    with pytest.raises(ValueError):
        average_ln_mixture(parts, "other")


@pytest.mark.parametrize("p", [0.0, 0.1, 1 / 3])
def test_werner_separable_decomposition(p):
    terms = werner_separable_terms(p)
    assert sum(w for w, _, _ in terms) == pytest.approx(1.0)
    for _, ra, rb in terms:
        for r in (ra, rb):
            assert np.allclose(r, r.conj().T) and np.trace(r) == pytest.approx(1.0)
    rho = separable_mixture(terms)
    assert np.max(np.abs(rho.matrix - werner_state(2, p).matrix)) <= 1e-12
    with pytest.raises(ValueError):
        werner_separable_terms(0.5)


def test_separable_mixture_validation():
    half = np.eye(2) / 2
    with pytest.raises(ValueError):
        separable_mixture([])
    with pytest.raises(ValueError):
        separable_mixture([(0.5, half, half)])
    with pytest.raises(ValueError):
        separable_mixture([(1.0, half, np.eye(3) / 3)])


def test_real_factor_mixtures_have_zero_sym_witness(separable_parts):
    for i in range(20):
        rho = separable_mixture(separable_parts(3, 4, RngStream(9, i)))
        assert ln_approx_mixed_sym(rho)[1] <= 1e-12
        assert ln_exact_mixed(rho)[1] <= 1e-10


def test_sym_equals_plain_on_real_states():
    rho = werner_state(4, 0.6)
    assert ln_approx_mixed_sym(rho) == pytest.approx(ln_approx_mixed(rho))


def test_psd_ensemble():
    ens = psd_sample(3, 4, "ArbitraryComplex", RngStream(2))
    assert len(ens.states) == 4 and ens.d == 3
    assert sum(ens.weights) == pytest.approx(1.0, abs=1e-12)
    rho = psd_to_density(ens)
    assert np.trace(rho.matrix).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho.matrix).min() > -1e-12
    manual = sum(w * ln_approx(s)[1] for w, s in zip(ens.weights, ens.states))
    assert avg_ln(ens, "approx_pure") == pytest.approx(manual)
    manual = sum(w * ln_exact(s)[1] for w, s in zip(ens.weights, ens.states))
    assert avg_ln(ens, "exact") == pytest.approx(manual)
    with pytest.raises(ValueError):
        avg_ln(ens, "other")
    with pytest.raises(ValueError):
        psd_sample(3, 0, "Hermitian", RngStream(0))


def test_psd_validation():
    s2 = make_pure(np.eye(2))
    s3 = make_pure(np.eye(3))
    with pytest.raises(ValueError):
        PsdEnsemble((0.5, 0.5), (s2,))
    with pytest.raises(ValueError):
        PsdEnsemble((0.5, 0.6), (s2, s2))
    with pytest.raises(ValueError):
        PsdEnsemble((0.5, 0.5), (s2, s3))


def test_single_component_psd_is_pure():
    c = sample_amplitudes("PositiveHermitian", 4, RngStream(3))
    ens = PsdEnsemble((1.0,), (make_pure(c),))
    rho = psd_to_density(ens)
    assert purity(rho.matrix) == pytest.approx(1.0)
    assert ln_exact_mixed(rho)[1] == pytest.approx(avg_ln(ens, "exact"), abs=1e-10)
