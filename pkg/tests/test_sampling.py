import numpy as np
import pytest
from scipy.special import ndtr

from onebitpr.errors import DimensionMismatch, NegativeThreshold
from onebitpr.lifting import SensingEnsemble, SignalModel, SignalVector, embed
from onebitpr.sampling import (NoiseSpec, ThresholdSpec, component_rng,
                               gen_instance, magnitudes, quantize)


def test_gen_instance_deterministic():
    x1, e1 = gen_instance(10, 100, SignalModel.REAL, 7)
    x2, e2 = gen_instance(10, 100, SignalModel.REAL, 7)
    assert np.array_equal(x1.entries, x2.entries)
    assert np.array_equal(e1.rows, e2.rows)
    assert np.array_equal(e1.lifted_rows, e2.lifted_rows)


def test_gen_instance_seeds_differ():
    x1, _ = gen_instance(10, 10, SignalModel.REAL, 0)
    x2, _ = gen_instance(10, 10, SignalModel.REAL, 1)
    assert not np.array_equal(x1.entries, x2.entries)


def test_signal_moments():
    # Monte-Carlo moment oracle over 1e5 scalar draws
    entries = np.concatenate([
        gen_instance(100, 1, SignalModel.REAL, seed)[0].entries.real
        for seed in range(1000)])
    assert entries.size == 100_000
    assert -0.02 < entries.mean() < 0.02
    assert 0.97 < entries.var() < 1.03


def test_complex_parts_unit_variance():
    x, ens = gen_instance(200, 200, SignalModel.COMPLEX, 3)
    for part in (x.entries.real, x.entries.imag):
        assert 0.8 < part.var() < 1.2
    for part in (ens.rows.real.ravel(), ens.rows.imag.ravel()):
        assert 0.97 < part.var() < 1.03


def test_magnitudes_basis_case():
    x = SignalVector(np.array([1.0, 0.0]), SignalModel.REAL)
    ens = SensingEnsemble.from_rows(np.array([[1.0, 0.0]]), SignalModel.REAL)
    assert magnitudes(x, ens)[0] == pytest.approx(1.0)


def test_magnitudes_orthogonal_case():
    x = SignalVector(np.array([1.0, 1.0]), SignalModel.REAL)
    ens = SensingEnsemble.from_rows(np.array([[1.0, -1.0]]), SignalModel.REAL)
    assert magnitudes(x, ens)[0] == pytest.approx(0.0)


def test_magnitudes_squared_match_trace_oracle():
    # y_j^2 must equal Tr(V_j X) computed by direct matrix products
    x, ens = gen_instance(3, 50, SignalModel.COMPLEX, 12)
    y = magnitudes(x, ens)
    X = np.outer(x.entries, x.entries.conj())
    for j in range(ens.m):
        V = np.outer(ens.rows[j], ens.rows[j].conj())
        assert y[j] ** 2 == pytest.approx(np.real(np.trace(V @ X)), abs=1e-10)
    # and the lifted inner product agrees too
    coords = embed(X, SignalModel.COMPLEX)
    assert np.allclose(y ** 2, ens.lifted_rows @ coords, atol=1e-10)


def test_magnitudes_dimension_check():
    x, _ = gen_instance(3, 5, SignalModel.REAL, 0)
    _, ens = gen_instance(4, 5, SignalModel.REAL, 0)
    with pytest.raises(DimensionMismatch):
        magnitudes(x, ens)


def test_quantize_signs():
    rec = quantize(np.array([2.0, 0.5, 1.0]), np.array([1.0, 1.0, 1.0]))
    assert list(rec.signs) == [1.0, -1.0, 1.0]  # exact tie goes to +1
    assert rec.hidden_magnitudes is not None
    assert rec[1].sign == -1 and rec[1].threshold == 1.0


def test_quantize_noiseless_inequalities_hold():
    x, ens = gen_instance(6, 400, SignalModel.REAL, 5)
    y = magnitudes(x, ens)
    tau = ThresholdSpec("lognormal").draw(400, 5)
    rec = quantize(y, tau)
    assert np.all(rec.signs * (y - tau) >= 0.0)
    assert np.all(rec.signs * (y ** 2 - tau ** 2) >= 0.0)


def test_quantize_rejects_negative_noiseless_threshold():
    with pytest.raises(NegativeThreshold):
        quantize(np.array([1.0]), np.array([-0.5]))


def test_noisy_sign_probability_matches_probit():
    # empirical P(+1) vs Phi(mu - lambda) within 3 standard errors
    mu, lam, sigma, trials = 0.7, 0.3, 1.0, 100_000
    rec = quantize(np.full(trials, mu), np.full(trials, lam),
                   NoiseSpec(sigma, enabled=True), seed=21)
    p_hat = np.mean(rec.signs > 0)
    p = ndtr((mu - lam) / sigma)
    assert abs(p_hat - p) <= 3.0 * np.sqrt(p * (1 - p) / trials)


def test_noisy_thresholds_may_be_negative():
    rec = quantize(np.array([1.0]), np.array([-2.0]),
                   NoiseSpec(0.5, enabled=True), seed=0)
    assert rec.signs[0] in (-1.0, 1.0)


def test_threshold_specs():
    tau = ThresholdSpec("lognormal").draw(1000, 0)
    assert np.all(tau > 0.0)
    assert np.array_equal(tau, ThresholdSpec("lognormal").draw(1000, 0))
    lam = ThresholdSpec("gaussian").draw(1000, 0)
    assert np.any(lam < 0.0)
    fixed = ThresholdSpec("fixed", np.array([1.0, 2.0])).draw(2, 0)
    assert np.array_equal(fixed, [1.0, 2.0])
    with pytest.raises(DimensionMismatch):
        ThresholdSpec("fixed", np.array([1.0])).draw(2, 0)
    with pytest.raises(ValueError):
        ThresholdSpec("weird").draw(2, 0)


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(-1.0)


def test_component_streams_independent():
    a = component_rng("signal", 0).random(4)
    b = component_rng("sensing", 0).random(4)
    c = component_rng("signal", 0).random(4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, c)
