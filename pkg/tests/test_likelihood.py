import numpy as np
import pytest
from scipy.integrate import quad

from onebitpr.errors import DimensionMismatch
from onebitpr.lifting import SignalModel, lift_rows, lifted_dim
from onebitpr.likelihood import (LikelihoodModel, MleConfig, grad_loglik,
                                 loglik, solve_mle)
from onebitpr.metrics import metric_nmse
from onebitpr.sampling import (NoiseSpec, ThresholdSpec, gen_instance,
                               magnitudes, quantize)


def noisy_model(n, m, sigma, seed):
    x, ens = gen_instance(n, m, SignalModel.REAL, seed)
    y = magnitudes(x, ens)
    lam = ThresholdSpec("gaussian").draw(m, seed)
    rec = quantize(y ** 2, lam, NoiseSpec(sigma, enabled=True), seed)
    return x, ens, LikelihoodModel.from_records(rec, ens, sigma)


def scalar_model(signs, thresholds, sigma=1.0):
    m = len(signs)
    rows = np.ones((m, 1))
    return LikelihoodModel(np.asarray(signs, dtype=float),
                           np.asarray(thresholds, dtype=float), rows, sigma,
                           1, SignalModel.REAL)


def test_loglik_at_symmetric_point():
    model = scalar_model([1.0], [0.5])
    # mu = lambda: log Phi(0) = log(1/2)
    assert loglik(model, np.array([0.5])) == pytest.approx(np.log(0.5))


def test_loglik_saturation():
    model = scalar_model([1.0], [0.0], sigma=1.0)
    val = loglik(model, np.array([10.0]))  # +10 sigma certain sign
    assert -1e-20 < val < 0.0


def test_loglik_finite_deep_in_tail():
    model = scalar_model([1.0], [0.0], sigma=1.0)
    val = loglik(model, np.array([-60.0]))
    assert np.isfinite(val) and val < -1000.0
    g = grad_loglik(model, np.array([-60.0]))
    assert np.all(np.isfinite(g)) and g[0] > 0.0


def test_loglik_quadrature_oracle():
    # independent oracle: adaptive quadrature of the Gaussian density
    rng = np.random.default_rng(6)
    x, ens, model = noisy_model(3, 25, 0.7, 6)
    coords = rng.standard_normal(lifted_dim(3, SignalModel.REAL))
    mu = ens.lifted_rows @ coords
    total = 0.0
    for j in range(model.m):
        t = model.signs[j] * (mu[j] - model.thresholds[j]) / model.sigma
        phi, _ = quad(lambda u: np.exp(-0.5 * u * u) / np.sqrt(2 * np.pi),
                      min(-12.0, t - 10.0), t)
        total += np.log(phi)
    assert loglik(model, coords) == pytest.approx(total, abs=1e-8)


def test_gradient_antisymmetric_cancellation():
    model = scalar_model([1.0, -1.0], [0.3, 0.3])
    g = grad_loglik(model, np.array([0.3]))  # mu = lambda on identical rows
    assert np.allclose(g, 0.0, atol=1e-14)


def test_gradient_finite_difference():
    rng = np.random.default_rng(1)
    for sigma in (0.1, 1.0):
        x, ens, model = noisy_model(5, 200, sigma, int(sigma * 10))
        coords = 0.5 * rng.standard_normal(lifted_dim(5, SignalModel.REAL))
        g = grad_loglik(model, coords)
        h = 1e-6
        fd = np.empty_like(g)
        for k in range(coords.size):
            e = np.zeros_like(coords)
            e[k] = h
            fd[k] = (loglik(model, coords + e) - loglik(model, coords - e)) / (2 * h)
        assert np.linalg.norm(g - fd) <= 1e-5 * (1.0 + np.linalg.norm(g))


def test_gradient_consistency_in_m():
    # at the truth, the per-sample gradient shrinks as m grows
    norms = {}
    for m in (200, 5000):
        x, ens, model = noisy_model(5, m, 0.5, 3)
        g = grad_loglik(model, x.lifted().coords)
        norms[m] = np.linalg.norm(g) / m
    assert norms[5000] < norms[200]


def test_concavity_probe():
    rng = np.random.default_rng(8)
    x, ens, model = noisy_model(4, 100, 0.5, 8)
    d = lifted_dim(4, SignalModel.REAL)
    for _ in range(100):
        a = rng.standard_normal(d)
        b = rng.standard_normal(d)
        mid = loglik(model, (a + b) / 2.0)
        assert mid >= 0.5 * (loglik(model, a) + loglik(model, b)) - 1e-9


def test_model_validation():
    with pytest.raises(ValueError):
        scalar_model([1.0], [0.0], sigma=0.0)
    with pytest.raises(DimensionMismatch):
        LikelihoodModel(np.array([1.0]), np.array([0.0, 0.0]),
                        np.ones((1, 1)), 1.0, 1, SignalModel.REAL)
    with pytest.raises(DimensionMismatch):
        LikelihoodModel(np.array([1.0]), np.array([0.0]),
                        np.ones((1, 2)), 1.0, 1, SignalModel.REAL)


def test_solve_mle_small_instance():
    x, ens, model = noisy_model(5, 3000, 0.5, 4)
    res = solve_mle(model)
    assert res.converged
    g0 = np.linalg.norm(grad_loglik(model, np.zeros(model.lifted_rows.shape[1])))
    assert res.final_grad_norm <= 1e-6 * (1.0 + g0)
    assert metric_nmse(x.lifted(), res.matrix) < 5e-2
    # output decodes to an exactly Hermitian (symmetric) matrix
    H = res.matrix.matrix()
    assert np.array_equal(H, H.T)


def test_solve_mle_iteration_cap_flags_nonconvergence():
    x, ens, model = noisy_model(5, 500, 0.5, 9)
    res = solve_mle(model, cfg=MleConfig(max_iters=2))
    assert not res.converged
