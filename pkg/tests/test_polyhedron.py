import numpy as np
import pytest

from onebitpr.errors import DimensionMismatch, NegativeThreshold
from onebitpr.lifting import SensingEnsemble, SignalModel, SignalVector, lift_row
from onebitpr.polyhedron import (KIND_EQ, KIND_LE, InequalitySystem,
                                 build_system, load_system, residuals,
                                 save_system)
from onebitpr.sampling import (SignData, ThresholdSpec, gen_instance,
                               magnitudes, quantize)


def test_scalar_instance():
    # x = [2], a = [1], tau = 1: y = 2, r = +1, row -1 * X <= -1; X* = 4
    x = SignalVector(np.array([2.0]), SignalModel.REAL)
    ens = SensingEnsemble.from_rows(np.array([[1.0]]), SignalModel.REAL)
    rec = quantize(magnitudes(x, ens), np.array([1.0]))
    with pytest.warns(UserWarning):  # m=1 < floor
        system = build_system(rec, ens)
    assert system.rows[0, 0] == -1.0 and system.rhs[0] == -1.0
    assert system.kinds[0] == KIND_LE
    assert residuals(system, x.lifted().coords)[0] == 0.0


def test_negative_sign_convention():
    # r = -1, tau = 2, a = e1: c = +lift(e1), b = 4
    ens = SensingEnsemble.from_rows(np.array([[1.0, 0.0, 0.0]]),
                                    SignalModel.REAL)
    rec = SignData(np.array([-1.0]), np.array([2.0]))
    with pytest.warns(UserWarning):
        system = build_system(rec, ens)
    assert np.allclose(system.rows[0],
                       lift_row(np.array([1.0, 0.0, 0.0]), SignalModel.REAL))
    assert system.rhs[0] == 4.0


def test_truth_feasible_by_per_row_oracle():
    # direct per-row evaluation, not through residuals()
    x, ens = gen_instance(3, 200, SignalModel.COMPLEX, 8)
    y = magnitudes(x, ens)
    tau = ThresholdSpec("lognormal").draw(200, 8)
    rec = quantize(y, tau)
    system = build_system(rec, ens)
    X = np.outer(x.entries, x.entries.conj())
    violated = 0
    for j in range(system.m):
        V = np.outer(ens.rows[j], ens.rows[j].conj())
        lhs = -rec.signs[j] * float(np.real(np.trace(V @ X)))
        if lhs > system.rhs[j] + 1e-9:
            violated += 1
    assert violated == 0
    assert np.max(residuals(system, x.lifted().coords)) <= 1e-9


def test_residuals_hand_case():
    system = InequalitySystem.from_rows(
        np.array([[1.0, 0.0, 0.0]]), np.array([1.0]),
        np.array([KIND_LE]), 2, SignalModel.REAL)
    assert residuals(system, np.array([2.0, 0.0, 0.0]))[0] == pytest.approx(1.0)
    assert residuals(system, np.array([0.5, 0.0, 0.0]))[0] == 0.0
    # equality rows penalize both directions
    eq = InequalitySystem.from_rows(
        np.array([[1.0, 0.0, 0.0]]), np.array([1.0]),
        np.array([KIND_EQ]), 2, SignalModel.REAL)
    assert residuals(eq, np.array([0.5, 0.0, 0.0]))[0] == pytest.approx(0.5)


def test_row_norms_consistent():
    x, ens = gen_instance(4, 100, SignalModel.REAL, 2)
    rec = quantize(magnitudes(x, ens), ThresholdSpec("lognormal").draw(100, 2))
    system = build_system(rec, ens)
    sq = np.einsum("ij,ij->i", system.rows, system.rows)
    assert np.allclose(system.row_sq_norms, sq, atol=1e-12)
    assert system.total_sq_norm == pytest.approx(sq.sum())
    # sign flips do not change norms, so they match the ensemble's
    assert np.allclose(system.row_sq_norms, ens.row_sq_norms)


def test_dimension_floor_warning_flag():
    x, ens = gen_instance(10, 30, SignalModel.REAL, 1)
    rec = quantize(magnitudes(x, ens), ThresholdSpec("lognormal").draw(30, 1))
    with pytest.warns(UserWarning, match="floor"):
        system = build_system(rec, ens)
    assert not system.meets_dimension_bound
    x, ens = gen_instance(10, 60, SignalModel.REAL, 1)
    rec = quantize(magnitudes(x, ens), ThresholdSpec("lognormal").draw(60, 1))
    assert build_system(rec, ens).meets_dimension_bound


def test_build_rejects_bad_input():
    x, ens = gen_instance(3, 10, SignalModel.REAL, 0)
    rec = quantize(magnitudes(x, ens), ThresholdSpec("lognormal").draw(10, 0))
    _, bigger = gen_instance(3, 11, SignalModel.REAL, 0)
    with pytest.raises(DimensionMismatch):
        build_system(rec, bigger)
    bad = SignData(rec.signs, rec.thresholds - 10.0)
    with pytest.raises(NegativeThreshold):
        build_system(bad, ens)


def test_save_load_roundtrip(tmp_path):
    x, ens = gen_instance(3, 80, SignalModel.COMPLEX, 4)
    rec = quantize(magnitudes(x, ens), ThresholdSpec("lognormal").draw(80, 4))
    system = build_system(rec, ens)
    path = tmp_path / "system.txt"
    save_system(system, path)
    back = load_system(path)
    assert np.array_equal(back.rows, system.rows)
    assert np.array_equal(back.rhs, system.rhs)
    assert np.array_equal(back.kinds, system.kinds)
    assert back.n == system.n and back.model == system.model
