import numpy as np
import pytest

from margindisc.core import (
    DiscriminationReport,
    InputState,
    Povm,
    ProcessSet,
    evaluate,
    margin_satisfied,
)
from margindisc.errors import DimensionMismatch, InvalidPriors
from margindisc.sampling import haar_unitary, random_density, random_povm, random_pure_state


def _helstrom_povm(eta1, rho1, eta2, rho2):
    delta = eta1 * rho1 - eta2 * rho2
    w, v = np.linalg.eigh(delta)
    e1 = (v[:, w > 0] @ v[:, w > 0].conj().T) if (w > 0).any() else np.zeros_like(delta)
    e2 = np.eye(delta.shape[0]) - e1
    return Povm((np.zeros_like(delta), e1, e2))


def test_process_set_validation():
    with pytest.raises(InvalidPriors):
        ProcessSet((np.eye(2), np.eye(2)), (0.7, 0.5))
    with pytest.raises(ValueError):
        ProcessSet((np.eye(2), 2 * np.eye(2)), (0.5, 0.5))
    with pytest.raises(ValueError):
        ProcessSet((np.eye(2),), (1.0,))


def test_povm_validation():
    with pytest.raises(ValueError):
        Povm((np.eye(2), np.eye(2)))  # sums to 2
    with pytest.raises(ValueError):
        Povm((np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])))  # negative element
    povm = Povm((0.3 * np.eye(2), 0.7 * np.eye(2)))
    assert povm.n_conclusive == 1


def test_input_state_validation():
    with pytest.raises(ValueError):
        InputState(np.diag([0.6, 0.6]))  # trace 1.2
    state = InputState.pure([1.0, 1.0])
    assert state.rho[0, 0] == pytest.approx(0.5)


def test_evaluate_perfect_discrimination():
    # orthogonal outputs with projective conclusive elements
    pset = ProcessSet((np.eye(2), np.array([[0, 1], [1, 0]], dtype=complex)), (0.5, 0.5))
    state = InputState.pure([1.0, 0.0])
    e1 = np.diag([1.0, 0.0])
    e2 = np.diag([0.0, 1.0])
    report = evaluate(pset, state, Povm((np.zeros((2, 2)), e1, e2)))
    assert report.p_success == pytest.approx(1.0)
    assert report.p_error == pytest.approx(0.0)


def test_evaluate_always_inconclusive():
    pset = ProcessSet((np.eye(2), np.diag([1.0, 1j])), (0.5, 0.5))
    state = InputState.pure([1.0, 1.0])
    z = np.zeros((2, 2))
    report = evaluate(pset, state, Povm((np.eye(2), z, z)))
    assert report.p_success == 0.0
    assert report.p_error == 0.0
    assert report.p_inconclusive == pytest.approx(1.0)


def test_evaluate_helstrom_value():
    # Eq-derived value at S = 1/2, equal priors: (1 + sqrt(1/2)) / 2
    pset = ProcessSet((np.eye(2), np.diag([1.0, 1j])), (0.5, 0.5))
    state = InputState.pure([1.0, 1.0])
    outs = pset.outputs(state.rho)
    povm = _helstrom_povm(0.5, outs[0], 0.5, outs[1])
    report = evaluate(pset, state, povm)
    assert report.p_success == pytest.approx(0.8535533905932737, abs=1e-9)
    assert report.p_error == pytest.approx(0.1464466094067262, abs=1e-9)


def test_evaluate_dimension_checks():
    pset = ProcessSet((np.eye(2), np.diag([1.0, -1.0])), (0.5, 0.5))
    state = InputState.pure([1.0, 0.0])
    z = np.zeros((2, 2))
    with pytest.raises(DimensionMismatch):
        evaluate(pset, state, Povm((np.eye(2), z)))  # one conclusive element


def test_margin_satisfied_cases():
    report = DiscriminationReport(0.8, 0.0, 0.2)
    assert margin_satisfied(report, 0.0)
    report = DiscriminationReport(0.5, 0.2, 0.3)
    assert not margin_satisfied(report, 0.1)
    report = DiscriminationReport(0.7, 0.146447, 0.153553)
    assert margin_satisfied(report, 0.146447)


def test_evaluate_linear_in_state():
    rng = np.random.default_rng(5)
    for _ in range(10):
        d = int(rng.integers(2, 7))
        pset = ProcessSet((haar_unitary(rng, d), haar_unitary(rng, d)), (0.3, 0.7))
        povm = Povm(tuple(random_povm(rng, d, 3)))
        rho1, rho2 = random_density(rng, d), random_density(rng, d)
        lam = float(rng.uniform())
        mix = InputState(lam * rho1 + (1 - lam) * rho2)
        r1 = evaluate(pset, InputState(rho1), povm)
        r2 = evaluate(pset, InputState(rho2), povm)
        rm = evaluate(pset, mix, povm)
        assert rm.p_success == pytest.approx(
            lam * r1.p_success + (1 - lam) * r2.p_success, abs=1e-10
        )
        assert rm.p_error == pytest.approx(
            lam * r1.p_error + (1 - lam) * r2.p_error, abs=1e-10
        )


def test_probabilities_sum_to_one():
    rng = np.random.default_rng(6)
    for _ in range(20):
        d = int(rng.integers(2, 7))
        n = int(rng.integers(2, 5))
        us = tuple(haar_unitary(rng, d) for _ in range(n))
        priors = rng.dirichlet(np.ones(n))
        pset = ProcessSet(us, tuple(priors))
        povm = Povm(tuple(random_povm(rng, d, n + 1)))
        state = InputState.pure(random_pure_state(rng, d))
        report = evaluate(pset, state, povm)
        total = report.p_success + report.p_error + report.p_inconclusive
        assert total == pytest.approx(1.0, abs=1e-9)
        for p in (report.p_success, report.p_error, report.p_inconclusive):
            assert -1e-10 <= p <= 1 + 1e-10
