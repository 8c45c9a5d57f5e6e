import math

import numpy as np
import pytest

from margindisc.catalog import phase_shift, superdense
from margindisc.core import InputState, ProcessSet
from margindisc.errors import CertificationFailure
from margindisc.group_disc import ancilla_extend
from margindisc.oracle import (
    OracleConfig,
    concavity_scan,
    optimize_fixed_input,
    optimize_full,
)

QUBIT_PAIR = ProcessSet((np.eye(2), np.diag([1.0, 1j])), (0.5, 0.5))
PLUS = InputState.pure([1.0, 1.0])

HELSTROM = 0.5 * (1 + math.sqrt(0.5))
UNAMBIGUOUS = 1 - math.sqrt(0.5)
INTERMEDIATE_005 = (math.sqrt(0.05) + math.sqrt(1 - math.sqrt(0.5))) ** 2


def small_cfg(**kw):
    base = dict(restarts=8, iterations=1000, seed=0)
    base.update(kw)
    return OracleConfig(**base)


def test_orthogonal_outputs_unambiguous_perfect():
    pset = ProcessSet((np.eye(2), np.array([[0, 1], [1, 0]], dtype=complex)), (0.5, 0.5))
    report = optimize_fixed_input(pset, InputState.pure([1.0, 0.0]), 0.0, small_cfg())
    assert report.best_p_success == pytest.approx(1.0, abs=1e-6)
    assert report.residuals["margin"] <= 1e-8


def test_fixed_input_helstrom():
    report = optimize_fixed_input(QUBIT_PAIR, PLUS, 1.0, small_cfg())
    assert report.best_p_success == pytest.approx(HELSTROM, abs=1e-6)
    assert report.certified


def test_fixed_input_unambiguous():
    report = optimize_fixed_input(QUBIT_PAIR, PLUS, 0.0, small_cfg())
    assert report.best_p_success == pytest.approx(UNAMBIGUOUS, abs=1e-5)
    assert report.residuals["margin"] <= 1e-8


def test_fixed_input_intermediate():
    report = optimize_fixed_input(QUBIT_PAIR, PLUS, 0.05, small_cfg(iterations=2000))
    assert report.best_p_success == pytest.approx(INTERMEDIATE_005, abs=1e-5)


def test_fixed_input_residuals_certified():
    report = optimize_fixed_input(QUBIT_PAIR, PLUS, 0.3, small_cfg())
    assert report.residuals["completeness"] <= 1e-8
    assert report.residuals["psd"] <= 1e-8
    assert report.residuals["margin"] <= 1e-8
    assert report.certified


def test_full_qubit_pair_three_margins():
    cfg = small_cfg(restarts=12, iterations=1500)
    for m, expected in ((1.0, HELSTROM), (0.0, UNAMBIGUOUS), (0.05, INTERMEDIATE_005)):
        report = optimize_full(QUBIT_PAIR, m, cfg, analytic_p_max=expected)
        assert report.best_p_success == pytest.approx(expected, abs=1e-4)
        assert report.certified


def test_full_unequal_priors_all_three_branches():
    # S_min = 1/2 pair with priors (0.2, 0.8): m_c' ~ 0.0158, m_c ~ 0.0877,
    # so the chosen margins land one per branch
    from margindisc.two_unitary import UnitaryPair, p_max_pure, s_min

    pair = UnitaryPair(np.eye(2), np.diag([1.0, 1j]), 0.2, 0.8)
    s = s_min(pair).s_min
    pset = ProcessSet((pair.u1, pair.u2), (pair.eta1, pair.eta2))
    cfg = small_cfg(restarts=12, iterations=2500)
    for m in (0.008, 0.05, 0.2):
        expected = p_max_pure(0.2, 0.8, s, m)[0]
        report = optimize_full(pset, m, cfg, analytic_p_max=expected)
        assert report.best_p_success == pytest.approx(expected, abs=1e-4)


def test_full_z3_linear_branch():
    report = optimize_full(
        phase_shift(3, 1).rep, 0.2, small_cfg(restarts=12, iterations=4000), analytic_p_max=0.4
    )
    assert report.best_p_success == pytest.approx(0.4, abs=1e-5)


def test_full_pauli_minimum_error():
    report = optimize_full(
        superdense(2).rep, 1.0, small_cfg(restarts=8, iterations=1500), analytic_p_max=0.5
    )
    assert report.best_p_success == pytest.approx(0.5, abs=1e-5)


def test_full_superdense_unambiguous_zero():
    report = optimize_full(
        superdense(3).rep, 0.0, small_cfg(restarts=4, iterations=400), analytic_p_max=0.0
    )
    assert report.best_p_success <= 1e-12


def test_full_superdense_with_ancilla_perfect():
    rep = ancilla_extend(superdense(2).rep, 2)
    report = optimize_full(rep, 0.0, small_cfg(restarts=6, iterations=800), analytic_p_max=1.0)
    assert report.best_p_success == pytest.approx(1.0, abs=1e-6)


def test_full_mixed_inputs_never_beat_pure():
    cfg = small_cfg(restarts=8, iterations=1000, mixed_samples=3)
    report = optimize_full(QUBIT_PAIR, 0.3, cfg)
    assert report.mixed_best is not None
    assert report.mixed_best <= report.best_p_success + 10 * cfg.tolerance


def test_certification_failure_raised():
    with pytest.raises(CertificationFailure):
        optimize_full(QUBIT_PAIR, 1.0, small_cfg(restarts=2, iterations=400), analytic_p_max=0.5)


def test_oracle_deterministic():
    cfg = small_cfg(restarts=3, iterations=300, mixed_samples=0)
    r1 = optimize_full(QUBIT_PAIR, 0.3, cfg)
    r2 = optimize_full(QUBIT_PAIR, 0.3, cfg)
    assert r1.best_p_success == r2.best_p_success
    assert r1.restart_values == r2.restart_values


def test_concavity_scan_group_instance():
    # kink exactly at m_c = 1/3 for the Z3 qubit family
    cfg = small_cfg(restarts=6, iterations=1200, mixed_samples=0)
    grid = [0.0, 1.0 / 6.0, 1.0 / 3.0, 1.0]
    report = concavity_scan(phase_shift(3, 1).rep, grid, cfg)
    assert report.passed
    expected = [0.0, 1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0]
    for value, target in zip(report.values, expected):
        assert value == pytest.approx(target, abs=5e-4)


def test_concavity_scan_perfect_pair_constant():
    pset = ProcessSet((np.diag([1.0, 1.0]), np.diag([1.0, -1.0])), (0.5, 0.5))
    cfg = small_cfg(restarts=4, iterations=500, mixed_samples=0)
    report = concavity_scan(pset, [0.0, 0.5, 1.0], cfg)
    assert report.passed
    for value in report.values:
        assert value == pytest.approx(1.0, abs=1e-5)


def test_concavity_scan_identical_unitaries_plateau():
    # indistinguishable processes: random guessing above m_c = 1/2
    pset = ProcessSet((np.eye(2), np.eye(2)), (0.5, 0.5))
    cfg = small_cfg(restarts=4, iterations=800, mixed_samples=0)
    report = concavity_scan(pset, [0.5, 0.75, 1.0], cfg)
    for value in report.values:
        assert value == pytest.approx(0.5, abs=1e-4)


def test_oracle_reaches_analytic_on_catalog_sweep():
    # minimum-error value kappa on every desk-scale catalog instance
    from fractions import Fraction

    from margindisc.catalog import small_instances
    from margindisc.group_disc import p_max

    cfg = OracleConfig(restarts=4, iterations=4000, mixed_samples=0, seed=0)
    for prob in small_instances():
        analytic, _ = p_max(prob.kappa, 1.0)
        report = optimize_full(prob.rep, 1.0, cfg, analytic_p_max=analytic)
        assert report.gap <= 10 * cfg.tolerance, prob.label()
        assert report.best_p_success >= analytic - 10 * cfg.tolerance, prob.label()


def test_invalid_margin_rejected():
    with pytest.raises(ValueError):
        optimize_fixed_input(QUBIT_PAIR, PLUS, 1.5, small_cfg())
    with pytest.raises(ValueError):
        optimize_full(QUBIT_PAIR, -0.1, small_cfg())


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(restarts=0)
    with pytest.raises(ValueError):
        OracleConfig(mixed_samples=-1)
