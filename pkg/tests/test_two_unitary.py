import math

import numpy as np
import pytest

from margindisc.errors import InvalidPriors
from margindisc.group_disc import TwoUnitaryDomain
from margindisc.sampling import haar_unitary
from margindisc.two_unitary import (
    UnitaryPair,
    ancilla_invariance_check,
    convex_hull,
    critical_margins,
    p_max_pure,
    profile,
    s_min,
    solve,
)

QUBIT_PAIR = UnitaryPair(np.eye(2), np.diag([1.0, 1j]))


def brute_force_smin(phases, samples=1000):
    """Independent oracle: dense sweep over weight vectors on the simplex."""
    rng = np.random.default_rng(99)
    points = np.exp(1j * np.asarray(phases))
    best = np.inf
    for _ in range(samples):
        q = rng.dirichlet(np.ones(len(points)))
        best = min(best, abs(q @ points) ** 2)
    # include vertex/pair sweeps for tight coverage of the boundary
    for i in range(len(points)):
        best = min(best, abs(points[i]) ** 2)
        for j in range(i + 1, len(points)):
            ts = np.linspace(0, 1, 1001)
            vals = np.abs((1 - ts) * points[i] + ts * points[j]) ** 2
            best = min(best, vals.min())
    return best


def test_smin_identical_processes():
    res = s_min(UnitaryPair(np.eye(3), np.eye(3)))
    assert res.s_min == pytest.approx(1.0)
    assert res.weights == (1.0,)


def test_smin_antipodal_phases():
    res = s_min(UnitaryPair(np.eye(2), np.diag([1.0, -1.0])))
    assert res.s_min == 0.0
    assert sorted(res.weights) == pytest.approx([0.5, 0.5])


def test_smin_quarter_turn_grid_oracle():
    res = s_min(QUBIT_PAIR)
    qs = np.linspace(0.0, 1.0, 100001)
    grid_min = (np.abs(qs + (1 - qs) * 1j) ** 2).min()
    assert res.s_min == pytest.approx(0.5, abs=1e-12)
    assert res.s_min == pytest.approx(grid_min, abs=1e-9)
    assert sorted(res.weights) == pytest.approx([0.5, 0.5])


def test_smin_certificate_matches_value():
    rng = np.random.default_rng(7)
    for _ in range(25):
        d = int(rng.integers(2, 7))
        pair = UnitaryPair(haar_unitary(rng, d), haar_unitary(rng, d))
        res = s_min(pair)
        assert abs(res.certificate_value() - res.s_min) <= 1e-10
        assert res.s_min <= brute_force_smin(res.phases, samples=300) + 1e-9


def test_smin_input_vector_realizes_value():
    rng = np.random.default_rng(8)
    for _ in range(25):
        d = int(rng.integers(2, 7))
        pair = UnitaryPair(haar_unitary(rng, d), haar_unitary(rng, d))
        res = s_min(pair)
        overlap = res.input_vector.conj() @ (pair.u1.conj().T @ pair.u2) @ res.input_vector
        assert abs(abs(overlap) ** 2 - res.s_min) <= 1e-9


def test_convex_hull_square():
    pts = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [0.0, 0.0]])
    hull = sorted(convex_hull(pts).tolist())
    assert hull == [0, 1, 2, 3]


def test_critical_margins_equal_priors():
    m_c, m_c_prime = critical_margins(0.5, 0.5, 0.5)
    assert m_c == pytest.approx(0.5 * (1 - math.sqrt(0.5)), abs=1e-12)
    assert m_c == pytest.approx(0.1464466, abs=1e-7)
    assert m_c_prime == 0.0


def test_critical_margins_skewed_priors():
    # single-state domain opens up when eta1 <= eta2 * S
    m_c, m_c_prime = critical_margins(0.2, 0.8, 0.5)
    expected = (0.2 - math.sqrt(0.08)) ** 2 / (1 - 2 * math.sqrt(0.08))
    assert m_c_prime == pytest.approx(expected, abs=1e-12)
    assert m_c_prime == pytest.approx(0.01580171, abs=1e-8)
    assert 0.0 <= m_c_prime <= m_c <= 1.0


def test_critical_margins_orthogonal():
    assert critical_margins(0.5, 0.5, 0.0) == (0.0, 0.0)


def test_critical_margins_guard_at_singular_denominator():
    m_c, m_c_prime = critical_margins(0.5, 0.5, 1.0)
    assert m_c == pytest.approx(0.5)
    assert m_c_prime == 0.0


def test_critical_margins_rejects_bad_priors():
    with pytest.raises(InvalidPriors):
        critical_margins(0.8, 0.2, 0.5)


def test_p_max_pure_three_values():
    value, domain = p_max_pure(0.5, 0.5, 0.5, 1.0)
    assert value == pytest.approx(0.8535533905932737, abs=1e-12)
    assert domain is TwoUnitaryDomain.MINIMUM_ERROR
    value, domain = p_max_pure(0.5, 0.5, 0.5, 0.0)
    assert value == pytest.approx(0.29289321881345254, abs=1e-12)
    assert domain is TwoUnitaryDomain.INTERMEDIATE
    value, domain = p_max_pure(0.5, 0.5, 1.0, 0.5)
    assert value == pytest.approx(0.5)
    assert domain is TwoUnitaryDomain.MINIMUM_ERROR


def test_p_max_pure_single_state_branch():
    eta1, eta2, s = 0.2, 0.8, 0.5
    _, m_c_prime = critical_margins(eta1, eta2, s)
    m = 0.5 * m_c_prime
    value, domain = p_max_pure(eta1, eta2, s, m)
    expected = eta2 * (
        math.sqrt(m * s / eta1) + math.sqrt((eta1 - m) * (1 - s) / eta1)
    ) ** 2
    assert domain is TwoUnitaryDomain.SINGLE_STATE
    assert value == pytest.approx(expected, abs=1e-14)


def test_p_max_branch_continuity():
    rng = np.random.default_rng(9)
    for _ in range(50):
        eta1 = float(rng.uniform(0.01, 0.5))
        s = float(rng.uniform(0.01, 0.99))
        m_c, m_c_prime = critical_margins(eta1, 1 - eta1, s)
        for m_star in (m_c, m_c_prime):
            if not 1e-9 < m_star < 1 - 1e-9:
                continue
            lo = p_max_pure(eta1, 1 - eta1, s, m_star - 1e-13)[0]
            hi = p_max_pure(eta1, 1 - eta1, s, m_star + 1e-13)[0]
            assert abs(hi - lo) <= 1e-10


def test_p_max_monotone_concave_in_margin():
    rng = np.random.default_rng(10)
    grid = np.linspace(0.0, 1.0, 101)
    for _ in range(50):
        eta1 = float(rng.uniform(0.0, 0.5))
        s = float(rng.uniform(0.0, 1.0))
        values = [p_max_pure(eta1, 1 - eta1, s, m)[0] for m in grid]
        diffs = np.diff(values)
        assert diffs.min() >= -1e-12
        assert np.diff(diffs).max() <= 1e-9


def test_p_max_nonincreasing_in_overlap():
    rng = np.random.default_rng(11)
    ss = np.linspace(0.0, 1.0, 101)
    for _ in range(20):
        eta1 = float(rng.uniform(0.0, 0.5))
        m = float(rng.uniform(0.0, 1.0))
        values = [p_max_pure(eta1, 1 - eta1, s, m)[0] for s in ss]
        assert np.diff(values).max() <= 1e-12


def test_solve_commuting_pair_is_perfect():
    pair = UnitaryPair(np.diag([1.0, 1.0]), np.diag([1.0, -1.0]))
    for m in (0.0, 0.3, 1.0):
        assert solve(pair, m).p_max == pytest.approx(1.0)


def test_solve_quarter_turn_values():
    assert solve(QUBIT_PAIR, 1.0).p_max == pytest.approx(0.8535534, abs=1e-7)
    res = solve(QUBIT_PAIR, 0.05)
    assert res.p_max == pytest.approx((math.sqrt(0.05) + math.sqrt(1 - math.sqrt(0.5))) ** 2, abs=1e-12)
    assert res.p_max == pytest.approx(0.5849235, abs=1e-7)
    assert res.povm is None
    assert res.input_state is not None


def test_solve_orders_priors():
    pair = UnitaryPair(np.eye(2), np.diag([1.0, 1j]), 0.8, 0.2)
    assert pair.swapped
    assert pair.eta1 == 0.2
    prof, _ = profile(pair)
    assert prof.swapped


def test_ancilla_invariance():
    assert ancilla_invariance_check(QUBIT_PAIR, 1)
    assert ancilla_invariance_check(QUBIT_PAIR, 2)
    rng = np.random.default_rng(12)
    for _ in range(5):
        pair = UnitaryPair(haar_unitary(rng, 3), haar_unitary(rng, 3), 0.4, 0.6)
        assert ancilla_invariance_check(pair, 3)
