import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from qeit.dynamics import (build_sector, dark_state_coherences, evolve, expm_eig, expm_pade,
                           probe_chi, relaxation_rate, steady_state)
from qeit.params import SingularSectorError, SystemParams
from qeit.susceptibility import chi_sector

P = SystemParams(gamma2=0.7, gamma3=0.05, g1=0.3, g2=0.4)


def random_problem(rng):
    g = SystemParams(gamma1=rng.uniform(0.2, 2), gamma2=rng.uniform(0.05, 2),
                     gamma3=rng.uniform(1e-3, 0.5), g1=rng.uniform(0, 1), g2=rng.uniform(0, 1))
    s = build_sector(g, "bc"[rng.integers(2)], int(rng.integers(0, 20)),
                     int(rng.integers(0, 20)), rng.uniform(-2, 2))
    R0 = rng.normal(size=3) + 1j * rng.normal(size=3)
    return s, R0 / np.linalg.norm(R0)


def ode_solution(M, A, R0, t):
    def rhs(_, y):
        r = y[:3] + 1j * y[3:]
        d = -M @ r + A
        return np.concatenate([d.real, d.imag])
    sol = solve_ivp(rhs, (0, t), np.concatenate([R0.real, R0.imag]), method="DOP853",
                    rtol=1e-12, atol=1e-13)
    y = sol.y[:, -1]
    return y[:3] + 1j * y[3:]


# -- build_sector ----------------------------------------------------------------

def test_case_a_drops_probe_terms():
    s = build_sector(P, "a", 7, 3, 0.2)
    assert s.M[1, 2] == 0 and s.M[2, 1] == 0
    np.testing.assert_array_equal(s.A, [0.5j, 0, 0])


def test_uncoupled_matrix_is_diagonal():
    g = SystemParams(gamma2=0.7, gamma3=0.05, g1=0.0, g2=0.0)
    s = build_sector(g, "b", 3, 3, 0.2)
    np.testing.assert_array_equal(s.M, np.diag([1 + 0.2j, 0.05 + 0.2j, 0.7]))


def test_structural_zeros_and_a2():
    s = build_sector(P, "c", 2, 5, -0.4)
    assert s.M[0, 2] == 0 and s.M[2, 0] == 0
    assert s.A[1] == 0


def test_case_c_populations():
    s = build_sector(SystemParams(g1=1.0, g2=1.0), "c", 4, 3, 0.0)
    assert s.rho_bb0 == pytest.approx(0.5, rel=1e-15)
    assert s.rho_cc0 == pytest.approx(0.5, rel=1e-15)


def test_build_sector_rejects():
    with pytest.raises(ValueError, match="unknown case"):
        build_sector(P, "d", 0, 0, 0.0)
    with pytest.raises(ValueError):
        build_sector(P, "b", 1, 1, 0.0, rho_bb0=0.8, rho_cc0=0.5)


def test_eigenvalues_in_right_half_plane():
    rng = np.random.default_rng(1)
    for _ in range(50):
        s, _ = random_problem(rng)
        assert relaxation_rate(s.M) >= 0


# -- steady_state ----------------------------------------------------------------

def test_zero_drive_zero_state():
    s = build_sector(P, "b", 1, 2, 0.3)
    assert steady_state(s.M, np.zeros(3)) == (0, 0, 0)


def test_two_level_limit():
    g = SystemParams(gamma3=0.05, g1=0.0, g2=0.0)
    s = build_sector(g, "a", 0, 0, 0.3)
    r = steady_state(s.M, s.A)
    assert r.rho_ab == pytest.approx(0.5j / (1 + 0.3j), rel=1e-14)


def test_perfect_eit_null():
    g = SystemParams(gamma3=0.0)
    s = build_sector(g, "a", 0, 500, 0.0)
    assert abs(steady_state(s.M, s.A).rho_ab) <= 1e-16


def test_residual_small():
    s = build_sector(P, "c", 3, 8, 0.1)
    r = np.array(steady_state(s.M, s.A))
    assert np.linalg.norm(s.M @ r - s.A) <= 1e-12 * np.linalg.norm(s.A)


def test_singular_matrix_named():
    g = SystemParams(gamma3=0.0, g1=0.0, g2=0.0)
    s = build_sector(g, "a", 0, 0, 0.0)
    with pytest.raises(SingularSectorError, match="n2=0"):
        steady_state(s.M, s.A, s.label)


@given(st.lists(st.floats(0.1, 100), min_size=3, max_size=3))
@settings(max_examples=30, deadline=None)
def test_row_scaling_invariance(scales):
    s = build_sector(P, "c", 2, 4, 0.25)
    D = np.diag(scales)
    a = np.array(steady_state(s.M, s.A))
    b = np.array(steady_state(D @ s.M, D @ s.A))
    np.testing.assert_allclose(b, a, rtol=1e-12, atol=1e-15)


# -- evolve ----------------------------------------------------------------------

def test_t_zero_is_identity():
    s = build_sector(P, "b", 1, 2, 0.3)
    R0 = dark_state_coherences(P, 1, 2, 0.3)
    assert evolve(s.M, s.A, R0, 0.0) == R0


def test_long_time_reaches_steady_state():
    s = build_sector(P, "b", 1, 2, 0.3)
    R0 = np.array(dark_state_coherences(P, 1, 2, 0.3))
    t = 50 / relaxation_rate(s.M)
    diff = np.array(evolve(s.M, s.A, R0, t)) - np.array(steady_state(s.M, s.A))
    assert np.linalg.norm(diff) <= 1e-8


def test_infinite_time_is_steady_state():
    s = build_sector(P, "b", 1, 2, 0.3)
    assert evolve(s.M, s.A, np.zeros(3), math.inf) == steady_state(s.M, s.A)


def test_negative_time_rejected():
    s = build_sector(P, "b", 1, 2, 0.3)
    with pytest.raises(ValueError):
        evolve(s.M, s.A, np.zeros(3), -1.0)


def test_matches_ode_integration():
    rng = np.random.default_rng(7)
    for _ in range(20):
        s, R0 = random_problem(rng)
        got = np.array(evolve(s.M, s.A, R0, 3.0))
        assert np.linalg.norm(got - ode_solution(s.M, s.A, R0, 3.0)) <= 1e-8


def test_semigroup():
    rng = np.random.default_rng(3)
    for _ in range(20):
        s, R0 = random_problem(rng)
        t1, t2 = rng.uniform(0, 5, 2)
        once = np.array(evolve(s.M, s.A, R0, t1 + t2))
        twice = np.array(evolve(s.M, s.A, evolve(s.M, s.A, R0, t1), t2))
        assert np.linalg.norm(once - twice) <= 1e-10


def test_relaxation_envelope():
    rng = np.random.default_rng(11)
    for _ in range(20):
        s, R0 = random_problem(rng)
        rss = np.array(steady_state(s.M, s.A))
        lam = relaxation_rate(s.M)
        V = np.linalg.eig(s.M)[1]
        bound_c = np.linalg.cond(V)
        for t in (0.5, 2.0, 8.0):
            d = np.linalg.norm(np.array(evolve(s.M, s.A, R0, t)) - rss)
            assert d <= np.linalg.norm(R0 - rss) * math.exp(-lam * t) * bound_c * (1 + 1e-9)


def test_eig_and_pade_paths_agree():
    rng = np.random.default_rng(5)
    for _ in range(50):
        s, _ = random_problem(rng)
        X = -s.M * rng.uniform(0, 10)
        E = expm_eig(X)
        if E is not None:
            np.testing.assert_allclose(E, expm_pade(X), atol=1e-10, rtol=0)


def test_defective_matrix_uses_pade():
    X = np.array([[1.0, 1.0, 0], [0, 1.0, 0], [0, 0, 2.0]], dtype=complex)
    assert expm_eig(X) is None


def test_singular_matrix_finite_time():
    g = SystemParams(gamma3=0.0, g1=0.0, g2=0.0)
    s = build_sector(g, "a", 0, 0, 0.0)
    r = evolve(s.M, s.A, np.zeros(3), 2.0)
    # rho_cb has zero rate and zero drive; rho_ab relaxes normally
    assert r.rho_cb == 0
    assert r.rho_ab == pytest.approx(0.5j * (1 - math.exp(-2.0)), rel=1e-12)
    with pytest.raises(SingularSectorError):
        evolve(s.M, s.A, np.zeros(3), math.inf)


# -- consistency with the closed-form susceptibility -----------------------------

def test_probe_chi_matches_closed_form_case_a():
    for n2 in (0, 10, 500):
        for d in (-0.7, 0.0, 0.3):
            got = probe_chi(P, "a", 3, n2, d)
            want = chi_sector("a", P, 3, n2, d).complex
            assert abs(got - want) <= 1e-12 * max(abs(want), 1e-3)


def test_case_b_dynamics_reduce_without_probe_coupling():
    # the coupling-only closed form ignores the probe vacuum coupling
    g = P.with_(g1=0.0)
    for d in (-0.7, 0.3):
        got = probe_chi(g, "b", 3, 20, d)
        assert abs(got - chi_sector("b", g, 3, 20, d).complex) <= 1e-12


def test_probe_chi_matches_case_c():
    for n1, n2 in ((0, 0), (4, 3), (12, 40)):
        for d in (-0.5, 0.2):
            got = probe_chi(P, "c", n1, n2, d)
            want = chi_sector("c", P, n1, n2, d).complex
            assert abs(got - want) <= 1e-12 * abs(want)


def test_dark_state_coherences_resonant():
    r = dark_state_coherences(SystemParams(g1=1.0, g2=1.0), 4, 3, 0.0)
    assert r.rho_ab == 0 and r.rho_ca == 0
    assert r.rho_cb == pytest.approx(-0.5)
