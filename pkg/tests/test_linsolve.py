"""Tests for the regularized batch solve and the RLS recursion."""

import numpy as np
import pytest

from occelm.linsolve import RlsState, rls_init, rls_update, solve_regularized
from occelm.errors import (
    DimensionMismatch,
    RankDeficient,
    SingularSystem,
    TooFewInitialSamples,
)


class TestSolveRegularized:
    def test_identity_omega_scales_rhs(self):
        """With Omega = I and C = 1 the system is 2 beta = T."""
        T = np.array([2.0, 4.0, -6.0])
        beta = solve_regularized(np.eye(3), T, 1.0)
        np.testing.assert_allclose(beta, T / 2.0, atol=1e-12)

    def test_zero_omega_recovers_c_times_t(self):
        """Omega = 0 collapses to beta = C * T."""
        T = np.array([[1.0, -1.0], [0.5, 2.0]])
        beta = solve_regularized(np.zeros((2, 2)), T, 10.0)
        np.testing.assert_allclose(beta, 10.0 * T, atol=1e-10)

    def test_residual_bound(self):
        """Residual stays below 1e-8 * (1 + ||T||) on random PSD systems."""
        rng = np.random.default_rng(101)
        for trial in range(20):
            n = int(rng.integers(2, 40))
            G = rng.normal(0.0, 1.0, (n, n))
            omega = G @ G.T
            T = rng.normal(0.0, 1.0, (n, 2))
            C = float(10.0 ** rng.integers(-8, 9))
            beta = solve_regularized(omega, T, C)
            A = omega + np.eye(n) / C
            resid = np.linalg.norm(T - A @ beta)
            assert resid <= 1e-8 * (1.0 + np.linalg.norm(T))

    def test_matches_direct_inverse(self):
        rng = np.random.default_rng(55)
        G = rng.normal(0.0, 1.0, (12, 12))
        omega = G @ G.T
        T = rng.normal(0.0, 1.0, 12)
        beta = solve_regularized(omega, T, 100.0)
        expected = np.linalg.solve(omega + np.eye(12) / 100.0, T)
        np.testing.assert_allclose(beta, expected, atol=1e-9)

    def test_vector_rhs_keeps_shape(self):
        beta = solve_regularized(np.eye(2), np.array([1.0, 2.0]), 1.0)
        assert beta.shape == (2,)
        beta2 = solve_regularized(np.eye(2), np.array([[1.0], [2.0]]), 1.0)
        assert beta2.shape == (2, 1)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            solve_regularized(np.eye(2), np.zeros(2), 0.0)
        with pytest.raises(DimensionMismatch):
            solve_regularized(np.zeros((2, 3)), np.zeros(2), 1.0)
        with pytest.raises(DimensionMismatch):
            solve_regularized(np.eye(2), np.zeros(3), 1.0)

    def test_exactly_singular_system_raises(self):
        """Omega with eigenvalue -1/C makes the shifted matrix singular."""
        omega = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(SingularSystem):
            solve_regularized(omega, np.array([1.0, 0.0]), 1.0)


class TestRlsInit:
    def test_matches_normal_equations(self):
        rng = np.random.default_rng(77)
        H0 = rng.normal(0.0, 1.0, (15, 6))
        T0 = rng.normal(0.0, 1.0, (15, 2))
        state = rls_init(H0, T0)
        G = H0.T @ H0
        np.testing.assert_allclose(state.P, np.linalg.inv(G), atol=1e-9)
        expected_beta, *_ = np.linalg.lstsq(H0, T0, rcond=None)
        np.testing.assert_allclose(state.beta, expected_beta, atol=1e-9)

    def test_p_is_symmetric(self):
        rng = np.random.default_rng(13)
        H0 = rng.normal(0.0, 1.0, (20, 8))
        state = rls_init(H0, rng.normal(0.0, 1.0, 20))
        np.testing.assert_array_equal(state.P, state.P.T)

    def test_needs_enough_rows(self):
        with pytest.raises(TooFewInitialSamples):
            rls_init(np.zeros((3, 5)), np.zeros(3))

    def test_rank_deficient_chunk_refused(self):
        H0 = np.ones((6, 3))
        with pytest.raises(RankDeficient):
            rls_init(H0, np.zeros(6))

    def test_row_count_mismatch(self):
        with pytest.raises(DimensionMismatch):
            rls_init(np.zeros((4, 2)), np.zeros(5))


class TestRlsUpdate:
    def test_single_chunk_matches_batch(self):
        """init + one update equals the batch least-squares fit."""
        rng = np.random.default_rng(3)
        H0 = rng.normal(0.0, 1.0, (12, 5))
        H1 = rng.normal(0.0, 1.0, (7, 5))
        T0 = rng.normal(0.0, 1.0, (12, 1))
        T1 = rng.normal(0.0, 1.0, (7, 1))
        state = rls_update(rls_init(H0, T0), H1, T1)
        H = np.vstack([H0, H1])
        T = np.vstack([T0, T1])
        expected, *_ = np.linalg.lstsq(H, T, rcond=None)
        np.testing.assert_allclose(state.beta, expected, atol=1e-9)
        np.testing.assert_allclose(state.P, np.linalg.inv(H.T @ H), atol=1e-9)

    def test_many_small_chunks_match_batch(self):
        """Row-at-a-time streaming agrees with the one-shot solution."""
        rng = np.random.default_rng(19)
        for trial in range(10):
            m = int(rng.integers(2, 7))
            n0 = m + int(rng.integers(0, 5))
            H0 = rng.normal(0.0, 1.0, (n0, m))
            T0 = rng.normal(0.0, 1.0, (n0, 2))
            state = rls_init(H0, T0)
            rows = [H0]
            ts = [T0]
            for _ in range(int(rng.integers(1, 15))):
                h = rng.normal(0.0, 1.0, (1, m))
                t = rng.normal(0.0, 1.0, (1, 2))
                state = rls_update(state, h, t)
                rows.append(h)
                ts.append(t)
            H = np.vstack(rows)
            T = np.vstack(ts)
            expected, *_ = np.linalg.lstsq(H, T, rcond=None)
            np.testing.assert_allclose(state.beta, expected, atol=1e-8)

    def test_update_returns_fresh_state(self):
        rng = np.random.default_rng(2)
        H0 = rng.normal(0.0, 1.0, (6, 3))
        state = rls_init(H0, rng.normal(0.0, 1.0, 6))
        P_before = state.P.copy()
        new = rls_update(state, rng.normal(0.0, 1.0, (1, 3)), [0.5])
        assert new is not state
        np.testing.assert_array_equal(state.P, P_before)

    def test_p_stays_symmetric(self):
        rng = np.random.default_rng(47)
        state = rls_init(
            rng.normal(0.0, 1.0, (10, 4)), rng.normal(0.0, 1.0, 10)
        )
        for _ in range(25):
            state = rls_update(
                state, rng.normal(0.0, 1.0, (2, 4)), rng.normal(0.0, 1.0, 2)
            )
            np.testing.assert_array_equal(state.P, state.P.T)

    def test_chunk_shape_checked(self):
        state = rls_init(np.eye(3), np.zeros(3))
        with pytest.raises(DimensionMismatch):
            rls_update(state, np.zeros((2, 4)), np.zeros(2))
        with pytest.raises(DimensionMismatch):
            rls_update(state, np.zeros((2, 3)), np.zeros(3))


class TestRlsState:
    def test_vector_beta_reshaped(self):
        state = RlsState(np.eye(2), np.array([1.0, 2.0]))
        assert state.beta.shape == (2, 1)
        assert state.m == 2
        assert state.k == 1

    def test_shape_validation(self):
        with pytest.raises(DimensionMismatch):
            RlsState(np.zeros((2, 3)), np.zeros(2))
        with pytest.raises(DimensionMismatch):
            RlsState(np.eye(2), np.zeros((3, 1)))
