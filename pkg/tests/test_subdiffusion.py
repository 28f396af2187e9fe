"""Subdiffusion finite-difference solvers and their linear algebra."""

import math

import numpy as np
import pytest

from fracsolve.caputo import Scheme
from fracsolve.relaxation import PowerSum
from fracsolve.specfun import ml_relaxation_exact, zeta_unit_strip
from fracsolve.subdiffusion import (Sampled, SeparableForcing, SineMode,
                                    SubdiffusionProblem, TridiagonalSystem,
                                    build_system, corrected_problem,
                                    exact_single_mode,
                                    fourier_sine_coefficients, solve_corrected,
                                    solve_l1, solve_ml1, thomas_solve)

ETA_REFERENCE = 72.28242233197722   # Gamma(1.5) * 0.05^0.5 / (pi * 0.05 / 3)^2
E_HALF_AT_MINUS_1 = 0.4275835761558070


class TestBuildSystem:
    def test_reference_eta(self):
        h = math.pi * 0.05 / 3.0
        system = build_system(0.5, 0.05, h, 60, Scheme.L1)
        eta = -system.upper[0]
        assert eta == pytest.approx(ETA_REFERENCE, rel=1e-13)
        assert system.main[0] == pytest.approx(1.0 + 2.0 * eta, rel=1e-14)

    def test_l1_dominance_margin_is_one(self):
        system = build_system(0.5, 0.1, 0.2, 10, Scheme.L1)
        margin = system.main[1] - abs(system.lower[0]) - abs(system.upper[1])
        assert margin == pytest.approx(1.0, abs=1e-12)

    def test_ml1_shift_is_minus_zeta(self):
        l1 = build_system(0.5, 0.1, 0.2, 10, Scheme.L1)
        ml1 = build_system(0.5, 0.1, 0.2, 10, Scheme.MODIFIED_L1)
        shift = ml1.main[0] - l1.main[0]
        assert shift == pytest.approx(-zeta_unit_strip(-0.5), rel=1e-13)
        assert shift > 0.0

    def test_dimension(self):
        assert build_system(0.3, 0.1, 0.1, 7).dim == 6

    def test_rejects_single_interval(self):
        with pytest.raises(ValueError):
            build_system(0.5, 0.1, 0.2, 1)


class TestTridiagonalSolve:
    def test_system_requires_dominance(self):
        with pytest.raises(ValueError):
            TridiagonalSystem(np.array([-1.0]), np.array([1.0, 1.0]),
                              np.array([-1.0]))

    def test_identity_system(self):
        system = TridiagonalSystem(np.zeros(4), np.ones(5), np.zeros(4))
        rhs = np.array([3.0, -1.0, 0.5, 2.0, 7.0])
        assert np.array_equal(thomas_solve(system, rhs), rhs)

    def test_matches_dense_oracle_on_random_systems(self):
        rng = np.random.default_rng(1234)
        for dim in range(1, 9):
            for _ in range(5):
                lower = rng.uniform(-1.0, 1.0, size=dim - 1)
                upper = rng.uniform(-1.0, 1.0, size=dim - 1)
                main = rng.uniform(2.5, 4.0, size=dim)
                rhs = rng.uniform(-5.0, 5.0, size=dim)
                system = TridiagonalSystem(lower, main, upper)
                dense = (np.diag(main) + np.diag(lower, -1) + np.diag(upper, 1))
                expected = np.linalg.solve(dense, rhs)
                got = thomas_solve(system, rhs)
                assert np.max(np.abs(got - expected)) <= 1e-12

    def test_consistent_with_matrix_action(self):
        eta = 0.8
        off = np.full(4, -eta)
        system = TridiagonalSystem(off, np.full(5, 1.0 + 2.0 * eta), off.copy())
        ones = np.ones(5)
        dense = (np.diag(system.main) + np.diag(system.lower, -1)
                 + np.diag(system.upper, 1))
        got = thomas_solve(system, dense @ ones)
        assert np.max(np.abs(got - ones)) <= 1e-13

    def test_residual_bound(self):
        system = build_system(0.3, 0.01, math.pi / 40, 40)
        rng = np.random.default_rng(7)
        rhs = rng.uniform(-1.0, 1.0, size=system.dim)
        x = thomas_solve(system, rhs)
        dense = (np.diag(system.main) + np.diag(system.lower, -1)
                 + np.diag(system.upper, 1))
        assert np.max(np.abs(dense @ x - rhs)) <= 1e-11 * np.max(np.abs(rhs))

    def test_rejects_wrong_rhs_length(self):
        system = build_system(0.5, 0.1, 0.2, 10)
        with pytest.raises(ValueError):
            thomas_solve(system, np.ones(3))


def single_mode_problem(alpha, N, M, k=1, T=1.0):
    return SubdiffusionProblem(alpha=alpha, N=N, M=M, T=T, initial=SineMode(k))


class TestSolvers:
    def test_zero_data_gives_zero_solution(self):
        problem = SubdiffusionProblem(alpha=0.5, N=8, M=5, T=1.0,
                                      initial=Sampled(np.zeros(9)))
        for solve in (solve_l1, solve_ml1):
            assert not np.any(solve(problem).values)

    def test_boundary_columns_are_exact_zeros(self):
        sol = solve_l1(single_mode_problem(0.5, 12, 8))
        assert not np.any(sol.values[:, 0])
        assert not np.any(sol.values[:, -1])

    def test_initial_row_matches_profile(self):
        problem = single_mode_problem(0.5, 12, 8)
        sol = solve_ml1(problem)
        assert np.array_equal(sol.values[0, 1:-1], np.sin(sol.x[1:-1]))

    def test_discrete_max_is_non_increasing(self):
        for alpha, scheme in ((0.5, Scheme.L1), (0.3, Scheme.MODIFIED_L1)):
            problem = single_mode_problem(alpha, 60, 20)
            sol = (solve_ml1(problem) if scheme is Scheme.MODIFIED_L1
                   else solve_l1(problem))
            peaks = np.max(np.abs(sol.values), axis=1)
            assert np.all(np.diff(peaks) <= 1e-15)

    def test_mode_invariance(self):
        k = 3
        problem = single_mode_problem(0.5, 40, 25, k=k)
        sol = solve_l1(problem)
        s = np.sin(k * sol.x[1:-1])
        worst = 0.0
        for level in sol.values[:, 1:-1]:
            c = (level @ s) / (s @ s)
            worst = max(worst, np.max(np.abs(level - c * s)))
        assert worst <= 1e-10

    def test_converges_to_exact_profile(self):
        problem = single_mode_problem(0.5, 120, 40)
        sol = solve_l1(problem)
        x = sol.x[1:-1]
        exact = np.sin(x) * ml_relaxation_exact(0.5, 1.0, 1.0)
        assert np.max(np.abs(sol.final[1:-1] - exact)) < 2e-3

    def test_ml1_needs_two_levels(self):
        with pytest.raises(ValueError):
            solve_ml1(single_mode_problem(0.5, 8, 1))

    def test_sampled_profile_validation(self):
        with pytest.raises(ValueError):
            SubdiffusionProblem(alpha=0.5, N=8, M=4, T=1.0,
                                initial=Sampled(np.zeros(5)))
        bad = np.ones(9)
        with pytest.raises(ValueError):
            SubdiffusionProblem(alpha=0.5, N=8, M=4, T=1.0, initial=Sampled(bad))


class TestExactSingleMode:
    def test_initial_profile(self):
        assert exact_single_mode(0.5, 2, 0.7, 0.0) == math.sin(1.4)

    def test_reference_point(self):
        got = exact_single_mode(0.5, 1, math.pi / 2.0, 1.0)
        assert got == pytest.approx(E_HALF_AT_MINUS_1, rel=1e-13)

    def test_boundary_values(self):
        assert exact_single_mode(0.5, 1, 0.0, 0.5) == 0.0
        assert abs(exact_single_mode(0.5, 3, math.pi, 0.5)) <= 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            exact_single_mode(0.5, 1, -0.1, 1.0)
        with pytest.raises(ValueError):
            exact_single_mode(0.5, 0, 1.0, 1.0)


class TestFourierSineCoefficients:
    def test_first_mode(self):
        c = fourier_sine_coefficients(math.sin, 4)
        assert np.allclose(c, [1.0, 0.0, 0.0, 0.0], atol=1e-10)

    def test_sine_mode_shortcut_is_exact(self):
        c = fourier_sine_coefficients(SineMode(3), 5)
        assert c.tolist() == [0.0, 0.0, 1.0, 0.0, 0.0]

    def test_third_mode_callable(self):
        c = fourier_sine_coefficients(lambda s: math.sin(3.0 * s), 5)
        assert np.allclose(c, [0.0, 0.0, 1.0, 0.0, 0.0], atol=1e-10)

    def test_parabola_closed_form(self):
        c = fourier_sine_coefficients(lambda s: s * (math.pi - s), 6)
        for n in range(1, 7):
            expected = 8.0 / (math.pi * n ** 3) if n % 2 else 0.0
            assert c[n - 1] == pytest.approx(expected, abs=1e-10)

    def test_rejects_sampled_profiles(self):
        with pytest.raises(TypeError):
            fourier_sine_coefficients(Sampled(np.zeros(9)), 3)


class TestCorrected:
    def test_corrected_problem_shape(self):
        problem = corrected_problem(0.3, 7, T=1.0, N=30, M=10)
        assert isinstance(problem.initial, Sampled)
        assert not np.any(problem.initial.values)
        ((c, p),) = problem.forcing.time_profile.terms
        assert problem.forcing.mode == 1
        assert p == pytest.approx(2.1)
        assert c == pytest.approx(1.0 / math.gamma(3.1), rel=1e-14)
        assert c > 0.0   # (-1)^(m+1) with m = 7

    def test_rejects_insufficient_degree(self):
        with pytest.raises(ValueError):
            corrected_problem(0.3, 6, T=1.0, N=30, M=10)

    def test_initial_level_reproduces_sine(self):
        sol = solve_corrected(0.3, 7, T=1.0, N=24, M=8, scheme=Scheme.L1)
        x = sol.x
        assert np.max(np.abs(sol.values[0, 1:-1] - np.sin(x[1:-1]))) <= 1e-15
        assert sol.values[0, 0] == 0.0 and sol.values[0, -1] == 0.0

    def test_boundary_stays_zero(self):
        sol = solve_corrected(0.3, 7, T=1.0, N=24, M=8, scheme=Scheme.MODIFIED_L1)
        assert not np.any(sol.values[:, 0])
        assert not np.any(sol.values[:, -1])

    def test_correction_beats_plain_scheme(self):
        N, M = 120, 40
        plain = solve_l1(single_mode_problem(0.3, N, M))
        corrected = solve_corrected(0.3, 7, 1.0, N, M, Scheme.L1)
        x = plain.x[1:-1]
        exact = np.sin(x) * ml_relaxation_exact(0.3, 1.0, 1.0)
        err_plain = np.max(np.abs(plain.final[1:-1] - exact))
        err_corrected = np.max(np.abs(corrected.final[1:-1] - exact))
        assert err_corrected < err_plain / 10.0


def test_separable_forcing_validation():
    with pytest.raises(ValueError):
        SeparableForcing(0, PowerSum(((1.0, 2.0),)))
