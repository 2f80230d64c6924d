from __future__ import annotations

import numpy as np
import pytest

from vsheet import (
    FrequencyPoint,
    NearSingularBoundary,
    boundary_point,
    energy_probe,
    reconstruct_front,
    sample_hemisphere,
    solve_decaying,
)
from vsheet.bvp import (
    boundary_data_from_front,
    decay_envelope_margin,
    ode_residual_fd,
)

GENERIC = FrequencyPoint(0.3, 0.2, 0.4)


class TestSolveDecaying:
    def test_anchor_solution(self, case1):
        # at (1, 0, 0) the boundary matrix is [[2, 2], [-2, 2]], so
        # h = (2, -2) is solved by z = (1, 0): the right mode alone
        sol = solve_decaying(case1, FrequencyPoint(1.0, 0.0, 0.0),
                             np.array([2.0, -2.0]))
        np.testing.assert_allclose(sol.z_coeffs, [1.0, 0.0], atol=1e-14)
        np.testing.assert_allclose(sol.w_nc0, sol.e_minus_r, atol=1e-14)
        assert sol.omega_r == pytest.approx(-1.0)

    def test_boundary_residual_small(self, case1):
        sol = solve_decaying(case1, GENERIC, np.array([1.0, 0.5]))
        assert sol.boundary_residual <= 1e-12

    def test_profile_starts_at_trace_and_decays(self, case1):
        sol = solve_decaying(case1, GENERIC, np.array([1.0, 0.5]))
        np.testing.assert_allclose(sol.profile(0.0), sol.w_nc0, atol=1e-14)
        x2 = np.linspace(0.0, 6.0, 50)
        assert decay_envelope_margin(sol, x2) <= 1e-12

    def test_ode_residual(self, case1):
        sol = solve_decaying(case1, GENERIC, np.array([1.0, 0.5]))
        for x2 in (0.3, 0.7, 2.0):
            assert ode_residual_fd(case1, GENERIC, sol, x2) <= 1e-8

    def test_refuses_near_root(self, case1):
        fp = boundary_point(case1.v, case1.v, gamma=1e-13)
        with pytest.raises(NearSingularBoundary):
            solve_decaying(case1, fp, np.array([1.0, 0.5]))

    def test_rejects_bad_shape(self, case1):
        with pytest.raises(ValueError):
            solve_decaying(case1, GENERIC, np.array([1.0, 0.5, 0.0]))


class TestFrontReconstruction:
    def test_round_trip(self, states):
        rng = np.random.default_rng(8)
        for st in states.values():
            w8 = rng.normal(size=8) + 1j * rng.normal(size=8)
            phi0 = complex(0.7, -0.3)
            g = boundary_data_from_front(st, GENERIC, w8, phi0)
            assert g.shape == (7,)
            phi = reconstruct_front(st, GENERIC, w8, g)
            assert abs(phi - phi0) <= 1e-12 * (1.0 + abs(phi0))

    def test_round_trip_on_random_points(self, case1):
        rng = np.random.default_rng(9)
        g_, d_, e_ = sample_hemisphere(20, case1.v, seed=31, gamma_min=1e-2)
        for gi, di, ei in zip(g_, d_, e_):
            fp = FrequencyPoint(gi, di, ei)
            w8 = rng.normal(size=8) + 1j * rng.normal(size=8)
            phi0 = complex(-0.2, 1.1)
            g = boundary_data_from_front(case1, fp, w8, phi0)
            phi = reconstruct_front(case1, fp, w8, g)
            assert abs(phi - phi0) <= 1e-11 * (1.0 + abs(phi0))

    def test_shape_checks(self, case1):
        with pytest.raises(ValueError):
            reconstruct_front(case1, GENERIC, np.ones(7), np.ones(7))
        with pytest.raises(ValueError):
            reconstruct_front(case1, GENERIC, np.ones(8), np.ones(8))


class TestEnergyProbe:
    def test_blowup_rate_at_simple_root(self, case1):
        res = energy_probe(case1, case1.v)
        assert res.fit_sigma.exponent == pytest.approx(1.0, abs=0.15)
        assert res.fit_wnc.exponent == pytest.approx(-1.0, abs=0.15)

    def test_double_root_rate(self, states):
        res = energy_probe(states["Case5"], 0.0)
        assert res.fit_sigma.exponent == pytest.approx(2.0, abs=0.15)
        assert res.fit_wnc.exponent == pytest.approx(-2.0, abs=0.15)

    def test_off_root_is_bounded(self, case1):
        res = energy_probe(case1, 1.0)
        assert abs(res.fit_sigma.exponent) < 0.1
        assert abs(res.fit_wnc.exponent) < 0.1
