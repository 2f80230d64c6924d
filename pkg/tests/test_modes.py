from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from vsheet import (
    DegenerateEigenvector,
    FrequencyPoint,
    SeparationFailed,
    boundary_point,
    reduced_symbol_closed,
    sample_hemisphere,
    separation_basis,
    triangularize,
)
from vsheet.modes import nondegeneracy_value, triangularize_batch

ANCHOR = FrequencyPoint(1.0, 0.0, 0.0)


class TestSeparationBasis:
    def test_anchor_picks_n_branch(self, case1):
        # at (1, 0, 0) the off-diagonal entry m vanishes, so a = m alpha = 0
        basis = separation_basis(case1, ANCHOR)
        assert basis.pivot_r == "n"
        assert basis.pivot_l == "n"
        assert basis.z_r == pytest.approx(0.0)
        assert basis.z_l == pytest.approx(0.0)

    def test_anchor_diagonalizes(self, case1):
        u, t = triangularize(case1, ANCHOR)
        np.testing.assert_allclose(u, np.diag([-1.0, 1.0, -1.0, 1.0]),
                                   atol=1e-12)
        assert abs(np.linalg.det(t)) > 1e-12

    def test_symbol_pole_refused(self, case1):
        # tau + i v eta = 0 kills alpha; the eigenvector stays finite
        # (a = -F^4 eta^4 / 2c) but no z pivot exists at the pole
        fp = boundary_point(-case1.v, case1.v)
        with pytest.raises(SeparationFailed):
            separation_basis(case1, fp)

    def test_degenerate_eigenvector_at_zero_deformation(self):
        # with F = 0 every component carries an s^2 factor, so the
        # eigenvector itself vanishes at tau + i v eta = 0
        from vsheet import FluidState

        el = FluidState(v=2.0, c=1.0).as_elastic()
        fp = boundary_point(-el.v, el.v)
        with pytest.raises(DegenerateEigenvector):
            separation_basis(el, fp)


class TestTriangularize:
    def test_structure_at_random_points(self, states):
        for st in states.values():
            g, d, e = sample_hemisphere(40, st.v, seed=17, gamma_min=1e-3)
            for gi, di, ei in zip(g, d, e):
                fp = FrequencyPoint(gi, di, ei)
                u, t = triangularize(st, fp)
                a = reduced_symbol_closed(st, fp).a_mat
                scale = np.max(np.abs(a))
                # exact triangular pattern: zeros below each 2x2 diagonal
                assert abs(u[1, 0]) <= 1e-10 * scale
                assert abs(u[3, 2]) <= 1e-10 * scale
                assert np.max(np.abs(u[:2, 2:])) <= 1e-10 * scale
                assert np.max(np.abs(u[2:, :2])) <= 1e-10 * scale
                # eigenvalues on the diagonal in (omega, -omega) pairs
                assert u[0, 0] == pytest.approx(-u[1, 1], rel=1e-9)
                assert u[2, 2] == pytest.approx(-u[3, 3], rel=1e-9)

    def test_forced_wrong_pivot_fails(self, case1):
        # at the anchor the m-component is zero, so the m-pivot column is
        # parallel to the eigenvector and T is singular
        basis = separation_basis(case1, ANCHOR)
        forced = dataclasses.replace(basis, pivot_r="m", pivot_l="m")
        with pytest.raises(SeparationFailed):
            triangularize(case1, ANCHOR, basis=forced)

    def test_frozen_basis_tracks_nearby_points(self, case1):
        fp = FrequencyPoint(0.3, 0.2, 0.4)
        basis = separation_basis(case1, fp)
        for eps in (1e-6, 1e-4):
            fp2 = FrequencyPoint(0.3 + eps, 0.2 - eps, 0.4 + eps)
            u, _ = triangularize(case1, fp2, basis=basis)
            a = reduced_symbol_closed(case1, fp2).a_mat
            scale = np.max(np.abs(a))
            assert abs(u[1, 0]) <= 1e-8 * scale

    def test_batch_matches_scalar(self, states):
        for st in states.values():
            g, d, e = sample_hemisphere(200, st.v, seed=23, gamma_min=1e-3)
            resid = triangularize_batch(st, g, d, e)
            assert resid.shape == (200,)
            assert float(np.max(resid)) < 1e-10


class TestNondegeneracy:
    def test_matches_direct_formula(self, states):
        from vsheet import omega as omega_fn

        for st in states.values():
            fp = FrequencyPoint(0.37, 0.21, 0.53)
            for side, sgn in (("right", 1.0), ("left", -1.0)):
                w = omega_fn(st, side, fp)
                s = fp.tau + 1j * sgn * st.v * fp.eta
                expected = s * w - st.c * (w * w - fp.eta ** 2)
                got = nondegeneracy_value(st, side, fp)
                assert got == pytest.approx(expected, rel=1e-12)

    def test_positive_min_over_samples(self, states, coincidence):
        from vsheet.lopatinskii import nondegeneracy_min

        for st in list(states.values()) + [coincidence]:
            g, d, e = sample_hemisphere(2000, st.v, seed=29, gamma_min=1e-3)
            nd_r, nd_l = nondegeneracy_min(st, g, d, e)
            assert nd_r > 0.0
            assert nd_l > 0.0
