from __future__ import annotations

import numpy as np
import pytest

from vsheet import (
    BackgroundState,
    FrequencyPoint,
    SymbolPole,
    assemble_boundary,
    assemble_interior,
    boundary_point,
    eigen_data,
    reduced_symbol_closed,
    reduced_symbol_via_elimination,
    sample_hemisphere,
)
from vsheet.symbol import (
    CHAR_INDICES,
    NC_INDICES,
    TRACE_INDICES,
    boundary_b,
    reconstruct_characteristic,
)

GENERIC = BackgroundState(v=1.3, f11=0.9, f12=0.4, c=1.1)


def _points(state, n, seed=11, gamma_min=1e-3):
    g, d, e = sample_hemisphere(n, state.v, seed=seed, gamma_min=gamma_min)
    return [FrequencyPoint(float(a), float(b), float(c))
            for a, b, c in zip(g, d, e)]


class TestInteriorAssembly:
    def test_shapes_and_symmetry(self):
        sm = assemble_interior(GENERIC)
        assert sm.a0.shape == (14, 14)
        assert sm.a1.shape == (14, 14)
        assert sm.a2.shape == (14, 14)
        assert sm.m_bdry.shape == (7, 8)
        assert sm.b_bdry.shape == (7, 2)
        np.testing.assert_array_equal(sm.a1, sm.a1.T)

    def test_a0_diagonal(self):
        sm = assemble_interior(GENERIC)
        c2 = GENERIC.c ** 2
        half = [1.0, 2.0 * c2, 2.0 * c2, 1.0, 1.0, 1.0, 1.0]
        np.testing.assert_allclose(np.diag(sm.a0), half + half, rtol=1e-15)
        assert np.count_nonzero(sm.a0 - np.diag(np.diag(sm.a0))) == 0

    def test_a2_supported_on_nc_rows(self):
        sm = assemble_interior(GENERIC)
        diag = np.diag(sm.a2)
        assert np.count_nonzero(sm.a2 - np.diag(diag)) == 0
        nz = {i for i, x in enumerate(diag) if x != 0.0}
        assert nz == set(NC_INDICES)
        c3 = GENERIC.c ** 3
        assert sorted(diag[list(NC_INDICES)]) == pytest.approx(
            sorted([2.0 * c3, -2.0 * c3, 2.0 * c3, -2.0 * c3]))

    def test_index_partitions(self):
        assert sorted(NC_INDICES + CHAR_INDICES) == list(range(14))
        assert set(NC_INDICES) <= set(TRACE_INDICES)
        assert len(TRACE_INDICES) == 8


class TestBoundaryReduction:
    def test_b_is_linear_pencil(self):
        st = GENERIC
        fp = FrequencyPoint(0.4, -0.2, 0.6)
        b = boundary_b(st, fp)
        expected = fp.tau * np.eye(7)[1] + 1j * fp.eta * np.array(
            [2 * st.v, st.v, 0.0, 2 * st.f11, st.f11, 2 * st.f12, st.f12])
        np.testing.assert_allclose(b, expected, atol=1e-15)

    def test_front_appears_only_in_third_row(self):
        st = GENERIC
        for fp in _points(st, 20):
            br = assemble_boundary(st, fp)
            qb = br.q_mat @ boundary_b(st, fp)
            mask = np.abs(qb) > 1e-12
            assert list(np.nonzero(mask)[0]) == [2]

    def test_theta_value_on_hemisphere(self):
        st = GENERIC
        for fp in _points(st, 50):
            br = assemble_boundary(st, fp)
            formula = (fp.gamma ** 2 + (fp.delta + st.v * fp.eta) ** 2
                       + 4.0 * st.v ** 2 * fp.eta ** 2
                       + 5.0 * st.f_sq * fp.eta ** 2)
            assert br.theta == pytest.approx(formula, abs=1e-13)

    def test_theta_anchor_and_degree_one(self):
        st = GENERIC
        assert assemble_boundary(st, FrequencyPoint(1.0, 0.0, 0.0)).theta \
            == pytest.approx(1.0)
        fp = FrequencyPoint(0.3, 0.2, 0.4)
        t0 = assemble_boundary(st, fp).theta
        t1 = assemble_boundary(st, fp.scaled(3.7)).theta
        assert t1 == pytest.approx(3.7 * t0, rel=1e-12)

    def test_beta_frozen_anchor(self):
        st = BackgroundState(v=1.0, f11=1.0, f12=0.0, c=1.0)
        br = assemble_boundary(st, FrequencyPoint(1.0, 0.0, 0.0))
        np.testing.assert_allclose(
            br.beta,
            np.array([[-1.0, 1.0, 1.0, -1.0], [-1.0, -1.0, 1.0, 1.0]]),
            atol=1e-14)

    def test_first_two_rows_act_on_nc_traces_only(self):
        st = GENERIC
        sm = assemble_interior(st)
        for fp in _points(st, 20):
            br = assemble_boundary(st, fp)
            qm = br.q_mat @ sm.m_bdry
            off = np.delete(qm[:2], [0, 1, 4, 5], axis=1)
            assert np.max(np.abs(off)) < 1e-12

    def test_q_invertible_on_hemisphere(self):
        st = GENERIC
        for fp in _points(st, 20):
            br = assemble_boundary(st, fp)
            assert np.linalg.cond(br.q_mat) < 1e3


class TestReducedSymbol:
    def test_block_structure(self):
        rs = reduced_symbol_closed(GENERIC, FrequencyPoint(0.3, 0.2, 0.4))
        a = rs.a_mat
        assert a[0, 0] == -a[1, 1] == rs.n_r
        assert a[1, 0] == -a[0, 1] == rs.m_r
        assert np.max(np.abs(a[:2, 2:])) == 0.0
        assert np.max(np.abs(a[2:, :2])) == 0.0

    def test_closed_matches_elimination(self, states):
        for st in states.values():
            for fp in _points(st, 25, seed=3):
                a1 = reduced_symbol_closed(st, fp).a_mat
                rs2 = reduced_symbol_via_elimination(st, fp)
                assert np.max(np.abs(a1 - rs2.a_mat)) < 1e-10
                assert rs2.cond is not None and rs2.cond < 1e8

    def test_pole_at_vanishing_s(self, case1):
        fp = boundary_point(-case1.v, case1.v)     # tau + i v eta = 0
        with pytest.raises(SymbolPole):
            reduced_symbol_closed(case1, fp)

    def test_pole_at_vanishing_dispersion_factor(self, case1):
        # delta + v eta = F eta makes (tau + i v eta)^2 + F^2 eta^2 = 0
        fp = boundary_point(-case1.v + 1.0, case1.v)
        with pytest.raises(SymbolPole):
            reduced_symbol_closed(case1, fp)

    def test_entry_blowup_near_pole(self, case1):
        vals = []
        for g in (1e-4, 1e-6, 1e-8):
            fp = boundary_point(-case1.v, case1.v, gamma=g)
            vals.append(abs(reduced_symbol_closed(case1, fp).m_r))
        assert vals[1] > 50.0 * vals[0]
        assert vals[2] > 50.0 * vals[1]


class TestEigenData:
    def test_eigenvector_residual(self, states):
        for st in states.values():
            for fp in _points(st, 25, seed=7):
                ed = eigen_data(st, fp)
                a = reduced_symbol_closed(st, fp).a_mat
                scale = np.max(np.abs(a))
                for e, w in ((ed.e_minus_r, ed.omega_r),
                             (ed.e_minus_l, ed.omega_l)):
                    assert np.linalg.norm(e) > 0.0
                    resid = np.linalg.norm(a @ e - w * e)
                    assert resid <= 1e-10 * scale * np.linalg.norm(e)

    def test_disjoint_supports(self, case1):
        ed = eigen_data(case1, FrequencyPoint(0.3, 0.2, 0.4))
        assert ed.e_minus_r[2] == ed.e_minus_r[3] == 0.0
        assert ed.e_minus_l[0] == ed.e_minus_l[1] == 0.0


class TestReconstruction:
    def test_algebraic_rows_satisfied(self, states):
        rng = np.random.default_rng(2)
        for st in states.values():
            sm = assemble_interior(st)
            for fp in _points(st, 10, seed=13):
                w_nc = rng.normal(size=4) + 1j * rng.normal(size=4)
                w = reconstruct_characteristic(st, fp, w_nc)
                np.testing.assert_array_equal(w[list(NC_INDICES)], w_nc)
                g = fp.tau * sm.a0 + 1j * fp.eta * sm.a1
                resid = np.linalg.norm((g @ w)[list(CHAR_INDICES)])
                assert resid <= 1e-12 * max(np.linalg.norm(w), 1.0)

    def test_pole_refusal(self, case1):
        fp = boundary_point(-case1.v, case1.v)
        with pytest.raises(SymbolPole):
            reconstruct_characteristic(case1, fp, np.ones(4))

    def test_shape_check(self, case1):
        with pytest.raises(ValueError):
            reconstruct_characteristic(
                case1, FrequencyPoint(1.0, 0.0, 0.0), np.ones(3))
