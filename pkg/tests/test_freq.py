from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vsheet import (
    BranchAmbiguity,
    FrequencyPoint,
    OutsideCone,
    ZeroFrequency,
    boundary_point,
    branch_sqrt,
    normalize_to_hemisphere,
    omega,
    omega_pair,
    sample_hemisphere,
)

finite = st.floats(min_value=-10.0, max_value=10.0,
                   allow_nan=False, allow_infinity=False)


class TestFrequencyPoint:
    def test_rejects_negative_gamma(self):
        with pytest.raises(OutsideCone):
            FrequencyPoint(-0.1, 0.0, 1.0)

    def test_rejects_zero_point(self):
        with pytest.raises(ZeroFrequency):
            FrequencyPoint(0.0, 0.0, 0.0)

    def test_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError):
            FrequencyPoint(1.0, 0.0, 0.0, weight=0.0)

    def test_tau_and_norm(self):
        fp = FrequencyPoint(0.3, -0.4, 0.5, weight=2.0)
        assert fp.tau == complex(0.3, -0.4)
        assert fp.hemisphere_norm == pytest.approx(
            math.sqrt(0.09 + 0.16 + 1.0))

    def test_scaled_stays_on_ray(self):
        fp = FrequencyPoint(0.3, -0.4, 0.5)
        fs = fp.scaled(2.5)
        assert (fs.gamma, fs.delta, fs.eta) == (0.75, -1.0, 1.25)
        with pytest.raises(ValueError):
            fp.scaled(-1.0)

    def test_normalize_lands_on_hemisphere(self):
        fp = FrequencyPoint(3.0, -4.0, 5.0, weight=2.0)
        fn = normalize_to_hemisphere(fp)
        assert fn.on_hemisphere
        # idempotent up to roundoff
        fn2 = normalize_to_hemisphere(fn)
        assert fn2.gamma == pytest.approx(fn.gamma, rel=1e-15)


class TestBranchSqrt:
    def test_frozen_value(self):
        # p = -1/8, q = sqrt(3)/2: r = 7/8, x = -sqrt(3/8), y = -sqrt(1/2)
        bv = branch_sqrt(-0.125, math.sqrt(3.0) / 2.0)
        assert bv.x == pytest.approx(-math.sqrt(0.375), rel=1e-15)
        assert bv.y == pytest.approx(-math.sqrt(0.5), rel=1e-15)
        assert not bv.at_cut

    def test_positive_real_axis(self):
        bv = branch_sqrt(4.0, 0.0)
        assert (bv.x, bv.y) == (-2.0, 0.0)

    def test_cut_requires_hint(self):
        with pytest.raises(BranchAmbiguity):
            branch_sqrt(-1.0, 0.0)
        with pytest.raises(BranchAmbiguity):
            branch_sqrt(-1.0, 0.0, sign_hint=0.0)

    def test_cut_sides(self):
        up = branch_sqrt(-1.0, 0.0, sign_hint=1.0)
        dn = branch_sqrt(-1.0, 0.0, sign_hint=-1.0)
        assert up.at_cut and dn.at_cut
        assert up.value == pytest.approx(-1.0j)
        assert dn.value == pytest.approx(1.0j)

    def test_cut_matches_offset_limit(self):
        # hint > 0 selects the q -> 0+ limit, hint < 0 the q -> 0- limit
        at = branch_sqrt(-1.0, 0.0, sign_hint=1.0).value
        near = branch_sqrt(-1.0, 1e-13).value
        assert abs(at - near) < 1e-6
        at = branch_sqrt(-1.0, 0.0, sign_hint=-1.0).value
        near = branch_sqrt(-1.0, -1e-13).value
        assert abs(at - near) < 1e-6

    @given(p=finite, q=finite)
    def test_resquares_and_decays(self, p, q):
        if q == 0.0 and p < 0.0:
            bv = branch_sqrt(p, q, sign_hint=1.0)
        else:
            bv = branch_sqrt(p, q)
        z = bv.value
        assert abs(z * z - complex(p, q)) <= 1e-12 * (1.0 + math.hypot(p, q))
        assert z.real <= 0.0

    @given(p=finite, q=finite.filter(lambda q: q != 0.0))
    def test_imag_sign_opposes_q(self, p, q):
        bv = branch_sqrt(p, q)
        assert bv.y * q <= 0.0


class TestOmega:
    def test_anchor_point(self, case1):
        fp = FrequencyPoint(1.0, 0.0, 0.0)
        assert omega(case1, "right", fp) == pytest.approx(-1.0)
        assert omega(case1, "left", fp) == pytest.approx(-1.0)

    def test_rejects_bad_side(self, case1):
        with pytest.raises(ValueError):
            omega(case1, "up", FrequencyPoint(1.0, 0.0, 0.0))

    def test_defining_equation_and_decay(self, states):
        for st_ in states.values():
            g, d, e = sample_hemisphere(50, st_.v, seed=11, gamma_min=1e-3)
            for gi, di, ei in zip(g, d, e):
                fp = FrequencyPoint(gi, di, ei)
                wr, wl = omega_pair(st_, fp)
                for w, sgn in ((wr, 1.0), (wl, -1.0)):
                    s = fp.tau + 1j * sgn * st_.v * fp.eta
                    rhs = (s * s + st_.f_sq * fp.eta ** 2) / st_.c ** 2 \
                        + fp.eta ** 2
                    assert abs(w * w - rhs) <= 1e-12
                    assert w.real < 0.0


class TestSampling:
    def test_on_hemisphere_and_gamma_cut(self):
        g, d, e = sample_hemisphere(500, 2.0, seed=5, gamma_min=1e-2)
        np.testing.assert_allclose(g * g + d * d + 4.0 * e * e, 1.0,
                                   atol=1e-12)
        assert g.min() >= 1e-2

    def test_deterministic_per_seed(self):
        a = sample_hemisphere(64, 1.5, seed=9)
        b = sample_hemisphere(64, 1.5, seed=9)
        c = sample_hemisphere(64, 1.5, seed=10)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)
        assert not np.array_equal(a[0], c[0])

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            sample_hemisphere(-1, 1.0)
        with pytest.raises(ValueError):
            sample_hemisphere(4, 1.0, gamma_min=1.0)
        with pytest.raises(ValueError):
            sample_hemisphere(4, 0.0)


class TestBoundaryPoint:
    def test_ratio_and_norm(self):
        fp = boundary_point(0.7, 2.0)
        assert fp.gamma == 0.0
        assert fp.on_hemisphere
        assert fp.delta / fp.eta == pytest.approx(0.7, rel=1e-14)

    def test_eta_sign(self):
        fp = boundary_point(0.7, 2.0, eta_sign=-1.0)
        assert fp.eta < 0.0
        assert fp.delta / fp.eta == pytest.approx(0.7, rel=1e-14)

    def test_gamma_lift_keeps_ratio(self):
        fp = boundary_point(0.7, 2.0, gamma=1e-3)
        assert fp.gamma > 0.0
        assert fp.on_hemisphere
        assert fp.delta / fp.eta == pytest.approx(0.7, rel=1e-12)
