"""Pure-numpy batch kernels.

Reference implementation of the hot evaluation loops; the compiled module in
_core.pyx mirrors these formulas exactly and is preferred at import when built.
All functions take equal-length float64 arrays and return per-sample arrays.
"""
import numpy as np

IMPL = "numpy"


def branch_sqrt_table(p, q, hint):
    """Decaying branch of sqrt(p + i q) with Re <= 0.

    Off the cut: x = -sqrt((r + p)/2), y = -sgn(q) sqrt((r - p)/2) with
    r = hypot(p, q).  On the cut {p < 0, q == 0} the imaginary part takes the
    side opposite to sgn(hint): y = -sgn(hint) sqrt(-p).

    Returns (x, y, at_cut).
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    hint = np.asarray(hint, dtype=np.float64)
    r = np.hypot(p, q)
    # compute the larger component by the cancellation-free sum r + |p| and
    # recover the smaller one from 2 x y = q; subtracting r - |p| directly
    # would lose half the digits when |q| << |p|
    big = np.sqrt((r + np.abs(p)) / 2.0)
    pos = p >= 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(pos, -big, np.where(q == 0.0, 0.0, -np.abs(q) / (2.0 * big)))
        y = np.where(pos,
                     np.where(big > 0.0, q / (2.0 * -big), 0.0),
                     -np.sign(q) * big)
    at_cut = (q == 0.0) & (p < 0.0)
    if at_cut.any():
        y = np.where(at_cut, -np.sign(hint) * np.sqrt(np.maximum(-p, 0.0)), y)
        x = np.where(at_cut, -0.0, x)
    return x, y, at_cut.astype(np.uint8)


def _side(tau, eta, v_side, fsq, c):
    """Per-side mode quantities in pole-free polynomial form.

    s = tau + i v eta, dd = s^2 + F^2 eta^2, alpha = s dd.  The eigenvector
    components a = m alpha and b = (n - omega) alpha are polynomials in
    (tau, eta), so they stay finite where m, n themselves blow up.
    """
    gamma = tau.real
    eta2 = eta * eta
    s = tau + 1j * v_side * eta
    dd = s * s + fsq * eta2
    dv = tau.imag + v_side * eta
    p = (gamma * gamma - dv * dv + fsq * eta2) / (c * c) + eta2
    q = 2.0 * gamma * dv / (c * c)
    x, y, at_cut = branch_sqrt_table(p, q, dv)
    w = x + 1j * y
    a = (c / 2.0) * s * s * eta2 - fsq * eta2 * dd / (2.0 * c)
    n_alpha = (2.0 * s * s + fsq * eta2) * dd / (2.0 * c) + (c / 2.0) * s * s * eta2
    b = n_alpha - w * s * dd
    nondeg = s * w - c * (w * w - eta2)
    return w, s, dd, a, b, nondeg, at_cut


def elastic_table(gamma, delta, eta, v, fsq, c):
    """Batch table of two-sided modes and boundary-determinant data.

    v is the right-side tangential speed (left side uses -v); fsq = F11^2+F12^2
    is shared by both sides.  Returns a dict of per-sample arrays.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    eta = np.asarray(eta, dtype=np.float64)
    tau = gamma + 1j * delta
    eta2 = eta * eta

    w_r, s_r, dd_r, a_r, b_r, nd_r, cut_r = _side(tau, eta, +v, fsq, c)
    w_l, s_l, dd_l, a_l, b_l, nd_l, cut_l = _side(tau, eta, -v, fsq, c)

    d11 = b_r - a_r
    d12 = b_l - a_l
    d21 = -c * (tau - 1j * v * eta) * (a_r + b_r)
    d22 = c * (tau + 1j * v * eta) * (a_l + b_l)
    det = d11 * d22 - d12 * d21
    fac = (c ** 4) * s_r * s_l * nd_r * (-nd_l) * (w_r * w_l - eta2) * (w_r + w_l)

    fro2 = (np.abs(d11) ** 2 + np.abs(d12) ** 2
            + np.abs(d21) ** 2 + np.abs(d22) ** 2)
    absdet = np.abs(det)
    disc = np.maximum(fro2 * fro2 - 4.0 * absdet * absdet, 0.0)
    smax = np.sqrt((fro2 + np.sqrt(disc)) / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        smin = np.where(smax > 0.0, absdet / smax, 0.0)

    return {
        "omega_r": w_r, "omega_l": w_l,
        "alpha_r": s_r * dd_r, "alpha_l": s_l * dd_l,
        "a_r": a_r, "b_r": b_r, "a_l": a_l, "b_l": b_l,
        "d11": d11, "d12": d12, "d21": d21, "d22": d22,
        "det_direct": det, "det_factored": fac, "sigma_min": smin,
        "nondeg_r": nd_r, "nondeg_l": nd_l,
        "at_cut_r": cut_r, "at_cut_l": cut_l,
    }
