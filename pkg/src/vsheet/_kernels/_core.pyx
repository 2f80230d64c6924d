# Compiled batch kernels.  Formula-for-formula mirror of _fallback.py; the
# fallback is the reference and the agreement is tested, so any change here
# must land there as well.
import numpy as np

from libc.math cimport hypot, sqrt

IMPL = "cython"

cdef double complex J = 1j


cdef inline double _sgn(double x) nogil:
    return (x > 0.0) - (x < 0.0)


cdef inline int _bsqrt(double p, double q, double hint,
                       double *x, double *y) nogil:
    """Decaying branch of sqrt(p + i q); returns 1 when on the cut.

    The larger component comes from the cancellation-free sum r + |p|, the
    smaller from 2 x y = q (subtracting r - |p| would lose half the digits
    when |q| << |p|).
    """
    cdef double r = hypot(p, q)
    cdef double big
    if q == 0.0 and p < 0.0:
        x[0] = -0.0
        y[0] = -_sgn(hint) * sqrt(-p)
        return 1
    big = sqrt((r + (p if p >= 0.0 else -p)) / 2.0)
    if p >= 0.0:
        x[0] = -big
        y[0] = q / (2.0 * x[0]) if big > 0.0 else 0.0
    else:
        y[0] = -_sgn(q) * big
        x[0] = q / (2.0 * y[0])
    return 0


def branch_sqrt_table(object p_in, object q_in, object hint_in):
    """Decaying branch of sqrt(p + i q); see the fallback docstring."""
    p = np.ascontiguousarray(p_in, dtype=np.float64)
    q = np.ascontiguousarray(q_in, dtype=np.float64)
    hint = np.ascontiguousarray(hint_in, dtype=np.float64)
    cdef double[::1] pv = p.ravel()
    cdef double[::1] qv = q.ravel()
    cdef double[::1] hv = hint.ravel()
    cdef Py_ssize_t n = pv.shape[0]
    x = np.empty(n, dtype=np.float64)
    y = np.empty(n, dtype=np.float64)
    cut = np.empty(n, dtype=np.uint8)
    cdef double[::1] xv = x
    cdef double[::1] yv = y
    cdef unsigned char[::1] cv = cut
    cdef Py_ssize_t i
    cdef double xx, yy
    with nogil:
        for i in range(n):
            cv[i] = _bsqrt(pv[i], qv[i], hv[i], &xx, &yy)
            xv[i] = xx
            yv[i] = yy
    shape = np.shape(p_in)
    return x.reshape(shape), y.reshape(shape), cut.reshape(shape)


def elastic_table(object gamma_in, object delta_in, object eta_in,
                  double v, double fsq, double c):
    """Batch table of two-sided modes and boundary-determinant data."""
    gamma = np.ascontiguousarray(gamma_in, dtype=np.float64)
    delta = np.ascontiguousarray(delta_in, dtype=np.float64)
    eta = np.ascontiguousarray(eta_in, dtype=np.float64)
    cdef double[::1] gv = gamma.ravel()
    cdef double[::1] dv_ = delta.ravel()
    cdef double[::1] ev = eta.ravel()
    cdef Py_ssize_t n = gv.shape[0]

    out_c = {name: np.empty(n, dtype=np.complex128) for name in
             ("omega_r", "omega_l", "alpha_r", "alpha_l",
              "a_r", "b_r", "a_l", "b_l",
              "d11", "d12", "d21", "d22",
              "det_direct", "det_factored", "nondeg_r", "nondeg_l")}
    smin_arr = np.empty(n, dtype=np.float64)
    cut_r_arr = np.empty(n, dtype=np.uint8)
    cut_l_arr = np.empty(n, dtype=np.uint8)

    cdef double complex[::1] omega_r = out_c["omega_r"]
    cdef double complex[::1] omega_l = out_c["omega_l"]
    cdef double complex[::1] alpha_r = out_c["alpha_r"]
    cdef double complex[::1] alpha_l = out_c["alpha_l"]
    cdef double complex[::1] a_r = out_c["a_r"]
    cdef double complex[::1] b_r = out_c["b_r"]
    cdef double complex[::1] a_l = out_c["a_l"]
    cdef double complex[::1] b_l = out_c["b_l"]
    cdef double complex[::1] d11v = out_c["d11"]
    cdef double complex[::1] d12v = out_c["d12"]
    cdef double complex[::1] d21v = out_c["d21"]
    cdef double complex[::1] d22v = out_c["d22"]
    cdef double complex[::1] detv = out_c["det_direct"]
    cdef double complex[::1] facv = out_c["det_factored"]
    cdef double complex[::1] nd_rv = out_c["nondeg_r"]
    cdef double complex[::1] nd_lv = out_c["nondeg_l"]
    cdef double[::1] sminv = smin_arr
    cdef unsigned char[::1] cut_rv = cut_r_arr
    cdef unsigned char[::1] cut_lv = cut_l_arr

    cdef Py_ssize_t i
    cdef double g, d, e, eta2, dvr, dvl, p, q, x, y
    cdef double fro2, absdet, disc, smax
    cdef double complex tau, s_r, s_l, dd_r, dd_l, w_r, w_l
    cdef double complex ar, br, al, bl, nd_r, nd_l, na
    cdef double complex d11, d12, d21, d22, det, fac
    cdef double c2 = c * c
    cdef double c4 = c2 * c2
    cdef double half_c = c / 2.0
    cdef double inv2c = 1.0 / (2.0 * c)

    with nogil:
        for i in range(n):
            g = gv[i]
            d = dv_[i]
            e = ev[i]
            eta2 = e * e
            tau = g + J * d

            # right side (+v)
            s_r = tau + J * (v * e)
            dd_r = s_r * s_r + fsq * eta2
            dvr = d + v * e
            p = (g * g - dvr * dvr + fsq * eta2) / c2 + eta2
            q = 2.0 * g * dvr / c2
            cut_rv[i] = _bsqrt(p, q, dvr, &x, &y)
            w_r = x + J * y
            ar = half_c * s_r * s_r * eta2 - fsq * eta2 * dd_r * inv2c
            na = (2.0 * s_r * s_r + fsq * eta2) * dd_r * inv2c \
                + half_c * s_r * s_r * eta2
            br = na - w_r * s_r * dd_r
            nd_r = s_r * w_r - c * (w_r * w_r - eta2)

            # left side (-v)
            s_l = tau - J * (v * e)
            dd_l = s_l * s_l + fsq * eta2
            dvl = d - v * e
            p = (g * g - dvl * dvl + fsq * eta2) / c2 + eta2
            q = 2.0 * g * dvl / c2
            cut_lv[i] = _bsqrt(p, q, dvl, &x, &y)
            w_l = x + J * y
            al = half_c * s_l * s_l * eta2 - fsq * eta2 * dd_l * inv2c
            na = (2.0 * s_l * s_l + fsq * eta2) * dd_l * inv2c \
                + half_c * s_l * s_l * eta2
            bl = na - w_l * s_l * dd_l
            nd_l = s_l * w_l - c * (w_l * w_l - eta2)

            d11 = br - ar
            d12 = bl - al
            d21 = -c * (tau - J * (v * e)) * (ar + br)
            d22 = c * (tau + J * (v * e)) * (al + bl)
            det = d11 * d22 - d12 * d21
            fac = c4 * s_r * s_l * nd_r * (-nd_l) \
                * (w_r * w_l - eta2) * (w_r + w_l)

            fro2 = (d11.real * d11.real + d11.imag * d11.imag
                    + d12.real * d12.real + d12.imag * d12.imag
                    + d21.real * d21.real + d21.imag * d21.imag
                    + d22.real * d22.real + d22.imag * d22.imag)
            absdet = hypot(det.real, det.imag)
            disc = fro2 * fro2 - 4.0 * absdet * absdet
            if disc < 0.0:
                disc = 0.0
            smax = sqrt((fro2 + sqrt(disc)) / 2.0)
            sminv[i] = absdet / smax if smax > 0.0 else 0.0

            omega_r[i] = w_r
            omega_l[i] = w_l
            alpha_r[i] = s_r * dd_r
            alpha_l[i] = s_l * dd_l
            a_r[i] = ar
            b_r[i] = br
            a_l[i] = al
            b_l[i] = bl
            d11v[i] = d11
            d12v[i] = d12
            d21v[i] = d21
            d22v[i] = d22
            detv[i] = det
            facv[i] = fac
            nd_rv[i] = nd_r
            nd_lv[i] = nd_l

    shape = np.shape(gamma_in)
    out = {k: a.reshape(shape) for k, a in out_c.items()}
    out["sigma_min"] = smin_arr.reshape(shape)
    out["at_cut_r"] = cut_r_arr.reshape(shape)
    out["at_cut_l"] = cut_l_arr.reshape(shape)
    return out
