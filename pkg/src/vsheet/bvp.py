"""Decaying solutions of the reduced boundary value problem and the front.

For gamma > 0 the noncharacteristic unknown solves dW/dx2 = A W on x2 > 0 with
the boundary matrix beta(E_-^r, E_-^l) acting on the mode coefficients; the
decaying solution is a combination of the two decaying modes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .background import BackgroundState
from .errors import NearSingularBoundary
from .freq import FrequencyPoint
from .lopatinskii import FitResult, _power_fit, approach_points, table
from .symbol import assemble_boundary, assemble_interior, eigen_data

DET_TOL = 1e-12


@dataclass(frozen=True)
class DecayingSolution:
    """Mode coefficients and trace of the decaying solution."""

    fp: FrequencyPoint
    z_coeffs: np.ndarray       # (2,) coefficients of (E_-^r, E_-^l)
    w_nc0: np.ndarray          # (4,) trace at x2 = 0
    omega_r: complex
    omega_l: complex
    e_minus_r: np.ndarray
    e_minus_l: np.ndarray
    boundary_residual: float

    def profile(self, x2):
        """W(x2) for scalar or array x2 >= 0; decays like e^{Re omega x2}."""
        x2 = np.asarray(x2, dtype=np.float64)
        er = np.exp(self.omega_r * x2)[..., None] * self.e_minus_r
        el = np.exp(self.omega_l * x2)[..., None] * self.e_minus_l
        return self.z_coeffs[0] * er + self.z_coeffs[1] * el


def solve_decaying(state: BackgroundState, fp: FrequencyPoint, h,
                   det_tol: float = DET_TOL) -> DecayingSolution:
    """Solve beta(E_-^r, E_-^l) z = h for the decaying mode coefficients.

    Refuses (NearSingularBoundary) when |det| <= det_tol * scale with scale
    the squared Frobenius norm, i.e. sigma_min <= ~det_tol * sigma_max, when
    fp is too close to a determinant root for the solve to be trustworthy.
    A row-norm scale would not do: at some roots a whole row vanishes with
    gamma, shrinking the Hadamard bound as fast as the determinant itself.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (2,):
        raise ValueError("boundary data h must have shape (2,)")
    ed = eigen_data(state, fp)
    t = table(state, [fp.gamma], [fp.delta], [fp.eta])
    mat = np.array([
        [t["d11"][0], t["d12"][0]],
        [t["d21"][0], t["d22"][0]],
    ])
    det = complex(t["det_direct"][0])
    scale = float(np.sum(np.abs(mat) ** 2))
    if abs(det) <= det_tol * max(scale, 1e-300):
        raise NearSingularBoundary(
            f"|det| = {abs(det):.3e} <= {det_tol:g} * scale ({scale:.3e}) at {fp}"
        )
    z = np.linalg.solve(mat, h)
    w0 = z[0] * ed.e_minus_r + z[1] * ed.e_minus_l
    resid = float(np.linalg.norm(mat @ z - h))
    return DecayingSolution(
        fp=fp, z_coeffs=z, w_nc0=w0,
        omega_r=ed.omega_r, omega_l=ed.omega_l,
        e_minus_r=ed.e_minus_r, e_minus_l=ed.e_minus_l,
        boundary_residual=resid,
    )


def reconstruct_front(state: BackgroundState, fp: FrequencyPoint,
                      w_n_at_0, g_hat) -> complex:
    """Recover the front amplitude from the trace and the boundary data.

    phi = (b_star . g - ell . W^n(0)) / theta, where W^n collects the eight
    trace components entering the boundary conditions.
    """
    w_n_at_0 = np.asarray(w_n_at_0, dtype=complex)
    g_hat = np.asarray(g_hat, dtype=complex)
    if w_n_at_0.shape != (8,):
        raise ValueError("w_n_at_0 must have shape (8,)")
    if g_hat.shape != (7,):
        raise ValueError("g_hat must have shape (7,)")
    br = assemble_boundary(state, fp)
    scale = (abs(fp.tau) ** 2 + fp.eta ** 2) * (1.0 + state.v ** 2 + state.f_sq)
    if abs(br.theta) <= 1e-12 * max(scale, 1e-300):
        raise NearSingularBoundary(
            f"front symbol theta = {br.theta:.3e} too small at {fp}"
        )
    return complex((br.b_star @ g_hat - br.ell @ w_n_at_0) / br.theta)


def boundary_data_from_front(state: BackgroundState, fp: FrequencyPoint,
                             w_n_at_0, phi: complex) -> np.ndarray:
    """Forward boundary map g = M W^n(0) + phi b(tau, eta); used to manufacture data."""
    w_n_at_0 = np.asarray(w_n_at_0, dtype=complex)
    sm = assemble_interior(state)
    b = sm.b_bdry @ np.array([fp.tau, 1j * fp.eta])
    return sm.m_bdry @ w_n_at_0 + phi * b


@dataclass(frozen=True)
class ProbeResult:
    """Energy blow-up probe along the approach path to a root."""

    theta: float
    gammas: np.ndarray
    sigma_min: np.ndarray
    wnc_norm: np.ndarray
    fit_sigma: FitResult      # sigma_min ~ kappa gamma^j
    fit_wnc: FitResult        # ||W^nc(0)|| ~ C gamma^-j


def energy_probe(state: BackgroundState, theta: float, h=(1.0, 0.5), *,
                 gammas=None, eta_sign: float = 1.0) -> ProbeResult:
    """Measure sigma_min and the trace norm along gamma -> 0 at a root.

    The fitted exponents should agree (up to sign) with the root multiplicity;
    away from roots both are ~ 0.
    """
    if gammas is None:
        gammas = np.logspace(-3.5, -1.5, 12)
    gammas = np.asarray(gammas, dtype=np.float64)
    fps = approach_points(state, theta, gammas, eta_sign)
    g = np.array([fp.gamma for fp in fps])
    sig = np.empty_like(g)
    wn = np.empty_like(g)
    for i, fp in enumerate(fps):
        sol = solve_decaying(state, fp, h)
        t = table(state, [fp.gamma], [fp.delta], [fp.eta])
        sig[i] = float(t["sigma_min"][0])
        wn[i] = float(np.linalg.norm(sol.w_nc0))
    fit_sigma = _power_fit(g, sig, 0.0)
    fit_wnc = _power_fit(g, wn, 0.0)
    return ProbeResult(theta=theta, gammas=g, sigma_min=sig, wnc_norm=wn,
                       fit_sigma=fit_sigma, fit_wnc=fit_wnc)


def ode_residual_fd(state: BackgroundState, fp: FrequencyPoint,
                    sol: DecayingSolution, x2: float, step: float = 1e-5) -> float:
    """Central-difference residual ||dW/dx2 - A W|| / ||W|| at x2 > step."""
    from .symbol import reduced_symbol_closed

    a = reduced_symbol_closed(state, fp).a_mat
    wp = sol.profile(x2 + step)
    wm = sol.profile(x2 - step)
    w0 = sol.profile(x2)
    dw = (wp - wm) / (2.0 * step)
    denom = max(float(np.linalg.norm(w0)), 1e-300)
    return float(np.linalg.norm(dw - a @ w0)) / denom


def decay_envelope_margin(sol: DecayingSolution, x2) -> float:
    """max over x2 of ||W(x2)|| - ||W(0)|| e^{max Re omega * x2} (<= 0 exactly)."""
    x2 = np.asarray(x2, dtype=np.float64)
    rate = max(sol.omega_r.real, sol.omega_l.real)
    w = sol.profile(x2)
    norms = np.linalg.norm(w, axis=-1)
    bound = float(np.linalg.norm(sol.w_nc0)) * np.exp(rate * x2)
    return float(np.max(norms - bound))
