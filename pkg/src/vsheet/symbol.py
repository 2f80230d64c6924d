"""Symmetrized interior system, boundary reduction, and the reduced 4x4 symbol.

The 14-component unknown W stacks the symmetrized right-side and left-side
states (7 each).  Only four components carry x2-derivatives (the noncharacteristic
block, indices NC below); the other ten satisfy algebraic relations that the
elimination route solves explicitly.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .background import BackgroundState
from .errors import SymbolPole
from .freq import FrequencyPoint, normalize_to_hemisphere

log = logging.getLogger(__name__)

# 0-based component indices of the 14-vector
NC_INDICES = (1, 2, 8, 9)
CHAR_INDICES = (0, 3, 4, 5, 6, 7, 10, 11, 12, 13)
# components whose traces enter the boundary conditions: (W2, W3, W5, W7 | W9, W10, W12, W14)
TRACE_INDICES = (1, 2, 4, 6, 8, 9, 11, 13)

POLE_TOL = 1e-14
COND_REPORT = 1e8


@dataclass(frozen=True)
class SystemMatrices:
    """Interior symmetrizer data and boundary condition coefficients.

    The boundary condition reads m_bdry @ W_trace + phi * (b_bdry @ (tau, i eta)) = g,
    where W_trace collects the TRACE_INDICES components at x2 = 0.
    """

    a0: np.ndarray      # (14, 14) diagonal, positive
    a1: np.ndarray      # (14, 14) block symmetric
    a2: np.ndarray      # (14, 14) diagonal, singular
    m_bdry: np.ndarray  # (7, 8)
    b_bdry: np.ndarray  # (7, 2) columns multiply (tau, i eta)


def _a1_side(v: float, f11: float, f12: float, c: float) -> np.ndarray:
    c2 = c * c
    return np.array([
        [v, -c2, c2, -f11, 0.0, -f12, 0.0],
        [-c2, 2.0 * c2 * v, 0.0, 0.0, -c * f11, 0.0, -c * f12],
        [c2, 0.0, 2.0 * c2 * v, 0.0, -c * f11, 0.0, -c * f12],
        [-f11, 0.0, 0.0, v, 0.0, 0.0, 0.0],
        [0.0, -c * f11, -c * f11, 0.0, v, 0.0, 0.0],
        [-f12, 0.0, 0.0, 0.0, 0.0, v, 0.0],
        [0.0, -c * f12, -c * f12, 0.0, 0.0, 0.0, v],
    ])


def assemble_interior(state: BackgroundState) -> SystemMatrices:
    """Constant matrices of the symmetrized two-sided interior system."""
    c = state.c
    c2 = c * c
    diag7 = [1.0, 2.0 * c2, 2.0 * c2, 1.0, 1.0, 1.0, 1.0]
    a0 = np.diag(diag7 * 2)
    a1 = np.zeros((14, 14))
    a1[:7, :7] = _a1_side(state.v, state.f11, state.f12, c)
    a1[7:, 7:] = _a1_side(-state.v, -state.f11, -state.f12, c)
    a2 = np.zeros(14)
    c3 = 2.0 * c ** 3
    a2[1], a2[2] = -c3, c3
    a2[8], a2[9] = c3, -c3
    m_bdry = np.array([
        [-c, -c, 0.0, 0.0, c, c, 0.0, 0.0],
        [-c, -c, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [-1.0, 1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0],
    ])
    b_bdry = np.zeros((7, 2))
    b_bdry[1, 0] = 1.0
    b_bdry[:, 1] = [2.0 * state.v, state.v, 0.0,
                    2.0 * state.f11, state.f11, 2.0 * state.f12, state.f12]
    return SystemMatrices(a0=a0, a1=a1, a2=np.diag(a2), m_bdry=m_bdry,
                          b_bdry=b_bdry)


def boundary_b(state: BackgroundState, fp: FrequencyPoint) -> np.ndarray:
    """Front coefficient vector b(tau, eta) = b_bdry @ (tau, i eta), shape (7,)."""
    sm = assemble_interior(state)
    return sm.b_bdry @ np.array([fp.tau, 1j * fp.eta])


@dataclass(frozen=True)
class BoundaryReduction:
    """Front-eliminating transform of the boundary conditions.

    q_mat is invertible on the hemisphere and maps the raw conditions so that
    the front appears only in the third row: theta * phi = b_star . g - ell . W_trace,
    while rows 1-2 restricted to the NC trace components give beta.
    """

    q_mat: np.ndarray   # (7, 7) complex, at the hemisphere-normalized point
    theta: complex      # front symbol, degree 1
    ell: np.ndarray     # (8,) third row of q_mat @ m_bdry
    b_star: np.ndarray  # (7,) third row of q_mat
    beta: np.ndarray    # (2, 4) reduced boundary matrix on the NC traces


def _q_matrix(tau: complex, eta: float, state: BackgroundState) -> np.ndarray:
    v, f11, f12 = state.v, state.f11, state.f12
    tb = tau.conjugate()
    ive = 1j * v * eta
    return np.array([
        [0, 0, 1, 0, 0, 0, 0],
        [tau + ive, -2.0 * ive, 0, 0, 0, 0, 0],
        [-2.0 * ive, tb - ive, 0,
         -2j * f11 * eta, -1j * f11 * eta, -2j * f12 * eta, -1j * f12 * eta],
        [-f11, 0, 0, v, 0, 0, 0],
        [-f11, 0, 0, 0, 2.0 * v, 0, 0],
        [-f12, 0, 0, 0, 0, v, 0],
        [-f12, 0, 0, 0, 0, 0, 2.0 * v],
    ], dtype=complex)


def assemble_boundary(state: BackgroundState, fp: FrequencyPoint) -> BoundaryReduction:
    """Build the front-eliminating reduction at fp.

    q_mat, ell, b_star and beta are degree-0 quantities evaluated at the
    hemisphere-normalized point of fp's ray; theta is degree 1 and is evaluated
    at fp itself (q_mat @ b is linear in (tau, eta)).  The hemisphere weight is
    the model's (w = v), whatever weight fp itself carries.
    """
    fpn = normalize_to_hemisphere(
        FrequencyPoint(fp.gamma, fp.delta, fp.eta, weight=state.v)
    )
    q = _q_matrix(fpn.tau, fpn.eta, state)
    sm = assemble_interior(state)
    qm = q @ sm.m_bdry
    theta = q[2] @ (sm.b_bdry @ np.array([fp.tau, 1j * fp.eta]))
    # NC trace components sit at columns (0, 1, 4, 5) of the 8 trace columns
    beta = qm[np.ix_([0, 1], [0, 1, 4, 5])]
    return BoundaryReduction(q_mat=q, theta=complex(theta), ell=qm[2],
                             b_star=q[2], beta=beta)


@dataclass(frozen=True)
class ReducedSymbol:
    """The 4x4 first-order symbol of the noncharacteristic block.

    n_*, m_* are set by the closed-form route; the elimination route leaves
    them None and reports the characteristic-block condition number instead.
    """

    a_mat: np.ndarray
    n_r: complex | None = None
    m_r: complex | None = None
    n_l: complex | None = None
    m_l: complex | None = None
    cond: float | None = None


def _euclid_norm(fp: FrequencyPoint) -> float:
    return float(np.hypot(abs(fp.tau), fp.eta))


def _nm_side(tau: complex, eta: float, v_side: float, fsq: float, c: float,
             scale: float, label: str) -> tuple[complex, complex]:
    s = tau + 1j * v_side * eta
    dd = s * s + fsq * eta * eta
    if abs(s) <= POLE_TOL * scale:
        raise SymbolPole(f"tau + i v eta ({label})", s)
    if abs(dd) <= POLE_TOL * scale * scale:
        raise SymbolPole(f"(tau + i v eta)^2 + F^2 eta^2 ({label})", dd)
    n = (2.0 * s * s + fsq * eta * eta) / (2.0 * c * s) + c * s * eta * eta / (2.0 * dd)
    m = c * s * eta * eta / (2.0 * dd) - fsq * eta * eta / (2.0 * c * s)
    return n, m


def reduced_symbol_closed(state: BackgroundState, fp: FrequencyPoint) -> ReducedSymbol:
    """Closed-form n, m entries of the reduced symbol.

    Raises SymbolPole when an entry denominator vanishes (relative to the
    euclidean size of fp); these are the genuine poles of the symbol.
    """
    scale = _euclid_norm(fp)
    fsq, c = state.f_sq, state.c
    n_r, m_r = _nm_side(fp.tau, fp.eta, state.v, fsq, c, scale, "right")
    n_l, m_l = _nm_side(fp.tau, fp.eta, -state.v, fsq, c, scale, "left")
    a = np.array([
        [n_r, -m_r, 0, 0],
        [m_r, -n_r, 0, 0],
        [0, 0, -n_l, m_l],
        [0, 0, -m_l, n_l],
    ], dtype=complex)
    return ReducedSymbol(a_mat=a, n_r=n_r, m_r=m_r, n_l=n_l, m_l=m_l)


def reduced_symbol_via_elimination(state: BackgroundState,
                                   fp: FrequencyPoint) -> ReducedSymbol:
    """Independent route: eliminate the ten algebraic components numerically.

    Solves the characteristic 10x10 block of tau a0 + i eta a1 for the
    characteristic components as a linear map of the NC ones, then reads the
    four ODE rows.  The block's condition number is recorded and logged when it
    exceeds COND_REPORT.
    """
    sm = assemble_interior(state)
    g = fp.tau * sm.a0 + 1j * fp.eta * sm.a1
    gcc = g[np.ix_(CHAR_INDICES, CHAR_INDICES)]
    gcn = g[np.ix_(CHAR_INDICES, NC_INDICES)]
    cond = float(np.linalg.cond(gcc))
    if not np.isfinite(cond):
        raise SymbolPole("characteristic block singular")
    if cond > COND_REPORT:
        log.warning("characteristic block condition number %.3e at %s", cond, fp)
    try:
        lmap = -np.linalg.solve(gcc, gcn)
    except np.linalg.LinAlgError as exc:
        raise SymbolPole("characteristic block singular") from exc
    a = np.empty((4, 4), dtype=complex)
    a2 = np.diag(sm.a2)
    for i, k in enumerate(NC_INDICES):
        a[i] = -(g[k, list(NC_INDICES)] + g[k, list(CHAR_INDICES)] @ lmap) / a2[k]
    return ReducedSymbol(a_mat=a, cond=cond)


@dataclass(frozen=True)
class EigenData:
    """Decaying eigen-pairs of the reduced symbol in pole-free form.

    e_minus_r = (m alpha, (n - omega) alpha, 0, 0) and
    e_minus_l = (0, 0, (n^l - omega^l) alpha^l, m^l alpha^l) where
    alpha = (tau + i v eta)[(tau + i v eta)^2 + F^2 eta^2]; the products are
    polynomials in (tau, eta) and stay finite at the symbol poles.
    """

    omega_r: complex
    omega_l: complex
    alpha_r: complex
    alpha_l: complex
    e_minus_r: np.ndarray
    e_minus_l: np.ndarray


def eigen_data(state: BackgroundState, fp: FrequencyPoint) -> EigenData:
    """Decaying modes of both sides at fp (total on the forward cone)."""
    t = _kernels.elastic_table(
        np.array([fp.gamma]), np.array([fp.delta]), np.array([fp.eta]),
        state.v, state.f_sq, state.c,
    )
    e_r = np.array([t["a_r"][0], t["b_r"][0], 0.0, 0.0], dtype=complex)
    e_l = np.array([0.0, 0.0, t["b_l"][0], t["a_l"][0]], dtype=complex)
    return EigenData(
        omega_r=complex(t["omega_r"][0]), omega_l=complex(t["omega_l"][0]),
        alpha_r=complex(t["alpha_r"][0]), alpha_l=complex(t["alpha_l"][0]),
        e_minus_r=e_r, e_minus_l=e_l,
    )


def reconstruct_characteristic(state: BackgroundState, fp: FrequencyPoint,
                               w_nc: np.ndarray) -> np.ndarray:
    """Fill the ten algebraic components from the NC four.

    w_nc holds (W2, W3, W9, W10).  Raises SymbolPole where the solved
    expressions blow up (same denominators as the closed-form symbol).
    """
    w_nc = np.asarray(w_nc, dtype=complex)
    if w_nc.shape != (4,):
        raise ValueError("w_nc must have shape (4,)")
    scale = _euclid_norm(fp)
    tau, eta = fp.tau, fp.eta
    c = state.c
    w = np.zeros(14, dtype=complex)
    w[[1, 2]] = w_nc[:2]
    w[[8, 9]] = w_nc[2:]
    for label, base, i2, i3, sgn in (("right", 0, 1, 2, 1.0),
                                     ("left", 7, 8, 9, -1.0)):
        v_s = sgn * state.v
        f11, f12 = sgn * state.f11, sgn * state.f12
        s = tau + 1j * v_s * eta
        dd = s * s + (f11 * f11 + f12 * f12) * eta * eta
        if abs(s) <= POLE_TOL * scale:
            raise SymbolPole(f"tau + i v eta ({label})", s)
        if abs(dd) <= POLE_TOL * scale * scale:
            raise SymbolPole(f"(tau + i v eta)^2 + F^2 eta^2 ({label})", dd)
        diff = w[i2] - w[i3]
        plus = w[i2] + w[i3]
        w[base + 0] = 1j * c * c * eta * s / dd * diff
        w[base + 3] = -c * c * f11 * eta * eta / dd * diff
        w[base + 4] = 1j * c * f11 * eta / s * plus
        w[base + 5] = -c * c * f12 * eta * eta / dd * diff
        w[base + 6] = 1j * c * f12 * eta / s * plus
    return w
