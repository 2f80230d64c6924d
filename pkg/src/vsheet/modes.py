"""Decaying-mode bases and upper triangularization of the reduced symbol.

The symbol is block diagonal; per block the decaying eigenvector E_- is
completed to a basis by a coordinate pivot column whose choice (the "branch")
is frozen over a neighborhood, giving a continuous triangularizing family.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .background import BackgroundState
from .errors import DegenerateEigenvector, SeparationFailed
from .freq import FrequencyPoint
from .symbol import reduced_symbol_closed

# pivot column index per (side, branch)
_PIVOT_COLUMN = {("right", "m"): 1, ("right", "n"): 0,
                 ("left", "m"): 2, ("left", "n"): 3}

ALPHA_TOL = 1e-14


def nondegeneracy_value(state: BackgroundState, side: str,
                        fp: FrequencyPoint) -> complex:
    """(tau + i v eta) omega - c (omega^2 - eta^2) for the requested side.

    Its nonvanishing on the hemisphere is what keeps the decaying eigenvector
    away from zero.
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    t = _kernels.elastic_table(
        np.array([fp.gamma]), np.array([fp.delta]), np.array([fp.eta]),
        state.v, state.f_sq, state.c,
    )
    key = "nondeg_r" if side == "right" else "nondeg_l"
    return complex(t[key][0])


@dataclass(frozen=True)
class SeparationBasis:
    """Pivot choice and triangularizing matrix frozen at a base point."""

    base_point: FrequencyPoint
    pivot_r: str          # "m" or "n"
    pivot_l: str
    t_mat: np.ndarray     # (4, 4) complex at the base point
    z_r: complex
    z_l: complex


def _pick_branch(a: complex, b: complex) -> str:
    # ties go to the m branch
    return "m" if abs(a) >= abs(b) else "n"


def _z_value(branch: str, a: complex, b: complex, alpha: complex,
             scale: float, side: str) -> complex:
    if abs(alpha) <= ALPHA_TOL * scale ** 3:
        raise SeparationFailed(
            f"{side} alpha vanished (symbol pole); no pivot is valid here"
        )
    if branch == "m":
        return -1.0 / alpha
    return a / (alpha * b)


def _columns(state: BackgroundState, fp: FrequencyPoint):
    t = _kernels.elastic_table(
        np.array([fp.gamma]), np.array([fp.delta]), np.array([fp.eta]),
        state.v, state.f_sq, state.c,
    )
    a_r, b_r = complex(t["a_r"][0]), complex(t["b_r"][0])
    a_l, b_l = complex(t["a_l"][0]), complex(t["b_l"][0])
    e_r = np.array([a_r, b_r, 0, 0], dtype=complex)
    e_l = np.array([0, 0, b_l, a_l], dtype=complex)
    alphas = complex(t["alpha_r"][0]), complex(t["alpha_l"][0])
    omegas = complex(t["omega_r"][0]), complex(t["omega_l"][0])
    return (a_r, b_r, a_l, b_l), e_r, e_l, alphas, omegas


def _build_t(e_r, e_l, pivot_r: str, pivot_l: str) -> np.ndarray:
    t_mat = np.zeros((4, 4), dtype=complex)
    t_mat[:, 0] = e_r
    t_mat[_PIVOT_COLUMN[("right", pivot_r)], 1] = 1.0
    t_mat[:, 2] = e_l
    t_mat[_PIVOT_COLUMN[("left", pivot_l)], 3] = 1.0
    return t_mat


def separation_basis(state: BackgroundState, fp: FrequencyPoint) -> SeparationBasis:
    """Choose pivots by dominant eigenvector component at fp.

    The m branch pivots on the first (right) / last (left) component with
    z = -1/alpha; the n branch pivots on the other with z = m/((n-omega) alpha).
    """
    (a_r, b_r, a_l, b_l), e_r, e_l, (al_r, al_l), _ = _columns(state, fp)
    if max(abs(a_r), abs(b_r)) == 0.0 or max(abs(a_l), abs(b_l)) == 0.0:
        raise DegenerateEigenvector(f"decaying eigenvector vanished at {fp}")
    pivot_r = _pick_branch(a_r, b_r)
    pivot_l = _pick_branch(a_l, b_l)
    scale = fp.hemisphere_norm
    z_r = _z_value(pivot_r, a_r, b_r, al_r, scale, "right")
    z_l = _z_value(pivot_l, a_l, b_l, al_l, scale, "left")
    return SeparationBasis(
        base_point=fp, pivot_r=pivot_r, pivot_l=pivot_l,
        t_mat=_build_t(e_r, e_l, pivot_r, pivot_l), z_r=z_r, z_l=z_l,
    )


def triangularize(state: BackgroundState, fp: FrequencyPoint,
                  basis: SeparationBasis | None = None,
                  tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Conjugate the reduced symbol to upper triangular form at fp.

    Reuses the basis pivots (frozen branch), recomputing eigenvectors and z at
    fp.  Returns (u_mat, t_mat) with u_mat = T^-1 A T; raises SeparationFailed
    when the structure residual exceeds tol * ||A||_max or T is singular.
    """
    if basis is None:
        basis = separation_basis(state, fp)
    (a_r, b_r, a_l, b_l), e_r, e_l, (al_r, al_l), (w_r, w_l) = _columns(state, fp)
    scale = fp.hemisphere_norm
    z_r = _z_value(basis.pivot_r, a_r, b_r, al_r, scale, "right")
    z_l = _z_value(basis.pivot_l, a_l, b_l, al_l, scale, "left")
    t_mat = _build_t(e_r, e_l, basis.pivot_r, basis.pivot_l)
    a_mat = reduced_symbol_closed(state, fp).a_mat
    try:
        u_mat = np.linalg.solve(t_mat, a_mat @ t_mat)
    except np.linalg.LinAlgError as exc:
        raise SeparationFailed(
            f"basis matrix singular at {fp} with pivots"
            f" ({basis.pivot_r}, {basis.pivot_l})"
        ) from exc
    expected = np.array([
        [w_r, z_r, 0, 0],
        [0, -w_r, 0, 0],
        [0, 0, w_l, z_l],
        [0, 0, 0, -w_l],
    ], dtype=complex)
    err = np.abs(u_mat - expected)
    bound = tol * max(np.max(np.abs(a_mat)), 1e-300)
    if np.max(err) > bound:
        i, j = np.unravel_index(int(np.argmax(err)), err.shape)
        raise SeparationFailed(
            f"triangular structure violated at entry ({i}, {j}):"
            f" |residual| = {err[i, j]:.3e} > {bound:.3e}"
        )
    return u_mat, t_mat


def triangularize_batch(state: BackgroundState, gamma, delta, eta) -> np.ndarray:
    """Vectorized structure residual ||T^-1 A T - U_expected|| / ||A|| per sample.

    Pivots are chosen independently at every sample (base point = evaluation
    point).  Used by the invariant checks at large sample counts.
    """
    t = _kernels.elastic_table(
        np.asarray(gamma, dtype=np.float64),
        np.asarray(delta, dtype=np.float64),
        np.asarray(eta, dtype=np.float64),
        state.v, state.f_sq, state.c,
    )
    n = t["a_r"].shape[0]
    a_r, b_r, a_l, b_l = t["a_r"], t["b_r"], t["a_l"], t["b_l"]
    al_r, al_l = t["alpha_r"], t["alpha_l"]
    w_r, w_l = t["omega_r"], t["omega_l"]

    # closed-form symbol entries, vectorized (samples assumed off the poles)
    tau = np.asarray(gamma, dtype=np.float64) + 1j * np.asarray(delta, dtype=np.float64)
    e_arr = np.asarray(eta, dtype=np.float64)
    fsq, c = state.f_sq, state.c
    amat = np.zeros((n, 4, 4), dtype=complex)
    for sgn, rows in ((1.0, (0, 1)), (-1.0, (2, 3))):
        s = tau + 1j * sgn * state.v * e_arr
        dd = s * s + fsq * e_arr ** 2
        nn = (2.0 * s * s + fsq * e_arr ** 2) / (2.0 * c * s) \
            + c * s * e_arr ** 2 / (2.0 * dd)
        mm = c * s * e_arr ** 2 / (2.0 * dd) - fsq * e_arr ** 2 / (2.0 * c * s)
        i, j = rows
        if sgn > 0:
            amat[:, i, i] = nn
            amat[:, i, j] = -mm
            amat[:, j, i] = mm
            amat[:, j, j] = -nn
        else:
            amat[:, i, i] = -nn
            amat[:, i, j] = mm
            amat[:, j, i] = -mm
            amat[:, j, j] = nn

    m_branch_r = np.abs(a_r) >= np.abs(b_r)
    m_branch_l = np.abs(a_l) >= np.abs(b_l)
    # both branch formulas are evaluated everywhere; the discarded branch may
    # legitimately divide by zero off its own validity region
    with np.errstate(divide="ignore", invalid="ignore"):
        z_r = np.where(m_branch_r, -1.0 / al_r, a_r / (al_r * b_r))
        z_l = np.where(m_branch_l, -1.0 / al_l, a_l / (al_l * b_l))

    tmat = np.zeros((n, 4, 4), dtype=complex)
    tmat[:, 0, 0] = a_r
    tmat[:, 1, 0] = b_r
    tmat[:, 1, 1] = np.where(m_branch_r, 1.0, 0.0)
    tmat[:, 0, 1] = np.where(m_branch_r, 0.0, 1.0)
    tmat[:, 2, 2] = b_l
    tmat[:, 3, 2] = a_l
    tmat[:, 2, 3] = np.where(m_branch_l, 1.0, 0.0)
    tmat[:, 3, 3] = np.where(m_branch_l, 0.0, 1.0)

    umat = np.linalg.solve(tmat, amat @ tmat)
    expected = np.zeros_like(umat)
    expected[:, 0, 0] = w_r
    expected[:, 0, 1] = z_r
    expected[:, 1, 1] = -w_r
    expected[:, 2, 2] = w_l
    expected[:, 2, 3] = z_l
    expected[:, 3, 3] = -w_l
    resid = np.max(np.abs(umat - expected), axis=(1, 2))
    scale = np.maximum(np.max(np.abs(amat), axis=(1, 2)), 1e-300)
    return resid / scale
