"""Model variants: elastic sheet (reference), inviscid fluid, and current-vortex sheet.

Each provider exposes the same surface: a hemisphere weight, decaying roots,
decaying eigenvectors, the reduced boundary matrix on the mode coefficients,
and the 2x2 determinant data.  The elastic provider delegates to the core
modules; the fluid provider is the F -> 0 limit with its own (nonvanishing)
eigenvector normalization; the magnetohydrodynamic provider follows the
two-speed dispersion with Alfven coupling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, lopatinskii
from .background import BackgroundState, classify_case, derived_constants
from .errors import InvalidState, SymbolPole
from .freq import FrequencyPoint, branch_sqrt, normalize_to_hemisphere


# ---------------------------------------------------------------------------
# fluid (F = 0) variant


@dataclass(frozen=True)
class FluidState:
    """Fluid sheet background: right-side speed and sound speed."""

    v: float
    c: float
    rho: float = 1.0

    def __post_init__(self):
        if not self.rho > 0.0 or not math.isfinite(self.rho):
            raise InvalidState(f"density must be positive and finite, got {self.rho}")
        if not self.c > 0.0 or not math.isfinite(self.c):
            raise InvalidState(f"sound speed must be positive and finite, got {self.c}")
        if not self.v > 0.0 or not math.isfinite(self.v):
            raise InvalidState(
                f"right tangential speed must be positive and finite, got {self.v}"
            )

    @property
    def f_sq(self) -> float:
        return 0.0

    def as_elastic(self) -> BackgroundState:
        return BackgroundState(v=self.v, f11=0.0, f12=0.0, c=self.c,
                               rho=self.rho, allow_zero_f=True)


def fluid_table(state: FluidState, gamma, delta, eta) -> dict:
    """Batch mode/determinant table for the fluid sheet.

    The eigenvectors here are the fluid normalization
    E_-^r = ((c/2) eta^2, s^2/c + (c/2) eta^2 - s omega, 0, 0) (left mirrored),
    which stays nonzero at theta = -+v where the elastic polynomial form picks
    up an extra (tau + i v eta)^2 factor.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    eta = np.asarray(eta, dtype=np.float64)
    base = _kernels.elastic_table(gamma, delta, eta, state.v, 0.0, state.c)
    tau = gamma + 1j * delta
    eta2 = eta * eta
    c, v = state.c, state.v
    s_r = tau + 1j * v * eta
    s_l = tau - 1j * v * eta
    w_r, w_l = base["omega_r"], base["omega_l"]
    a_r = (c / 2.0) * eta2 + 0.0j
    b_r = s_r * s_r / c + (c / 2.0) * eta2 - s_r * w_r
    a_l = (c / 2.0) * eta2 + 0.0j
    b_l = s_l * s_l / c + (c / 2.0) * eta2 - s_l * w_l
    d11 = b_r - a_r
    d12 = b_l - a_l
    d21 = -c * (tau - 1j * v * eta) * (a_r + b_r)
    d22 = c * (tau + 1j * v * eta) * (a_l + b_l)
    det = d11 * d22 - d12 * d21
    fro2 = (np.abs(d11) ** 2 + np.abs(d12) ** 2
            + np.abs(d21) ** 2 + np.abs(d22) ** 2)
    absdet = np.abs(det)
    disc = np.maximum(fro2 * fro2 - 4.0 * absdet * absdet, 0.0)
    smax = np.sqrt((fro2 + np.sqrt(disc)) / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        smin = np.where(smax > 0.0, absdet / smax, 0.0)
    return {
        "omega_r": w_r, "omega_l": w_l,
        "a_r": a_r * np.ones_like(w_r), "b_r": b_r,
        "a_l": a_l * np.ones_like(w_l), "b_l": b_l,
        "d11": d11, "d12": d12, "d21": d21, "d22": d22,
        "det_direct": det, "sigma_min": smin,
    }


def fluid_e_minus(state: FluidState, side: str, fp: FrequencyPoint) -> np.ndarray:
    """Decaying eigenvector of the fluid sheet, fluid normalization."""
    t = fluid_table(state, [fp.gamma], [fp.delta], [fp.eta])
    if side == "right":
        return np.array([t["a_r"][0], t["b_r"][0], 0.0, 0.0], dtype=complex)
    if side == "left":
        return np.array([0.0, 0.0, t["b_l"][0], t["a_l"][0]], dtype=complex)
    raise ValueError(f"side must be 'right' or 'left', got {side!r}")


# ---------------------------------------------------------------------------
# magnetohydrodynamic variant


@dataclass(frozen=True)
class MhdState:
    """Current-vortex sheet background: speed, sound speed, tangential field."""

    v: float
    c: float
    h2: float
    rho: float = 1.0

    def __post_init__(self):
        if not self.rho > 0.0 or not math.isfinite(self.rho):
            raise InvalidState(f"density must be positive and finite, got {self.rho}")
        if not self.c > 0.0 or not math.isfinite(self.c):
            raise InvalidState(f"sound speed must be positive and finite, got {self.c}")
        if not self.v > 0.0 or not math.isfinite(self.v):
            raise InvalidState(
                f"right tangential speed must be positive and finite, got {self.v}"
            )
        if not math.isfinite(self.h2):
            raise InvalidState("tangential field must be finite")

    @property
    def c_alfven(self) -> float:
        return abs(self.h2) / math.sqrt(self.rho)

    @property
    def lam(self) -> float:
        """Combined speed sqrt(c^2 + c_A^2)."""
        return math.sqrt(self.c ** 2 + self.c_alfven ** 2)


def _mhd_pieces(state: MhdState, sgn: float, tau, eta):
    """s, den, and the polynomial alpha*m, alpha*n, alpha for one side."""
    ca2 = state.c_alfven ** 2
    c2 = state.c ** 2
    lam = state.lam
    s = tau + 1j * sgn * state.v * eta
    eta2 = eta * eta
    den = lam * lam * s * s + c2 * ca2 * eta2
    alpha = s * den
    am = (eta2 / (2.0 * lam)) * ((c2 * c2 - ca2 * lam * lam) * s * s
                                 - c2 * ca2 * ca2 * eta2)
    an = am + den * (s * s + ca2 * eta2) / lam
    return s, den, alpha, am, an


def mhd_omega(state: MhdState, side: str, fp: FrequencyPoint) -> complex:
    """Decaying root: omega^2 = (s^2 + cA^2 eta^2)(s^2 + c^2 eta^2) / den.

    Raises SymbolPole when den = lam^2 s^2 + c^2 cA^2 eta^2 vanishes (there the
    root blows up).  On the boundary cut the side rule mirrors the elastic one
    with hint sgn(delta + v eta).
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    sgn = 1.0 if side == "right" else -1.0
    s, den, _, _, _ = _mhd_pieces(state, sgn, fp.tau, fp.eta)
    size = abs(fp.tau) ** 2 + fp.eta ** 2
    if abs(den) <= 1e-14 * (state.lam ** 2 + state.c * state.c_alfven) * size:
        raise SymbolPole("lam^2 (tau + i v eta)^2 + c^2 cA^2 eta^2", den)
    ca2 = state.c_alfven ** 2
    c2 = state.c ** 2
    w2 = (s * s + ca2 * fp.eta ** 2) * (s * s + c2 * fp.eta ** 2) / den
    hint = fp.delta + sgn * state.v * fp.eta
    return branch_sqrt(w2.real, w2.imag, sign_hint=hint if hint != 0.0 else None).value


def mhd_e_minus(state: MhdState, side: str, fp: FrequencyPoint) -> np.ndarray:
    """Decaying eigenvector in the pole-free alpha normalization.

    E_-^r = (alpha m, alpha (n - omega), 0, 0), left mirrored.  On the special
    set s^2 + cA^2 eta^2 = 0 the root omega vanishes and the vector reduces to
    the analytic limit (alpha m, alpha n), which stays nonzero for cA != c.
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    sgn = 1.0 if side == "right" else -1.0
    s, den, alpha, am, an = _mhd_pieces(state, sgn, fp.tau, fp.eta)
    w = mhd_omega(state, side, fp)
    first = am
    second = an - w * alpha
    if side == "right":
        return np.array([first, second, 0.0, 0.0], dtype=complex)
    return np.array([0.0, 0.0, second, first], dtype=complex)


def mhd_beta(state: MhdState, fp: FrequencyPoint) -> np.ndarray:
    """Reduced boundary matrix of the current-vortex sheet (degree 0).

    Evaluated at the hemisphere-normalized point of fp's ray, weight v.
    """
    fpn = normalize_to_hemisphere(
        FrequencyPoint(fp.gamma, fp.delta, fp.eta, weight=state.v)
    )
    rho, lam, v = state.rho, state.lam, state.v
    tau, eta = fpn.tau, fpn.eta
    rl2 = rho * lam * lam
    s_l = lam * (tau - 1j * v * eta)
    s_r = lam * (tau + 1j * v * eta)
    return np.array([
        [-rl2, rl2, rl2, -rl2],
        [s_l, s_l, -s_r, -s_r],
    ], dtype=complex)


def mhd_lop(state: MhdState, fp: FrequencyPoint):
    """(matrix, determinant) of the boundary conditions on the decaying modes."""
    beta = mhd_beta(state, fp)
    e_r = mhd_e_minus(state, "right", fp)
    e_l = mhd_e_minus(state, "left", fp)
    mat = np.column_stack([beta @ e_r, beta @ e_l])
    det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    return mat, complex(det)


def mhd_dispersion_residual(state: MhdState, side: str, fp: FrequencyPoint) -> float:
    """|den omega^2 - (s^2 + cA^2 eta^2)(s^2 + c^2 eta^2)| / size^4."""
    sgn = 1.0 if side == "right" else -1.0
    s, den, _, _, _ = _mhd_pieces(state, sgn, fp.tau, fp.eta)
    w = mhd_omega(state, side, fp)
    ca2 = state.c_alfven ** 2
    c2 = state.c ** 2
    lhs = den * w * w
    rhs = (s * s + ca2 * fp.eta ** 2) * (s * s + c2 * fp.eta ** 2)
    size = abs(fp.tau) ** 2 + fp.eta ** 2
    scale = max((state.lam ** 2 + c2) ** 2 * size * size, 1e-300)
    return float(abs(lhs - rhs)) / scale


def mhd_special_set_point(state: MhdState, eta: float = 1.0,
                          branch: float = 1.0) -> FrequencyPoint:
    """Boundary point with (tau + i v eta)^2 + cA^2 eta^2 = 0: tau = i(-v + cA b) eta."""
    delta = (-state.v + branch * state.c_alfven) * eta
    return FrequencyPoint(0.0, delta, eta, weight=state.v)


# ---------------------------------------------------------------------------
# provider registry (names used by the CLI)


@dataclass(frozen=True)
class ModelInfo:
    name: str
    weight: float
    state: object


def make_state(model: str, *, v: float, c: float, f11: float = 1.0,
               f12: float = 0.0, rho: float = 1.0, h2: float = 1.0,
               strict: bool = True):
    """Construct the model-specific background from CLI-style parameters."""
    if model == "elastic":
        return BackgroundState(v=v, f11=f11, f12=f12, c=c, rho=rho,
                               allow_zero_f=not strict)
    if model == "euler":
        return FluidState(v=v, c=c, rho=rho)
    if model == "mhd":
        return MhdState(v=v, c=c, h2=h2, rho=rho)
    raise InvalidState(f"unknown model {model!r}")


def fluid_find_roots(state: FluidState, *, eta_sign: float = 1.0,
                     n_grid: int = 10001, root_tol: float = 1e-8,
                     match_tol: float = 1e-6, strict: bool = True):
    """Root scan for the fluid sheet using the F = 0 case predictions."""
    elastic = state.as_elastic()
    label = classify_case(elastic)

    def det_fn(thetas):
        thetas = np.asarray(thetas, dtype=np.float64)
        eta = eta_sign / np.sqrt(thetas * thetas + state.v ** 2)
        t = fluid_table(state, np.zeros_like(thetas), thetas * eta, eta)
        return np.abs(t["det_direct"])

    d = derived_constants(elastic)
    theta_max = max(state.v, math.sqrt(max(d.v1_sq, 0.0))) + 1.0
    minima = lopatinskii.scan_minima(det_fn, theta_max, n_grid)
    # the elastic determinant at F = 0 carries (tau -+ i v eta)^2 normalization
    # factors that vanish at theta = -+v; the fluid determinant does not, so
    # those case-table entries are not fluid roots
    cands = [r for r in label.expected_roots
             if r.location == "boundary"
             and abs(abs(r.theta) - state.v) > 1e-12]
    records = []
    taken = [False] * len(cands)
    for th, fv in minima:
        if fv > root_tol:
            continue
        best, best_err = None, math.inf
        for k, cand in enumerate(cands):
            err = abs(th - cand.theta)
            if not taken[k] and err < best_err:
                best, best_err = k, err
        if best is not None and best_err <= match_tol:
            taken[best] = True
            records.append(lopatinskii.RootRecord(
                theta=th, location="boundary",
                multiplicity_expected=cands[best].multiplicity,
                delta_abs=fv, matched=True,
            ))
        elif strict:
            from .errors import UnexpectedRoot
            raise UnexpectedRoot(th, fv)
        else:
            records.append(lopatinskii.RootRecord(
                theta=th, location="boundary", multiplicity_expected=None,
                delta_abs=fv, matched=False,
            ))
    for k, cand in enumerate(cands):
        if not taken[k]:
            fv = float(det_fn(np.array([cand.theta]))[0])
            records.append(lopatinskii.RootRecord(
                theta=cand.theta, location="boundary",
                multiplicity_expected=cand.multiplicity, delta_abs=fv,
                matched=bool(fv <= root_tol),
            ))
    for cand in label.expected_roots:
        if cand.location != "interior":
            continue
        eta = eta_sign / math.hypot(cand.theta, state.v)
        t = fluid_table(state, [abs(cand.theta * eta)], [0.0], [eta])
        fv = float(np.abs(t["det_direct"][0]))
        records.append(lopatinskii.RootRecord(
            theta=cand.theta, location="interior",
            multiplicity_expected=cand.multiplicity, delta_abs=fv,
            matched=bool(fv <= root_tol),
        ))
    records.sort(key=lambda r: (r.location, r.theta))
    return records


def fluid_estimate_multiplicity(state: FluidState, theta: float, *,
                                eta_sign: float = 1.0, eps_lo: float = 1e-6,
                                eps_hi: float = 1e-2, n: int = 12,
                                max_residual: float = 0.05):
    """Fit |det| ~ C gamma^k along the approach path to a fluid boundary root."""
    from .freq import boundary_point

    gammas = np.logspace(math.log10(eps_lo), math.log10(eps_hi), n)
    fps = [boundary_point(theta, state.v, eta_sign, gamma=g) for g in gammas]
    g = np.array([fp.gamma for fp in fps])
    d = np.array([fp.delta for fp in fps])
    e = np.array([fp.eta for fp in fps])
    vals = np.abs(fluid_table(state, g, d, e)["det_direct"])
    return lopatinskii._power_fit(g, vals, lopatinskii.FIT_FLOOR, max_residual)


def mhd_boundary_scan(state: MhdState, *, eta_sign: float = 1.0,
                      n_grid: int = 10001, root_tol: float = 1e-8):
    """Boundary root scan for the current-vortex sheet (no candidate table)."""

    def det_fn(thetas):
        thetas = np.asarray(thetas, dtype=np.float64)
        eta = eta_sign / np.sqrt(thetas * thetas + state.v ** 2)
        vals = np.empty(thetas.shape[0], dtype=np.float64)
        for i in range(thetas.shape[0]):
            fp = FrequencyPoint(0.0, float(thetas[i] * eta[i]), float(eta[i]),
                                weight=state.v)
            try:
                _, det = mhd_lop(state, fp)
                vals[i] = abs(det)
            except SymbolPole:
                vals[i] = math.inf
        return vals

    theta_max = state.v + state.lam + 1.0
    minima = lopatinskii.scan_minima(det_fn, theta_max, n_grid)
    return [lopatinskii.RootRecord(theta=th, location="boundary",
                                   multiplicity_expected=None, delta_abs=fv,
                                   matched=False)
            for th, fv in minima if fv <= root_tol]
