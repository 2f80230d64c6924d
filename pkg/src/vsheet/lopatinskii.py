"""Lopatinskii determinant: dual evaluation routes, roots, and exponent fits.

The determinant of the reduced boundary matrix applied to the decaying modes is
computed two ways on every call: the direct 2x2 determinant and the factored
product.  The factored route keeps full relative accuracy near roots (the
direct route cancels to ~1e-16 * scale there), so scans and fits use it, while
the identity between the two is a tested invariant of its own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels, modes
from .background import (BackgroundState, CaseLabel, classify_case,
                         derived_constants)
from .errors import FitDiverged, UnexpectedRoot
from .freq import FrequencyPoint, boundary_point, sample_hemisphere

FIT_FLOOR = 1e-14
DEFAULT_ROOT_TOL = 1e-8
DEFAULT_MATCH_TOL = 1e-6


@dataclass(frozen=True)
class LopatinskiiEval:
    """Boundary matrix on the decaying modes and its determinant, both routes."""

    mat: np.ndarray          # (2, 2) complex
    det_direct: complex
    det_factored: complex
    sigma_min: float


def table(state: BackgroundState, gamma, delta, eta) -> dict:
    """Batch kernel table for arrays of frequency samples."""
    return _kernels.elastic_table(
        np.asarray(gamma, dtype=np.float64),
        np.asarray(delta, dtype=np.float64),
        np.asarray(eta, dtype=np.float64),
        state.v, state.f_sq, state.c,
    )


def lopatinskii_eval(state: BackgroundState, fp: FrequencyPoint) -> LopatinskiiEval:
    """Evaluate the determinant data at a single point (total on the cone)."""
    t = table(state, [fp.gamma], [fp.delta], [fp.eta])
    mat = np.array([
        [t["d11"][0], t["d12"][0]],
        [t["d21"][0], t["d22"][0]],
    ])
    return LopatinskiiEval(
        mat=mat,
        det_direct=complex(t["det_direct"][0]),
        det_factored=complex(t["det_factored"][0]),
        sigma_min=float(t["sigma_min"][0]),
    )


def factorization_rel_errors(state: BackgroundState, gamma, delta, eta) -> np.ndarray:
    """|det_direct - det_factored| / (1 + |det_factored|) per sample."""
    t = table(state, gamma, delta, eta)
    return np.abs(t["det_direct"] - t["det_factored"]) / (
        1.0 + np.abs(t["det_factored"])
    )


def nondegeneracy_min(state: BackgroundState, gamma, delta, eta) -> tuple[float, float]:
    """Smallest |nondegeneracy value| over the samples, per side."""
    t = table(state, gamma, delta, eta)
    return float(np.min(np.abs(t["nondeg_r"]))), float(np.min(np.abs(t["nondeg_l"])))


def _boundary_geometry(thetas: np.ndarray, weight: float, eta_sign: float,
                       interior: bool):
    """Hemisphere coordinates for the scan family tau/eta = i theta (or theta)."""
    eta = eta_sign / np.sqrt(thetas * thetas + weight * weight)
    zero = np.zeros_like(thetas)
    if interior:
        # real tau = theta * eta with theta > 0: gamma = theta*eta must be >= 0
        return np.abs(thetas * eta), zero, eta
    return zero, thetas * eta, eta


def boundary_det_abs(state: BackgroundState, thetas, eta_sign: float = 1.0,
                     interior: bool = False, route: str = "factored") -> np.ndarray:
    """|Delta| along the hemisphere family parametrized by theta."""
    thetas = np.asarray(thetas, dtype=np.float64)
    g, d, e = _boundary_geometry(thetas, state.v, eta_sign, interior)
    t = table(state, g, d, e)
    key = "det_factored" if route == "factored" else "det_direct"
    return np.abs(t[key])


@dataclass(frozen=True)
class RootRecord:
    """A determinant root (found, predicted, or both)."""

    theta: float
    location: str                      # "boundary" or "interior"
    multiplicity_expected: int | None
    delta_abs: float                   # |Delta| at the recorded theta
    matched: bool                      # found by scan AND predicted by the case table
    slope_fitted: float | None = None
    lb_exponent_fitted: float | None = None
    kappa_log10: float | None = None


@dataclass(frozen=True)
class FitResult:
    """Least-squares power law y ~ 10^intercept * x^exponent (log10 space)."""

    exponent: float
    intercept: float
    residual_rms: float
    n_used: int


def _power_fit(x: np.ndarray, y: np.ndarray, floor: float,
               max_residual: float = 0.05) -> FitResult:
    keep = y > floor
    if int(keep.sum()) < 3:
        raise FitDiverged(
            f"only {int(keep.sum())} fit points above the floor {floor:g}"
        )
    lx, ly = np.log10(x[keep]), np.log10(y[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    if rms > max_residual:
        raise FitDiverged(f"power-law fit residual {rms:.3g} exceeds {max_residual}")
    return FitResult(float(slope), float(intercept), rms, int(keep.sum()))


def scan_minima(det_abs_fn, theta_max: float, n_grid: int,
                refine_tol: float = 1e-12) -> list[tuple[float, float]]:
    """Locate local minima of |Delta(theta)| on [-theta_max, theta_max].

    det_abs_fn maps a theta array to |Delta| values.  Each interior grid
    minimum is refined by bounded scalar minimization; returns the deduplicated
    (theta, |Delta|) pairs sorted by theta.
    """
    grid = np.linspace(-theta_max, theta_max, n_grid)
    vals = det_abs_fn(grid)
    idx = np.nonzero((vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:]))[0] + 1
    found: list[tuple[float, float]] = []
    for i in idx:
        res = minimize_scalar(
            lambda th: float(det_abs_fn(np.array([th]))[0]),
            bounds=(grid[i - 1], grid[i + 1]),
            method="bounded",
            options={"xatol": refine_tol},
        )
        th, fv = float(res.x), float(res.fun)
        if found and abs(th - found[-1][0]) <= 1e-9:
            if fv < found[-1][1]:
                found[-1] = (th, fv)
            continue
        found.append((th, fv))
    return found


def find_roots(state: BackgroundState, *, eta_sign: float = 1.0,
               n_grid: int = 10001, root_tol: float = DEFAULT_ROOT_TOL,
               match_tol: float = DEFAULT_MATCH_TOL, strict: bool = True,
               label: CaseLabel | None = None) -> list[RootRecord]:
    """Scan the hemisphere boundary (and the Case-6 real ray) for roots.

    Every refined minimum with |Delta| <= root_tol is matched against the case
    table's predictions within match_tol.  In strict mode an unmatched root
    raises UnexpectedRoot; otherwise it is returned with matched=False.
    Predicted roots the scan misses are also returned, flagged unmatched.
    """
    if label is None:
        label = classify_case(state)
    d = derived_constants(state)
    theta_max = max(state.v, math.sqrt(max(d.v1_sq, 0.0))) + 1.0

    records: list[RootRecord] = []
    for interior in (False, True):
        cands = [r for r in label.expected_roots
                 if (r.location == "interior") == interior]
        if interior and not cands:
            continue

        def det_fn(th, _interior=interior):
            return boundary_det_abs(state, th, eta_sign, _interior)

        minima = scan_minima(det_fn, theta_max, n_grid)
        roots = [(th, fv) for th, fv in minima if fv <= root_tol]
        if interior:
            # the family is symmetric under theta -> -theta; keep theta > 0
            roots = [(abs(th), fv) for th, fv in roots]
            merged: dict[float, float] = {}
            for th, fv in roots:
                key = min(merged, key=lambda k: abs(k - th), default=None)
                if key is not None and abs(key - th) <= 1e-9:
                    merged[key] = min(merged[key], fv)
                else:
                    merged[th] = fv
            # theta ~ 0 collapses onto the boundary point (0, 0, eta); a zero
            # there is the boundary root at theta = 0, not an interior root
            roots = [(th, fv) for th, fv in sorted(merged.items())
                     if th > match_tol]

        taken = [False] * len(cands)
        for th, fv in roots:
            best, best_err = None, math.inf
            for k, cand in enumerate(cands):
                err = abs(th - cand.theta)
                if not taken[k] and err < best_err:
                    best, best_err = k, err
            if best is not None and best_err <= match_tol:
                taken[best] = True
                records.append(RootRecord(
                    theta=th, location=cands[best].location,
                    multiplicity_expected=cands[best].multiplicity,
                    delta_abs=fv, matched=True,
                ))
            elif strict:
                raise UnexpectedRoot(th, fv)
            else:
                records.append(RootRecord(
                    theta=th, location="interior" if interior else "boundary",
                    multiplicity_expected=None, delta_abs=fv, matched=False,
                ))
        for k, cand in enumerate(cands):
            if taken[k]:
                continue
            fv = float(det_fn(np.array([cand.theta]))[0])
            # the scan can land a grid node exactly on a flat double root;
            # accept the prediction when the determinant does vanish there
            records.append(RootRecord(
                theta=cand.theta, location=cand.location,
                multiplicity_expected=cand.multiplicity, delta_abs=fv,
                matched=bool(fv <= root_tol),
            ))
    records.sort(key=lambda r: (r.location, r.theta))
    return records


def approach_points(state: BackgroundState, theta: float, gammas: np.ndarray,
                    eta_sign: float = 1.0) -> list[FrequencyPoint]:
    """Hemisphere points approaching the boundary root along increasing gamma."""
    return [boundary_point(theta, state.v, eta_sign, gamma=g) for g in gammas]


def estimate_multiplicity(state: BackgroundState, theta: float, *,
                          eta_sign: float = 1.0, eps_lo: float = 1e-6,
                          eps_hi: float = 1e-2, n: int = 12,
                          route: str = "factored",
                          max_residual: float = 0.05) -> FitResult:
    """Fit |Delta| ~ C gamma^k along the approach path to a boundary root.

    The exponent k estimates the root multiplicity.  Points where |Delta| falls
    below the floating floor are trimmed before fitting.
    """
    gammas = np.logspace(math.log10(eps_lo), math.log10(eps_hi), n)
    fps = approach_points(state, theta, gammas, eta_sign)
    g = np.array([fp.gamma for fp in fps])
    d = np.array([fp.delta for fp in fps])
    e = np.array([fp.eta for fp in fps])
    t = table(state, g, d, e)
    key = "det_factored" if route == "factored" else "det_direct"
    vals = np.abs(t[key])
    return _power_fit(g, vals, FIT_FLOOR, max_residual)


def lower_bound_scan(state: BackgroundState, theta: float, *,
                     eta_sign: float = 1.0, gammas: np.ndarray | None = None,
                     max_residual: float = 0.05) -> FitResult:
    """Fit sigma_min(beta E) ~ kappa gamma^j along the approach path.

    j estimates the loss order at the root (j ~ 0 away from roots).
    """
    if gammas is None:
        gammas = np.logspace(-3.5, -1.5, 12)
    fps = approach_points(state, theta, np.asarray(gammas), eta_sign)
    g = np.array([fp.gamma for fp in fps])
    d = np.array([fp.delta for fp in fps])
    e = np.array([fp.eta for fp in fps])
    t = table(state, g, d, e)
    return _power_fit(g, t["sigma_min"], 0.0, max_residual)


@dataclass(frozen=True)
class StabilityReport:
    """Everything cmd_analyze reports for one elastic state."""

    state: BackgroundState
    case_id: str
    regime: str
    derived: dict
    roots: list[RootRecord]
    checks: dict
    anomalies: list[str]


def stability_verdict(state: BackgroundState, *, samples: int = 2000,
                      seed: int = 0, gamma_min: float = 1e-6,
                      fit: bool = True) -> StabilityReport:
    """Classify, scan, fit, and cross-check one state.

    Evidence that conflicts with the case table (unexpected or missed roots,
    exponents off by more than 0.25, diverged fits) is reported in anomalies
    rather than raised.
    """
    label = classify_case(state)
    d = derived_constants(state)
    anomalies: list[str] = []

    records = find_roots(state, strict=False, label=label)
    out_records: list[RootRecord] = []
    for rec in records:
        if not rec.matched:
            if rec.multiplicity_expected is None:
                anomalies.append(
                    f"unexpected root at theta = {rec.theta:.9g}"
                    f" (|det| = {rec.delta_abs:.3e})"
                )
            else:
                anomalies.append(
                    f"predicted root at theta = {rec.theta:.9g} not found"
                    f" (|det| = {rec.delta_abs:.3e})"
                )
            out_records.append(rec)
            continue
        if fit and rec.location == "boundary":
            try:
                mult = estimate_multiplicity(state, rec.theta)
                lb = lower_bound_scan(state, rec.theta)
                rec = replace(rec, slope_fitted=mult.exponent,
                              lb_exponent_fitted=lb.exponent,
                              kappa_log10=lb.intercept)
                expected = rec.multiplicity_expected
                if expected is not None and abs(mult.exponent - expected) > 0.25:
                    anomalies.append(
                        f"multiplicity fit {mult.exponent:.3f} at theta ="
                        f" {rec.theta:.9g} disagrees with expected {expected}"
                    )
                if expected is not None and abs(lb.exponent - expected) > 0.25:
                    anomalies.append(
                        f"lower-bound exponent {lb.exponent:.3f} at theta ="
                        f" {rec.theta:.9g} disagrees with expected {expected}"
                    )
            except FitDiverged as exc:
                anomalies.append(f"fit at theta = {rec.theta:.9g} diverged: {exc}")
        out_records.append(rec)

    g, de, e = sample_hemisphere(samples, state.v, seed=seed, gamma_min=gamma_min)
    fac_err = float(np.max(factorization_rel_errors(state, g, de, e))) if samples else 0.0
    nd_r, nd_l = nondegeneracy_min(state, g, de, e) if samples else (0.0, 0.0)
    tri = modes.triangularize_batch(state, g, de, e) if samples else np.zeros(0)
    checks = {
        "samples": samples,
        "seed": seed,
        "factorization_max_rel_err": fac_err,
        "prop_min_abs_right": nd_r,
        "prop_min_abs_left": nd_l,
        "triangularization_max_resid": float(np.max(tri)) if tri.size else 0.0,
    }

    return StabilityReport(
        state=state,
        case_id=label.case_id.value,
        regime=label.regime.value,
        derived={
            "f_sq": d.f_sq, "v1_sq": d.v1_sq, "v2_sq": d.v2_sq,
            "weak_threshold_sq": d.weak_threshold_sq,
        },
        roots=out_records,
        checks=checks,
        anomalies=anomalies,
    )
