"""Named invariant checks shared by the test suite and the verify command.

Each check returns a CheckResult with the measured value and the tolerance it
was held to; run_all executes the whole registry with optional per-name (or
blanket "all") tolerance overrides.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bvp, lopatinskii, models, modes, symbol
from .background import BackgroundState, classify_case, regime_from_inequalities
from .errors import FitDiverged
from .freq import FrequencyPoint, branch_sqrt, sample_hemisphere


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named invariant check."""

    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""


def case_states(c: float = 1.0, f11: float = 1.0, f12: float = 0.0) -> dict:
    """One background per stability case, ordered Case1..Case6.

    With F = (1, 0) and c = 1 the thresholds sit at F^2 = 1, 2c^2 + F^2 = 3,
    and the double-root speed sqrt(3/8).
    """
    speeds = {
        "Case1": 2.0,
        "Case2": 0.5,
        "Case3": math.sqrt(3.0 / 8.0),
        "Case4": math.sqrt(3.0),
        "Case5": 1.0,
        "Case6": 1.5,
    }
    return {k: BackgroundState(v=v, f11=f11, f12=f12, c=c)
            for k, v in speeds.items()}


def coincidence_state() -> BackgroundState:
    """Case2 background where the slow branch collides with v (v^2 = 1/2)."""
    return BackgroundState(v=math.sqrt(0.5), f11=1.0, f12=0.0, c=1.0)


_GENERIC_FP = FrequencyPoint(0.3, 0.2, 0.4)


# ---------------------------------------------------------------------------
# individual checks


def check_branch_sqrt(tol: float, samples: int, seed: int) -> CheckResult:
    """Branch values re-square to the argument and have nonpositive real part."""
    rng = np.random.default_rng(seed)
    p = rng.uniform(-3.0, 3.0, samples)
    q = rng.uniform(-3.0, 3.0, samples)
    worst = 0.0
    for pi, qi in zip(p, q):
        bv = branch_sqrt(float(pi), float(qi))
        z = bv.value
        worst = max(worst, abs(z * z - complex(pi, qi)) / (1.0 + math.hypot(pi, qi)))
        if z.real > 0.0:
            return CheckResult("branch_sqrt", False, z.real, tol,
                               f"positive real part at p={pi:.3g}, q={qi:.3g}")
    return CheckResult("branch_sqrt", worst <= tol, worst, tol,
                       f"{samples} samples, re-square relative error")


def check_factorization(tol: float, samples: int, seed: int) -> CheckResult:
    """Direct 2x2 determinant agrees with the explicit factorization."""
    worst = 0.0
    for name, st in case_states().items():
        g, d, e = sample_hemisphere(samples, st.v, seed=seed, gamma_min=1e-3)
        err = float(np.max(lopatinskii.factorization_rel_errors(st, g, d, e)))
        worst = max(worst, err)
    return CheckResult("factorization", worst <= tol, worst, tol,
                       f"{samples} hemisphere samples per case, gamma >= 1e-3")


def check_anchor_point(tol: float, samples: int, seed: int) -> CheckResult:
    """Both determinant routes give exactly 8 at (gamma, delta, eta) = (1, 0, 0)."""
    worst = 0.0
    for st in case_states().values():
        ev = lopatinskii.lopatinskii_eval(st, FrequencyPoint(1.0, 0.0, 0.0))
        worst = max(worst, abs(ev.det_direct - 8.0), abs(ev.det_factored - 8.0))
    return CheckResult("anchor_point", worst <= tol, worst, tol,
                       "|det - 8| over both routes and all six cases")


def check_homogeneity(tol: float, samples: int, seed: int) -> CheckResult:
    """Determinant is degree 9 and the front symbol degree 1 along rays."""
    st = case_states()["Case1"]
    fp = _GENERIC_FP
    worst = 0.0
    for s in (2.7, 0.31):
        fps = fp.scaled(s)
        d0 = lopatinskii.lopatinskii_eval(st, fp).det_direct
        d1 = lopatinskii.lopatinskii_eval(st, fps).det_direct
        worst = max(worst, abs(d1 - s ** 9 * d0) / (1.0 + abs(d1)))
        t0 = symbol.assemble_boundary(st, fp).theta
        t1 = symbol.assemble_boundary(st, fps).theta
        worst = max(worst, abs(t1 - s * t0) / (1.0 + abs(t1)))
    return CheckResult("homogeneity", worst <= tol, worst, tol,
                       "Delta ~ s^9, theta ~ s^1 along a ray")


def check_reduction_consistency(tol: float, samples: int, seed: int) -> CheckResult:
    """Closed-form reduced symbol equals the elimination route."""
    n = max(20, samples // 10)
    worst = 0.0
    for st in case_states().values():
        g, d, e = sample_hemisphere(n, st.v, seed=seed, gamma_min=1e-3)
        for gi, di, ei in zip(g, d, e):
            fp = FrequencyPoint(float(gi), float(di), float(ei))
            a1 = symbol.reduced_symbol_closed(st, fp).a_mat
            a2 = symbol.reduced_symbol_via_elimination(st, fp).a_mat
            worst = max(worst, float(np.max(np.abs(a1 - a2))))
    return CheckResult("reduction_consistency", worst <= tol, worst, tol,
                       f"{n} points per case, entrywise")


def check_triangularization(tol: float, samples: int, seed: int) -> CheckResult:
    """T^-1 A T has the expected triangular structure (relative residual)."""
    worst = 0.0
    for st in case_states().values():
        g, d, e = sample_hemisphere(samples, st.v, seed=seed, gamma_min=1e-3)
        worst = max(worst, float(np.max(modes.triangularize_batch(st, g, d, e))))
    return CheckResult("triangularization", worst <= tol, worst, tol,
                       f"{samples} samples per case, residual / ||A||")


def check_nondegeneracy(tol: float, samples: int, seed: int) -> CheckResult:
    """s omega - c (omega^2 - eta^2) stays away from zero on the open cone."""
    states = dict(case_states())
    states["coincidence"] = coincidence_state()
    least = math.inf
    for st in states.values():
        g, d, e = sample_hemisphere(samples, st.v, seed=seed, gamma_min=1e-3)
        nd_r, nd_l = lopatinskii.nondegeneracy_min(st, g, d, e)
        least = min(least, nd_r, nd_l)
    return CheckResult("nondegeneracy", least > tol, least, tol,
                       f"min over both sides, {samples} samples per state "
                       "(passes when value > tolerance)")


def check_classification(tol: float, samples: int, seed: int) -> CheckResult:
    """Case-table classification matches the inequality-only oracle on a sweep."""
    mism = 0
    for v in np.arange(0.1, 2.0 + 1e-12, 0.01):
        st = BackgroundState(v=float(v), f11=1.0, f12=0.0, c=1.0)
        if classify_case(st).regime != regime_from_inequalities(st):
            mism += 1
    return CheckResult("classification", mism <= tol, float(mism), tol,
                       "regime mismatches over v in [0.1, 2.0] step 0.01")


def check_roots(tol: float, samples: int, seed: int) -> CheckResult:
    """Determinant root scan finds the case table, nothing more, nothing less."""
    bad = 0
    details = []
    for name, st in case_states().items():
        for rec in lopatinskii.find_roots(st, strict=False):
            if not rec.matched:
                bad += 1
                details.append(f"{name}@{rec.theta:.6g}")
    detail = "unmatched: " + (", ".join(details) if details else "none")
    return CheckResult("roots", bad <= tol, float(bad), tol, detail)


_MULT_TARGETS = {
    # case -> [(theta, expected vanishing order)] on the boundary
    "Case1": [(2.0, 1), (0.0, 1), (math.sqrt(6.0 - math.sqrt(33.0)), 1)],
    "Case3": [(math.sqrt(3.0 / 8.0), 2)],
    "Case4": [(math.sqrt(3.0), 1), (0.0, 3)],
    "Case5": [(1.0, 1), (0.0, 2)],
    "Case6": [(1.5, 1), (0.0, 1)],
}


def check_multiplicity_fits(tol: float, samples: int, seed: int) -> CheckResult:
    """|Delta| ~ gamma^k along the approach path, k = tabulated multiplicity."""
    states = case_states()
    worst = 0.0
    worst_at = ""
    for name, targets in _MULT_TARGETS.items():
        for theta, expected in targets:
            fit = lopatinskii.estimate_multiplicity(states[name], theta)
            dev = abs(fit.exponent - expected)
            if dev > worst:
                worst, worst_at = dev, f"{name}@{theta:.6g}"
    return CheckResult("multiplicity_fits", worst <= tol, worst, tol,
                       f"max |k_fit - k| (worst at {worst_at})")


_LB_TARGETS = {
    "Case1": (2.0, 1),
    "Case3": (math.sqrt(3.0 / 8.0), 2),
    "Case4": (math.sqrt(3.0), 1),
    "Case5": (0.0, 2),
    "Case6": (1.5, 1),
}


def check_lower_bound_fits(tol: float, samples: int, seed: int) -> CheckResult:
    """sigma_min ~ kappa gamma^j at a root; j ~ 0 away from roots."""
    states = case_states()
    worst = 0.0
    worst_at = ""
    for name, (theta, expected) in _LB_TARGETS.items():
        fit = lopatinskii.lower_bound_scan(states[name], theta)
        dev = abs(fit.exponent - expected)
        if dev > worst:
            worst, worst_at = dev, f"{name}@{theta:.6g}"
    off = lopatinskii.lower_bound_scan(states["Case1"], 1.0)
    if abs(off.exponent) > worst:
        worst, worst_at = abs(off.exponent), "Case1@1 (off-root)"
    return CheckResult("lower_bound_fits", worst <= tol, worst, tol,
                       f"max |j_fit - j| (worst at {worst_at})")


def check_bvp_residuals(tol: float, samples: int, seed: int) -> CheckResult:
    """Decaying solve satisfies boundary data, the ODE, and the algebraic rows."""
    st = case_states()["Case1"]
    fp = _GENERIC_FP
    h = np.array([1.0, 0.5])
    sol = bvp.solve_decaying(st, fp, h)
    r_bdry = sol.boundary_residual / float(np.linalg.norm(h))
    r_ode = bvp.ode_residual_fd(st, fp, sol, 0.7)
    w = symbol.reconstruct_characteristic(st, fp, sol.w_nc0)
    sm = symbol.assemble_interior(st)
    g = fp.tau * sm.a0 + 1j * fp.eta * sm.a1
    char = list(symbol.CHAR_INDICES)
    r_alg = float(np.linalg.norm((g @ w)[char])) / max(float(np.linalg.norm(w)), 1e-300)
    margin = bvp.decay_envelope_margin(sol, np.linspace(0.0, 5.0, 64))
    worst = max(r_bdry, r_ode, r_alg, margin)
    return CheckResult("bvp_residuals", worst <= tol, worst, tol,
                       f"boundary {r_bdry:.2e}, ode {r_ode:.2e}, "
                       f"algebraic {r_alg:.2e}, decay margin {margin:.2e}")


def check_front_identity(tol: float, samples: int, seed: int) -> CheckResult:
    """Front recovery inverts the forward boundary map exactly."""
    st = case_states()["Case1"]
    fp = _GENERIC_FP
    w8 = (np.arange(1.0, 9.0) / 8.0) * (1.0 + 0.5j)
    phi0 = 0.7 - 0.3j
    g = bvp.boundary_data_from_front(st, fp, w8, phi0)
    phi = bvp.reconstruct_front(st, fp, w8, g)
    err = abs(phi - phi0) / (1.0 + abs(phi0))
    return CheckResult("front_identity", err <= tol, err, tol,
                       "round trip through the boundary conditions")


def check_euler_parallel(tol: float, samples: int, seed: int) -> CheckResult:
    """Elastic determinant at F = 0 equals (s_r s_l)^2 times the fluid one."""
    fl = models.FluidState(v=2.0, c=1.0)
    el = fl.as_elastic()
    g, d, e = sample_hemisphere(samples, fl.v, seed=seed, gamma_min=1e-3)
    t_el = lopatinskii.table(el, g, d, e)
    t_fl = models.fluid_table(fl, g, d, e)
    tau = g + 1j * d
    s_r = tau + 1j * fl.v * e
    s_l = tau - 1j * fl.v * e
    pred = (s_r * s_l) ** 2 * t_fl["det_direct"]
    err = float(np.max(np.abs(t_el["det_direct"] - pred)
                       / (1.0 + np.abs(t_el["det_direct"]))))
    return CheckResult("euler_parallel", err <= tol, err, tol,
                       f"{samples} samples, determinant comparison")


def check_mhd_dispersion(tol: float, samples: int, seed: int) -> CheckResult:
    """Decaying root satisfies the two-speed dispersion relation."""
    st = models.MhdState(v=2.0, c=1.5, h2=1.0)
    g, d, e = sample_hemisphere(max(50, samples // 10), st.v, seed=seed,
                                gamma_min=1e-3)
    worst = 0.0
    for gi, di, ei in zip(g, d, e):
        fp = FrequencyPoint(float(gi), float(di), float(ei))
        for side in ("right", "left"):
            worst = max(worst, models.mhd_dispersion_residual(st, side, fp))
    return CheckResult("mhd_dispersion", worst <= tol, worst, tol,
                       "residual / size^4, both sides")


def check_mhd_special_set(tol: float, samples: int, seed: int) -> CheckResult:
    """On s^2 + cA^2 eta^2 = 0 the root vanishes but the eigenvector does not."""
    st = models.MhdState(v=2.0, c=1.5, h2=1.0)
    fp = models.mhd_special_set_point(st, eta=1.0 / math.sqrt(5.0))
    w = models.mhd_omega(st, "right", fp)
    e = models.mhd_e_minus(st, "right", fp)
    err = max(abs(w), abs(e[1] - e[0]))
    norm = float(np.linalg.norm(e))
    if norm <= 1e-6:
        return CheckResult("mhd_special_set", False, norm, tol,
                           "eigenvector degenerated on the special set")
    return CheckResult("mhd_special_set", err <= tol, err, tol,
                       f"|omega| and |E2 - E1| with ||E|| = {norm:.3e}")


def check_determinism(tol: float, samples: int, seed: int) -> CheckResult:
    """Seeded hemisphere sampling is reproducible bit for bit."""
    a = sample_hemisphere(samples, 2.0, seed=seed)
    b = sample_hemisphere(samples, 2.0, seed=seed)
    same = all(np.array_equal(x, y) for x, y in zip(a, b))
    return CheckResult("determinism", same, 0.0 if same else 1.0, tol,
                       "two draws with the same seed")


# ---------------------------------------------------------------------------
# registry

DEFAULT_TOLERANCES = {
    "branch_sqrt": 1e-12,
    "factorization": 1e-8,
    "anchor_point": 1e-12,
    "homogeneity": 1e-10,
    "reduction_consistency": 1e-10,
    "triangularization": 1e-10,
    "nondegeneracy": 0.0,
    "classification": 0.0,
    "roots": 0.0,
    "multiplicity_fits": 0.1,
    "lower_bound_fits": 0.15,
    "bvp_residuals": 1e-8,
    "front_identity": 1e-12,
    "euler_parallel": 1e-8,
    "mhd_dispersion": 1e-10,
    "mhd_special_set": 1e-10,
    "determinism": 0.0,
}

_REGISTRY = {
    "branch_sqrt": check_branch_sqrt,
    "factorization": check_factorization,
    "anchor_point": check_anchor_point,
    "homogeneity": check_homogeneity,
    "reduction_consistency": check_reduction_consistency,
    "triangularization": check_triangularization,
    "nondegeneracy": check_nondegeneracy,
    "classification": check_classification,
    "roots": check_roots,
    "multiplicity_fits": check_multiplicity_fits,
    "lower_bound_fits": check_lower_bound_fits,
    "bvp_residuals": check_bvp_residuals,
    "front_identity": check_front_identity,
    "euler_parallel": check_euler_parallel,
    "mhd_dispersion": check_mhd_dispersion,
    "mhd_special_set": check_mhd_special_set,
    "determinism": check_determinism,
}


def check_names() -> list[str]:
    return list(_REGISTRY)


def resolve_tolerances(overrides: dict | None) -> dict:
    """Apply per-name (or blanket "all") overrides to the default tolerances."""
    tols = dict(DEFAULT_TOLERANCES)
    if not overrides:
        return tols
    unknown = set(overrides) - set(tols) - {"all"}
    if unknown:
        raise KeyError(f"unknown check name(s): {sorted(unknown)}")
    if "all" in overrides:
        tols = {k: float(overrides["all"]) for k in tols}
    for k, val in overrides.items():
        if k != "all":
            tols[k] = float(val)
    return tols


def run_all(tols: dict | None = None, samples: int = 500,
            seed: int = 0) -> list[CheckResult]:
    """Run every registered check; fit failures count as check failures."""
    resolved = resolve_tolerances(tols)
    out = []
    for name, fn in _REGISTRY.items():
        try:
            out.append(fn(resolved[name], samples, seed))
        except FitDiverged as exc:
            out.append(CheckResult(name, False, math.nan, resolved[name],
                                   f"fit diverged: {exc}"))
    return out
