"""Background sheet states, derived speeds, and the stability case table.

A state is the right-side data (rho, v, F row, c); the left side is its mirror
(v^l = -v, F^l = -F), so only right-side values are stored.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateF, InvalidState


class CaseId(enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    CASE4 = "Case4"
    CASE5 = "Case5"
    CASE6 = "Case6"


class Regime(enum.Enum):
    """Stability outcome, labeled by the strength of the a priori estimate."""

    STABLE_LOSS1 = "StableLoss1"
    STABLE_LOSS2 = "StableLoss2"
    STABLE_LOSS3 = "StableLoss3"
    UNSTABLE = "Unstable"


REGIME_BY_CASE = {
    CaseId.CASE1: Regime.STABLE_LOSS1,
    CaseId.CASE2: Regime.STABLE_LOSS1,
    CaseId.CASE3: Regime.STABLE_LOSS2,
    CaseId.CASE4: Regime.STABLE_LOSS3,
    CaseId.CASE5: Regime.STABLE_LOSS2,
    CaseId.CASE6: Regime.UNSTABLE,
}


@dataclass(frozen=True)
class BackgroundState:
    """Piecewise-constant rectilinear sheet background (right-side values)."""

    v: float
    f11: float
    f12: float
    c: float
    rho: float = 1.0
    allow_zero_f: bool = False

    def __post_init__(self):
        validate_state(self)

    @property
    def f_sq(self) -> float:
        return self.f11 ** 2 + self.f12 ** 2

    @property
    def v_left(self) -> float:
        return -self.v


def validate_state(state: BackgroundState) -> None:
    """Positivity and nondegeneracy constraints; strict mode refuses F = 0."""
    if not state.rho > 0.0 or not math.isfinite(state.rho):
        raise InvalidState(f"density must be positive and finite, got {state.rho}")
    if not state.c > 0.0 or not math.isfinite(state.c):
        raise InvalidState(f"sound speed must be positive and finite, got {state.c}")
    if not state.v > 0.0 or not math.isfinite(state.v):
        raise InvalidState(
            f"right tangential speed must be positive and finite, got {state.v}"
        )
    if not (math.isfinite(state.f11) and math.isfinite(state.f12)):
        raise InvalidState("deformation entries must be finite")
    if state.f11 == 0.0 and state.f12 == 0.0 and not state.allow_zero_f:
        raise DegenerateF(
            "deformation row F is zero; pass allow_zero_f=True for the fluid limit"
        )


@dataclass(frozen=True)
class DerivedConstants:
    """Squared critical speeds of the case table."""

    f_sq: float
    v1_sq: float
    v2_sq: float
    weak_threshold_sq: float


def derived_constants(state: BackgroundState) -> DerivedConstants:
    """Critical speeds: V1, V2 from the boundary dispersion, weak threshold wt.

    V1,2^2 = v^2 + F^2 + c^2 -+ sqrt(c^4 + 4 (F^2 + c^2) v^2);
    wt^2 = F^2 (2 c^2 + F^2) / (4 (F^2 + c^2)).
    """
    fsq, c2, vsq = state.f_sq, state.c ** 2, state.v ** 2
    root = math.sqrt(c2 * c2 + 4.0 * (fsq + c2) * vsq)
    base = vsq + fsq + c2
    return DerivedConstants(
        f_sq=fsq,
        v1_sq=base - root,
        v2_sq=base + root,
        weak_threshold_sq=fsq * (2.0 * c2 + fsq) / (4.0 * (fsq + c2)),
    )


@dataclass(frozen=True)
class RootSpec:
    """Predicted determinant root: tau = theta * eta location and multiplicity."""

    theta: float
    multiplicity: int
    location: str = "boundary"  # "boundary" (tau = i theta eta) or "interior" (tau = theta eta)


@dataclass(frozen=True)
class CaseLabel:
    case_id: CaseId
    regime: Regime
    expected_roots: tuple[RootSpec, ...]


def _eq(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def classify_case(state: BackgroundState, tol: float = 1e-9) -> CaseLabel:
    """Place the state in the six-case partition of speed space.

    Equalities are decided first with relative tolerance tol, so grid points a
    few ulp off a critical speed classify onto it.  Root multiplicities follow
    the case table; Case 6 additionally records the interior root
    theta = sqrt(-V1^2) with Re tau > 0.
    """
    d = derived_constants(state)
    vsq, fsq, c2 = state.v ** 2, d.f_sq, state.c ** 2
    v = state.v
    v1 = math.sqrt(abs(d.v1_sq))

    if _eq(vsq, 2.0 * c2 + fsq, tol):
        case = CaseId.CASE4
        roots = (RootSpec(-v, 1), RootSpec(0.0, 3), RootSpec(v, 1))
    elif _eq(vsq, fsq, tol):
        case = CaseId.CASE5
        roots = (RootSpec(-v, 1), RootSpec(0.0, 2), RootSpec(v, 1))
    elif _eq(vsq, d.weak_threshold_sq, tol):
        case = CaseId.CASE3
        roots = (RootSpec(-v, 2), RootSpec(v, 2))
    elif vsq > 2.0 * c2 + fsq:
        case = CaseId.CASE1
        roots = (
            RootSpec(-v, 1), RootSpec(-v1, 1), RootSpec(0.0, 1),
            RootSpec(v1, 1), RootSpec(v, 1),
        )
    elif vsq < fsq:
        case = CaseId.CASE2
        roots = (
            RootSpec(-v, 1), RootSpec(v, 1), RootSpec(-v1, 1), RootSpec(v1, 1),
        )
    else:
        case = CaseId.CASE6
        boundary = [RootSpec(-v, 1), RootSpec(v, 1)]
        # upper sub-range: the two-sided roots are conjugate imaginaries at
        # theta = 0, so their sum factor vanishes on the boundary as well
        if vsq >= fsq + c2:
            boundary.append(RootSpec(0.0, 1))
        roots = tuple(boundary) + (RootSpec(v1, 1, location="interior"),)
    return CaseLabel(case, REGIME_BY_CASE[case], roots)


def expected_root_thetas(label: CaseLabel) -> list[RootSpec]:
    """Boundary roots of the label sorted by theta (interior entries excluded)."""
    return sorted(
        (r for r in label.expected_roots if r.location == "boundary"),
        key=lambda r: r.theta,
    )


def regime_from_inequalities(state: BackgroundState, tol: float = 1e-9) -> Regime:
    """Regime read directly from the estimate-form inequalities.

    Independent of the case table: evaluates the published inequality ranges
    (v^2 vs F^2, 2c^2 + F^2, wt^2) and returns the regime they assert.  Used to
    cross-check classify_case.
    """
    d = derived_constants(state)
    vsq, fsq, c2 = state.v ** 2, d.f_sq, state.c ** 2
    if _eq(vsq, 2.0 * c2 + fsq, tol):
        return Regime.STABLE_LOSS3
    if _eq(vsq, fsq, tol) or _eq(vsq, d.weak_threshold_sq, tol):
        return Regime.STABLE_LOSS2
    if vsq > 2.0 * c2 + fsq or vsq < fsq:
        return Regime.STABLE_LOSS1
    return Regime.UNSTABLE
