"""Frequency-space geometry and branch-correct decaying roots.

Frequencies live in the closed forward cone Pi = {Re tau >= 0, (tau, eta) != 0}.
Sampling and normalization target the weighted hemisphere
Sigma = {|tau|^2 + w^2 eta^2 = 1} whose weight w is model-dependent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import BranchAmbiguity, OutsideCone, ZeroFrequency


@dataclass(frozen=True)
class FrequencyPoint:
    """A point (gamma + i delta, eta) of the forward cone with its Sigma weight."""

    gamma: float
    delta: float
    eta: float
    weight: float = 1.0

    def __post_init__(self):
        if not self.weight > 0.0:
            raise ValueError(f"hemisphere weight must be positive, got {self.weight}")
        if self.gamma < 0.0:
            raise OutsideCone(f"gamma = {self.gamma} < 0 is outside the forward cone")
        if self.gamma == 0.0 and self.delta == 0.0 and self.eta == 0.0:
            raise ZeroFrequency("the zero frequency point is excluded")

    @property
    def tau(self) -> complex:
        return complex(self.gamma, self.delta)

    @property
    def hemisphere_norm(self) -> float:
        return math.sqrt(
            self.gamma ** 2 + self.delta ** 2 + (self.weight * self.eta) ** 2
        )

    @property
    def on_hemisphere(self) -> bool:
        return abs(self.hemisphere_norm - 1.0) <= 1e-9

    def scaled(self, s: float) -> "FrequencyPoint":
        """Same ray, radius multiplied by s > 0."""
        if not s > 0.0:
            raise ValueError("scale must be positive")
        return replace(
            self, gamma=self.gamma * s, delta=self.delta * s, eta=self.eta * s
        )


def normalize_to_hemisphere(fp: FrequencyPoint) -> FrequencyPoint:
    """Rescale fp along its ray onto |tau|^2 + w^2 eta^2 = 1."""
    r = fp.hemisphere_norm
    if r == 0.0:
        raise ZeroFrequency("cannot normalize the zero point")
    return fp.scaled(1.0 / r)


@dataclass(frozen=True)
class BranchValue:
    """Square root with Re <= 0, tracking whether the cut rule was used."""

    x: float
    y: float
    at_cut: bool

    @property
    def value(self) -> complex:
        return complex(self.x, self.y)


def branch_sqrt(p: float, q: float, sign_hint: float | None = None) -> BranchValue:
    """Decaying branch of sqrt(p + i q).

    Off the cut: x = -sqrt((r + p)/2), y = -sgn(q) sqrt((r - p)/2) with
    r = hypot(p, q), so Re <= 0 always.  On the cut {p < 0, q = 0} the branch is
    two-valued and the imaginary part takes the side opposite to sign_hint
    (y = -sgn(sign_hint) sqrt(-p)); without a usable hint the call raises
    BranchAmbiguity.
    """
    r = math.hypot(p, q)
    if q == 0.0 and p < 0.0:
        if sign_hint is None or sign_hint == 0.0:
            raise BranchAmbiguity(
                f"sqrt branch on the cut (p = {p}, q = 0) needs a side hint"
            )
        s = 1.0 if sign_hint > 0.0 else -1.0
        return BranchValue(-0.0, -s * math.sqrt(-p), True)
    # only the addition r + |p| is cancellation-free; the smaller component
    # comes from 2 x y = q, which the sqrt of r - |p| would get wrong by
    # O(sqrt(eps)) when |q| << |p|
    if p >= 0.0:
        x = -math.sqrt((r + p) / 2.0)
        y = q / (2.0 * x) if x != 0.0 else 0.0
    else:
        y = -math.copysign(1.0, q) * math.sqrt((r - p) / 2.0)
        x = q / (2.0 * y)
    return BranchValue(x, y, False)


def _table_at(state, fp: FrequencyPoint) -> dict:
    return _kernels.elastic_table(
        np.array([fp.gamma]), np.array([fp.delta]), np.array([fp.eta]),
        state.v, state.f_sq, state.c,
    )


def omega(state, side: str, fp: FrequencyPoint) -> complex:
    """Decaying characteristic root on one side of the sheet.

    omega solves omega^2 = [(tau + i v eta)^2 + F^2 eta^2]/c^2 + eta^2 on the
    branch with Re omega <= 0 (strict for gamma > 0); on the boundary cut the
    side rule uses sgn(delta + v eta).
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    t = _table_at(state, fp)
    key = "omega_r" if side == "right" else "omega_l"
    return complex(t[key][0])


def omega_pair(state, fp: FrequencyPoint) -> tuple[complex, complex]:
    """(right, left) decaying roots at fp."""
    t = _table_at(state, fp)
    return complex(t["omega_r"][0]), complex(t["omega_l"][0])


def sample_hemisphere(n: int, weight: float, seed: int = 0,
                      gamma_min: float = 1e-6):
    """Deterministic Sigma sample: n points with gamma >= gamma_min.

    Parametrized by angles drawn uniformly (not area-uniform): gamma = cos t1,
    delta = sin t1 cos t2, w eta = sin t1 sin t2 with t1 capped so that the
    gamma exclusion band holds.  Returns (gamma, delta, eta) float64 arrays.
    """
    if n < 0:
        raise ValueError("sample count must be nonnegative")
    if not 0.0 <= gamma_min < 1.0:
        raise ValueError("gamma_min must lie in [0, 1)")
    if not weight > 0.0:
        raise ValueError("hemisphere weight must be positive")
    rng = np.random.default_rng(seed)
    t1 = rng.uniform(0.0, math.acos(gamma_min), n)
    t2 = rng.uniform(0.0, 2.0 * math.pi, n)
    gamma = np.cos(t1)
    sin1 = np.sin(t1)
    delta = sin1 * np.cos(t2)
    eta = sin1 * np.sin(t2) / weight
    return gamma, delta, eta


def boundary_point(theta: float, weight: float, eta_sign: float = 1.0,
                   gamma: float = 0.0) -> FrequencyPoint:
    """Hemisphere point with tau/eta = gamma + i theta and |tau|^2 + w^2 eta^2 = 1.

    With gamma = 0 this is the boundary point tau = i theta eta; a positive
    gamma lifts the same ray into the interior before renormalizing.
    """
    eta_hat = eta_sign / math.sqrt(theta * theta + weight * weight)
    fp = FrequencyPoint(abs(gamma * eta_hat), theta * eta_hat, eta_hat, weight)
    return normalize_to_hemisphere(fp)
