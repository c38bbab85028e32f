"""Probability weighting, its fixed points and the iterated-map regimes.

``w_g(p) = p^g / (p^g + (1 - p)^g)^(1/g)``. For ``g < 1`` the interior fixed
point attracts every trajectory; for ``g > 1`` it repels, trapping starts
below it at zero and sending starts above it to one.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import PHI, DynamicsSolution
from .errors import DomainError

__all__ = [
    "GAMMA_FLOOR",
    "GAMMA_NO_FIXED_POINT",
    "PRESET_GAINS",
    "PRESET_LOSSES",
    "Label",
    "Verdict",
    "Feeling",
    "WeightingRegime",
    "IterationResult",
    "CycleAccount",
    "weight",
    "fixed_point",
    "iterate",
    "bias_constraint",
    "bias_ratio",
    "business_cycle",
    "gamma_from_kappa",
    "kappa_from_gamma",
    "ratio_from_kappa",
    "kappa_from_ratio",
]

GAMMA_FLOOR = 0.3
PRESET_GAINS = 0.61
PRESET_LOSSES = 0.69
FP_MAX_ITER = 200
GAMMA_NO_FIXED_POINT = 2.0  # from here on w(p) < p on all of (0, 1)
_LO, _HI = 1e-9, 1.0 - 1e-9


class Label(enum.Enum):
    WEIRD = "WEIRD"
    POOR = "Poor"
    CUSTOM = "Custom"


class Verdict(enum.Enum):
    CONVERGED = "converged to fixed point"
    TRAPPED_AT_ZERO = "trapped at zero"
    ESCAPED_TO_ONE = "escaped to one"
    OSCILLATING = "oscillating"


class Feeling(enum.Enum):
    OVERINVESTMENT = "overinvestment"
    PROFIT = "profit"
    NEUTRAL = "neutral"


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma < GAMMA_FLOOR:
        raise DomainError(f"gamma must be >= {GAMMA_FLOOR}, got {gamma}")
    return gamma


def weight(gamma: float, p):
    """Weighted probability; accepts scalars or arrays. Endpoints are exact."""
    gamma = _check_gamma(gamma)
    arr = np.asarray(p, dtype=float)
    if np.any(~(arr >= 0.0) | (arr > 1.0)):
        raise DomainError("p must lie in [0, 1]")
    with np.errstate(divide="ignore", invalid="ignore"):
        a = arr**gamma
        b = (1.0 - arr) ** gamma
        out = a / (a + b) ** (1.0 / gamma)
    out = np.where(arr == 0.0, 0.0, np.where(arr == 1.0, 1.0, out))
    if gamma == 1.0:
        out = arr.copy()
    return float(out) if out.ndim == 0 else out


def fixed_point(gamma: float, tol: float = 0.0) -> float:
    """Interior solution of ``w(p) = p`` by bisection.

    The bracket is halved until it is no wider than ``tol`` (default: until
    the floats run out), capped at 200 halvings. The cap is far above the
    roughly 40 halvings needed for 1e-12.
    """
    gamma = _check_gamma(gamma)
    if gamma == 1.0:
        raise DomainError("gamma = 1 fixes every p; no isolated fixed point")
    if gamma >= GAMMA_NO_FIXED_POINT:
        raise DomainError(f"gamma = {gamma} >= 2 has no interior fixed point (w(p) < p throughout)")
    f = lambda p: weight(gamma, p) - p  # noqa: E731
    lo, hi = _LO, _HI
    f_lo = f(lo)
    if f_lo * f(hi) > 0:
        raise DomainError(f"no sign change of w(p) - p for gamma = {gamma}")
    for _ in range(FP_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid in (lo, hi):
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class WeightingRegime:
    gamma: float
    kappa: float
    label: Label
    fixed_point: float | None = None

    def __post_init__(self):
        _check_gamma(self.gamma)
        if not self.kappa > 0:
            raise DomainError("kappa must be > 0")
        expected = {Label.WEIRD: 1.0 / PHI, Label.POOR: PHI}.get(self.label)
        if expected is not None and not math.isclose(self.gamma, expected / self.kappa, rel_tol=1e-12):
            raise DomainError(f"{self.label.value} regime requires gamma = {expected}/kappa")
        if self.fixed_point is None and 1.0 != self.gamma < GAMMA_NO_FIXED_POINT:
            object.__setattr__(self, "fixed_point", fixed_point(self.gamma))

    @classmethod
    def weird(cls, kappa: float = 1.0) -> "WeightingRegime":
        return cls(1.0 / (PHI * kappa), kappa, Label.WEIRD)

    @classmethod
    def poor(cls, kappa: float = 1.0) -> "WeightingRegime":
        return cls(PHI / kappa, kappa, Label.POOR)

    @classmethod
    def custom(cls, gamma: float, kappa: float = 1.0) -> "WeightingRegime":
        return cls(gamma, kappa, Label.CUSTOM)

    @classmethod
    def gains(cls) -> "WeightingRegime":
        """Empirical preset for gains."""
        return cls.custom(PRESET_GAINS)

    @classmethod
    def losses(cls) -> "WeightingRegime":
        """Empirical preset for losses."""
        return cls.custom(PRESET_LOSSES)


@dataclass(frozen=True)
class IterationResult:
    trajectory: np.ndarray
    verdict: Verdict
    reached: bool  # whether the verdict's target was met within tol
    anomaly: bool = False

    def __iter__(self):
        return iter((self.trajectory, self.verdict))


def iterate(gamma: float, p0: float, max_iter: int = 10_000, tol: float = 1e-9) -> IterationResult:
    """Run ``p_{n+1} = w(p_n)`` until the verdict's target is within ``tol``."""
    gamma = _check_gamma(gamma)
    if not 0.0 < p0 < 1.0:
        raise DomainError("p0 must lie in (0, 1)")
    if gamma == 1.0:
        return IterationResult(np.array([p0]), Verdict.CONVERGED, True)
    # past gamma = 2 the repeller sits at 1, so every start is trapped
    p_star = fixed_point(gamma) if gamma < GAMMA_NO_FIXED_POINT else 1.0
    traj = [float(p0)]
    p = float(p0)
    if gamma < 1.0 or abs(p - p_star) <= tol:
        target = p_star
        verdict = Verdict.CONVERGED
    elif p < p_star:
        target, verdict = 0.0, Verdict.TRAPPED_AT_ZERO
    else:
        target, verdict = 1.0, Verdict.ESCAPED_TO_ONE

    for _ in range(max_iter):
        if abs(p - target) <= tol:
            break
        p = weight(gamma, p)
        traj.append(p)
    traj = np.array(traj)
    steps = np.diff(traj)
    # a monotone map never changes direction; report it if rounding ever does
    anomaly = bool(np.any(steps[1:] * steps[:-1] < 0)) if steps.size > 1 else False
    reached = abs(traj[-1] - target) <= tol
    if anomaly:
        verdict = Verdict.OSCILLATING
    return IterationResult(traj, verdict, reached, anomaly)


def bias_constraint(regime: WeightingRegime) -> float:
    """Maturity-to-complexity ratio that cancels the weighting bias."""
    if regime.label is Label.WEIRD:
        return PHI
    if regime.label is Label.POOR:
        return 1.0 / PHI
    raise DomainError("a custom regime has no bias-cancelling constraint")


def bias_ratio(solution: DynamicsSolution, m: float) -> float:
    """Logarithmic slope ``|rho'| / rho`` at ``m``; invariant under ``rho -> k rho``."""
    rho = solution(m)
    if rho == 0.0:
        raise DomainError(f"rho vanishes at m = {m}; the ratio has a pole")
    return abs(solution.derivative(m)) / abs(rho)


@dataclass(frozen=True)
class CycleAccount:
    p0: float
    p_star: float
    outcome: float
    subjective_delta: float
    feeling: Feeling


def business_cycle(p0: float, gamma: float, outcome: float) -> CycleAccount:
    """Subjective value gap ``outcome * (p* - p0)`` of one need-to-satisfaction loop."""
    if not 0.0 < p0 < 1.0:
        raise DomainError("p0 must lie in (0, 1)")
    p_star = fixed_point(gamma)
    gap = p_star - p0
    feeling = Feeling.PROFIT if gap > 0 else Feeling.OVERINVESTMENT if gap < 0 else Feeling.NEUTRAL
    return CycleAccount(p0, p_star, float(outcome), float(outcome) * gap, feeling)


# Conversions between the weighting exponent and market parameters. The
# labelled regimes tie gamma to kappa through a golden-ratio factor, and the
# bias-cancelling constraint ties kappa to M/c as M/c = 1/kappa.

def gamma_from_kappa(kappa: float, label: Label) -> float:
    factor = {Label.WEIRD: 1.0 / PHI, Label.POOR: PHI}.get(label)
    if factor is None:
        raise DomainError("custom regimes have no gamma-kappa relation")
    if not kappa > 0:
        raise DomainError("kappa must be > 0")
    return factor / kappa


def kappa_from_gamma(gamma: float, label: Label) -> float:
    return gamma_from_kappa(1.0, label) / _check_gamma(gamma)


def ratio_from_kappa(kappa: float) -> float:
    if not kappa > 0:
        raise DomainError("kappa must be > 0")
    return 1.0 / kappa


def kappa_from_ratio(ratio: float) -> float:
    if not ratio > 0:
        raise DomainError("M/c must be > 0")
    return 1.0 / ratio
