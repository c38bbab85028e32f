"""Functional supply and demand, capital accounting and growth conditions.

Prices are time costs (work durations). A frame of reference anchors the
integrated work-utility curves; supply prices grow exponentially with the
number of provided functions and demand prices decay with the number of
requested ones. Demand-side function counts are stored as magnitudes and
the orientation is carried by :class:`Side`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, RangeError

__all__ = [
    "Side",
    "Regime",
    "Pressure",
    "FrameReference",
    "ExchangeSpec",
    "GrowthReport",
    "supply_price",
    "demand_price",
    "supply_functions",
    "demand_functions",
    "supply_capital",
    "demand_capital",
    "global_capital",
    "capital_growth",
    "growth_threshold",
    "growth_report",
    "inflation_diagnostic",
    "maturity",
]

NEUTRAL_TOL = 1e-12


class Side(enum.Enum):
    SUPPLY = "supply"
    DEMAND = "demand"


class Regime(enum.Enum):
    VIRTUOUS = "virtuous"
    ERRONEOUS = "erroneous"
    MIXED = "mixed"


class Pressure(enum.Enum):
    INFLATIONARY = "inflationary"
    DEFLATIONARY = "deflationary"
    NEUTRAL = "neutral"


def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise RangeError(f"{what} is not finite ({value!r})")
    return value


def _exp(x: float, what: str) -> float:
    try:
        return _finite(math.exp(x), what)
    except OverflowError as exc:
        raise RangeError(f"{what} overflows: exp({x!r})") from exc


@dataclass(frozen=True)
class FrameReference:
    """Reference point of a supply or demand frame.

    ``m_O`` is stored as a magnitude on both sides.
    """

    rho_O: float
    m_O: float
    c_O: float
    K_O: float = 0.0
    M_O: float = 1.0
    side: Side = Side.SUPPLY

    def __post_init__(self):
        if isinstance(self.side, str):
            object.__setattr__(self, "side", Side(self.side.lower()))
        for name in ("rho_O", "m_O", "c_O", "K_O", "M_O"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.rho_O <= 0:
            raise DomainError(f"rho_O must be > 0, got {self.rho_O}")
        if self.c_O <= 0:
            raise DomainError(f"c_O must be > 0, got {self.c_O}")
        if self.M_O == 0:
            raise DomainError("M_O must be non-zero")
        if self.m_O < 0:
            raise DomainError(
                f"m_O is stored as a magnitude and must be >= 0, got {self.m_O}"
            )

    @classmethod
    def supply(cls, rho_O, m_O, c_O, K_O=0.0, M_O=1.0) -> "FrameReference":
        return cls(rho_O, m_O, c_O, K_O, M_O, Side.SUPPLY)

    @classmethod
    def demand(cls, rho_O, m_O, c_O, K_O=0.0, M_O=1.0) -> "FrameReference":
        return cls(rho_O, m_O, c_O, K_O, M_O, Side.DEMAND)

    @property
    def saturation(self) -> float:
        """m_O / c_O, the exponent contribution of this frame."""
        return self.m_O / self.c_O


@dataclass(frozen=True)
class ExchangeSpec:
    """An agreed exchange between a supply frame and a demand frame.

    ``c`` and ``M`` are the complexity and maturity of the exchanged
    product; the single ratio ``c / M`` is used for both sides.
    """

    supply: FrameReference
    demand: FrameReference
    rho_star: float
    c: float
    M: float = 1.0

    def __post_init__(self):
        if self.supply.side is not Side.SUPPLY:
            raise DomainError("supply frame must have side=SUPPLY")
        if self.demand.side is not Side.DEMAND:
            raise DomainError("demand frame must have side=DEMAND")
        if not (self.rho_star > 0 and math.isfinite(self.rho_star)):
            raise DomainError(f"rho_star must be > 0, got {self.rho_star}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise DomainError(f"c must be > 0, got {self.c}")
        if self.M == 0 or not math.isfinite(self.M):
            raise DomainError("M must be finite and non-zero")

    @property
    def r(self) -> float:
        """Ratio of the demand and supply reference time costs."""
        return self.demand.rho_O / self.supply.rho_O


@dataclass(frozen=True)
class GrowthReport:
    delta_K: float
    r: float
    threshold: float
    grows: bool
    regime: Regime


def supply_price(ref: FrameReference, m_s: float, c_s: float | None = None) -> float:
    """Supply time cost after providing ``m_s`` functions.

    ``c_s`` defaults to the frame complexity.
    """
    c_s = ref.c_O if c_s is None else c_s
    if c_s <= 0:
        raise DomainError(f"supply complexity must be > 0, got {c_s}")
    return ref.rho_O * _exp((m_s - ref.m_O) / c_s, "supply price")


def demand_price(ref: FrameReference, m_d: float, c_d: float | None = None) -> float:
    """Demand time cost for ``m_d`` requested functions (magnitude)."""
    c_d = ref.c_O if c_d is None else c_d
    if c_d <= 0:
        raise DomainError(f"demand complexity must be > 0, got {c_d}")
    return ref.rho_O * _exp((ref.m_O - m_d) / c_d, "demand price")


def supply_functions(ref: FrameReference, rho_s: float, c_s: float | None = None) -> float:
    """Inverse of :func:`supply_price`."""
    if rho_s <= 0:
        raise DomainError(f"rho_s must be > 0, got {rho_s}")
    c_s = ref.c_O if c_s is None else c_s
    return ref.m_O + c_s * math.log(rho_s / ref.rho_O)


def demand_functions(ref: FrameReference, rho_d: float, c_d: float | None = None) -> float:
    """Inverse of :func:`demand_price`."""
    if rho_d <= 0:
        raise DomainError(f"rho_d must be > 0, got {rho_d}")
    c_d = ref.c_O if c_d is None else c_d
    return ref.m_O - c_d * math.log(rho_d / ref.rho_O)


def supply_capital(ref: FrameReference, rho_s: float, c_s: float | None = None) -> float:
    """Capital held by the supplier at time cost ``rho_s``."""
    if rho_s <= 0:
        raise DomainError(f"rho_s must be > 0, got {rho_s}")
    c_s = ref.c_O if c_s is None else c_s
    return c_s * rho_s * (math.log(rho_s / ref.rho_O) + ref.m_O / ref.c_O) + ref.K_O


def demand_capital(ref: FrameReference, rho_d: float, c_d: float | None = None) -> float:
    """Capital held by the buyer at time cost ``rho_d``."""
    if rho_d <= 0:
        raise DomainError(f"rho_d must be > 0, got {rho_d}")
    c_d = ref.c_O if c_d is None else c_d
    return c_d * rho_d * (ref.m_O / ref.c_O - math.log(rho_d / ref.rho_O)) + ref.K_O


def global_capital(spec: ExchangeSpec) -> float:
    """Joint capital of buyer and seller at the agreed price.

    Uses the product complexity ``spec.c`` on both sides.
    """
    s, d, rho, c = spec.supply, spec.demand, spec.rho_star, spec.c
    log_term = c * math.log(rho / s.rho_O) + c * math.log(d.rho_O / rho)
    return rho * (log_term + c * s.saturation + c * d.saturation) + s.K_O + d.K_O


def capital_growth(spec: ExchangeSpec) -> float:
    """Capital increase ignoring maturities (all taken as 1)."""
    s, d = spec.supply, spec.demand
    return spec.c * spec.rho_star * (math.log(spec.r) + s.saturation + d.saturation)


def growth_threshold(spec: ExchangeSpec) -> float:
    """Minimum ratio r for capital to grow, maturity-adjusted."""
    s, d = spec.supply, spec.demand
    return _exp(-s.M_O * s.saturation - d.M_O * d.saturation, "growth threshold")


def growth_report(spec: ExchangeSpec) -> GrowthReport:
    s, d = spec.supply, spec.demand
    bracket = math.log(spec.r) + s.M_O * s.saturation + d.M_O * d.saturation
    delta_K = spec.c / spec.M * spec.rho_star * bracket

    maturities = (spec.M, s.M_O, d.M_O)
    if all(m > 0 for m in maturities):
        regime = Regime.VIRTUOUS
    elif all(m < 0 for m in maturities):
        regime = Regime.ERRONEOUS
    else:
        regime = Regime.MIXED

    return GrowthReport(
        delta_K=delta_K,
        r=spec.r,
        threshold=growth_threshold(spec),
        grows=delta_K > 0,
        regime=regime,
    )


def inflation_diagnostic(before: ExchangeSpec, after: ExchangeSpec) -> Pressure:
    """Direction of price pressure implied by a change of growth threshold.

    A rising threshold forces the demand time cost up relative to supply.
    """
    delta = growth_threshold(after) - growth_threshold(before)
    if abs(delta) < NEUTRAL_TOL:
        return Pressure.NEUTRAL
    return Pressure.INFLATIONARY if delta > 0 else Pressure.DEFLATIONARY


def maturity(realized, marketed) -> float:
    """Ratio of realized outcome sum to marketed outcome sum.

    The marketed sum must be strictly positive.
    """
    denom = math.fsum(marketed)
    if denom <= 0:
        raise DomainError(f"marketed outcome sum must be > 0, got {denom}")
    return math.fsum(realized) / denom
