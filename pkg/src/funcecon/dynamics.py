"""Market-dynamics equations for time cost as a function of function count.

Supply (``m = m_s >= 0``)::

    kappa rho'' - rho' + (M/c) rho = 0,   kappa g^2 - g + M/c = 0

Demand, written on ``m = -m_d >= 0`` with exponents ``-g``::

    kappa rho'' + rho' - (M/c) rho = 0,   kappa g^2 - g - M/c = 0

Roots are labelled ``g_plus, g_minus = (sign(kappa) +/- sqrt(D)) / (2|kappa|)``
which matches both the positive- and negative-kappa conventions. A complex
conjugate pair with real amplitudes ``(a1, a2)`` renders as
``(a1 + a2) e^{a m} cos(b m)``, the real part of the complex solution.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, FuncEconError
from .exchange import Side

__all__ = [
    "PHI",
    "RootRegime",
    "DynamicsParams",
    "CharacteristicRoots",
    "Mode",
    "DynamicsSolution",
    "FitKind",
    "FitResult",
    "ConservationViolation",
    "speculative_payoff",
    "speculative_interpretation",
    "equilibrium_utility",
    "characteristic_roots",
    "solve",
    "solve_oscillatory",
    "canonical",
    "canonical_pair",
    "canonical_closed_form",
    "perfect_fit_check",
    "check_outcome_conservation",
]

PHI = (1.0 + math.sqrt(5.0)) / 2.0
REPEATED_TOL = 1e-14
FIT_TOL = 1e-9
DEFAULT_GRID = 512


class RootRegime(enum.Enum):
    REAL_DISTINCT = "real distinct"
    REAL_REPEATED = "real repeated"
    COMPLEX_CONJUGATE = "complex conjugate"


class ConservationViolation(FuncEconError, ValueError):
    """The marketed outcome sum varies along m."""


@dataclass(frozen=True)
class DynamicsParams:
    """Frame of one side of the market.

    ``P_O`` and ``m_O`` are only used by the speculative (zero value) regime.
    """

    side: Side
    kappa: float
    c: float
    M: float
    P_O: float = 1.0
    m_O: float = 0.0

    def __post_init__(self):
        if isinstance(self.side, str):
            object.__setattr__(self, "side", Side(self.side.lower()))
        if self.kappa == 0 or not math.isfinite(self.kappa):
            raise DomainError("kappa must be finite and non-zero")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise DomainError("c must be finite and > 0")
        if self.M == 0 or not math.isfinite(self.M):
            raise DomainError("M must be finite and non-zero")

    @classmethod
    def from_outcomes(cls, side, kappa, c, realized, marketed, **kw) -> "DynamicsParams":
        """Build with the maturity computed from outcome lists."""
        from .exchange import maturity

        return cls(side, kappa, c, maturity(realized, marketed), **kw)

    @property
    def ratio(self) -> float:
        """M / c."""
        return self.M / self.c

    @property
    def constant_term(self) -> float:
        return self.ratio if self.side is Side.SUPPLY else -self.ratio


@dataclass(frozen=True)
class CharacteristicRoots:
    regime: RootRegime
    roots: tuple  # (g_plus, g_minus) as complex numbers
    discriminant: float

    @property
    def real(self) -> bool:
        return self.regime is not RootRegime.COMPLEX_CONJUGATE


def speculative_payoff(params: DynamicsParams, m: float) -> float:
    """Payoff with no value creation: ``P_O exp((m - m_O) / kappa)``."""
    return params.P_O * math.exp((m - params.m_O) / params.kappa)


_SPECULATIVE_TAGS = {
    # (side, kappa > 0, P_O > 0)
    (Side.SUPPLY, False, True): "impoverishment: payoff falls as the strategy grows",
    (Side.SUPPLY, False, False): "negative externality: payoff rises but stays negative",
    (Side.SUPPLY, True, True): "successful speculation on positively valued work",
    (Side.SUPPLY, True, False): "escalating negative externality",
    (Side.DEMAND, False, True): "paid removal of negative work",
    (Side.DEMAND, False, False): "investment with a negative payoff",
    (Side.DEMAND, True, True): "clean-up reward shrinking with effort",
    (Side.DEMAND, True, False): "negative payoff rising with the scale of demand",
}


def speculative_interpretation(params: DynamicsParams) -> tuple:
    """``(label, increasing)`` for the zero-value regime of ``params``.

    ``increasing`` tells whether the payoff grows with ``m``.
    """
    if params.P_O == 0:
        return "no payoff", False
    label = _SPECULATIVE_TAGS[(params.side, params.kappa > 0, params.P_O > 0)]
    return label, (params.P_O / params.kappa) > 0


def equilibrium_utility(params: DynamicsParams, rho: float | None = None) -> float:
    """Maturity-adjusted work utility ``c / M`` at payoff/value equilibrium."""
    if rho is not None and rho <= 0:
        raise DomainError("rho must be > 0")
    return params.c / params.M


def characteristic_roots(params: DynamicsParams) -> CharacteristicRoots:
    """Roots of ``kappa g^2 - g +/- M/c``; numerically stable for small ``kappa M/c``."""
    k = params.kappa
    q = params.constant_term
    disc = 1.0 - 4.0 * k * q
    sgn = math.copysign(1.0, k)
    two_abs_k = 2.0 * abs(k)

    if abs(disc) <= REPEATED_TOL:
        g = complex(1.0 / (2.0 * k))
        return CharacteristicRoots(RootRegime.REAL_REPEATED, (g, g), disc)

    if disc > 0:
        s = math.sqrt(disc)
        # the root where sign(kappa) and sqrt(D) add is free of cancellation
        big = (sgn + sgn * s) / two_abs_k
        other = (q / k) / big if big != 0 else (sgn - sgn * s) / two_abs_k
        plus, minus = (big, other) if sgn > 0 else (other, big)
        return CharacteristicRoots(RootRegime.REAL_DISTINCT, (complex(plus), complex(minus)), disc)

    s = math.sqrt(-disc)
    plus = complex(sgn, s) / two_abs_k
    minus = complex(sgn, -s) / two_abs_k
    return CharacteristicRoots(RootRegime.COMPLEX_CONJUGATE, (plus, minus), disc)


@dataclass(frozen=True)
class Mode:
    """Term ``amplitude * m**power * exp(exponent * m)``."""

    amplitude: complex
    exponent: complex
    power: int = 0


@dataclass(frozen=True)
class DynamicsSolution:
    """Closed-form solution; evaluates to the real part of its modes."""

    modes: tuple
    params: DynamicsParams | None = None
    label: str = ""
    outside_standard_cases: bool = False
    notes: tuple = field(default=())

    def _eval(self, m, order: int) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        total = np.zeros(m.shape, dtype=complex)
        for mode in self.modes:
            a, g = complex(mode.amplitude), complex(mode.exponent)
            e = np.exp(g * m)
            if mode.power == 0:
                total += a * g**order * e
            elif mode.power == 1:
                # d^n/dm^n [m e^{gm}] = (g^n m + n g^{n-1}) e^{gm}
                lower = order * g ** (order - 1) if order else 0.0
                total += a * (g**order * m + lower) * e
            else:
                raise NotImplementedError("only power 0 and 1 modes are used")
        return total.real

    def __call__(self, m):
        out = self._eval(m, 0)
        return float(out) if out.ndim == 0 else out

    def derivative(self, m, order: int = 1):
        out = self._eval(m, order)
        return float(out) if out.ndim == 0 else out

    def residual(self, m, params: DynamicsParams | None = None):
        """ODE residual, supply or demand form according to the side."""
        p = params or self.params
        if p is None:
            raise DomainError("residual needs dynamics parameters")
        rho, d1, d2 = self._eval(m, 0), self._eval(m, 1), self._eval(m, 2)
        if p.side is Side.SUPPLY:
            out = p.kappa * d2 - d1 + p.ratio * rho
        else:
            out = p.kappa * d2 + d1 - p.ratio * rho
        return float(out) if np.ndim(out) == 0 else out


def solve(params: DynamicsParams, amplitudes: Sequence[float], secular: float = 0.0) -> DynamicsSolution:
    """General solution ``a_plus e^{g_plus m} + a_minus e^{g_minus m}``.

    Demand exponents are negated (``m = -m_d``). With a repeated root the
    solution is ``(a_plus + a_minus + secular * m) e^{g m}``, which keeps
    ``rho(0) = a_plus + a_minus`` in every regime.
    """
    a_plus, a_minus = (float(a) for a in amplitudes)
    roots = characteristic_roots(params)
    sign = 1.0 if params.side is Side.SUPPLY else -1.0
    g_plus, g_minus = (sign * g for g in roots.roots)

    if roots.regime is RootRegime.REAL_REPEATED:
        modes = (Mode(a_plus + a_minus, g_plus), Mode(secular, g_plus, power=1))
        return DynamicsSolution(
            modes, params, label="repeated root", outside_standard_cases=True,
            notes=("repeated characteristic root: (A + B m) e^{g m} form",),
        )
    modes = (Mode(a_plus, g_plus), Mode(a_minus, g_minus))
    return DynamicsSolution(modes, params, label=roots.regime.value)


def solve_oscillatory(params: DynamicsParams, amplitude: float, phase: float = 0.0) -> DynamicsSolution:
    """``2 A e^{a m} cos(b m + phase)`` for a complex-conjugate regime."""
    roots = characteristic_roots(params)
    if roots.regime is not RootRegime.COMPLEX_CONJUGATE:
        raise DomainError("oscillatory form needs complex-conjugate roots")
    sign = 1.0 if params.side is Side.SUPPLY else -1.0
    g = sign * roots.roots[0]
    a = amplitude * cmath.exp(1j * phase)
    return DynamicsSolution(
        (Mode(a, g), Mode(a.conjugate(), g.conjugate())), params, label="oscillatory"
    )


# kind -> (supply kappa sign, supply M sign, demand kappa sign, demand M sign)
_CANONICAL = {
    "a": (-1, +1, +1, +1),
    "b": (+1, -1, -1, -1),
    "c": (+1, +1, -1, +1),
    "d": (-1, -1, +1, -1),
}

_MATURITY_NOTE = {
    "a": "M_s, M_d > 0",
    "b": "M_s, M_d < 0",
    "c": "M_s, M_d > 0",
    "d": "M_s, M_d < 0",
}


def _canonical_params(kind: str, kappa: float) -> tuple:
    if kind not in _CANONICAL:
        raise DomainError(f"canonical kind must be one of a, b, c, d; got {kind!r}")
    if kappa <= 0:
        raise DomainError("canonical kappa must be > 0")
    ks, ms, kd, md = _CANONICAL[kind]
    # |kappa| M / c = +/-1 with c = 1
    supply = DynamicsParams(Side.SUPPLY, ks * kappa, 1.0, ms / kappa)
    demand = DynamicsParams(Side.DEMAND, kd * kappa, 1.0, md / kappa)
    return supply, demand


def canonical_pair(kind: str, kappa: float = 1.0) -> tuple:
    """Supply and demand solutions with unit amplitudes for a canonical kind.

    The two curves coincide (perfect fit).
    """
    supply, demand = _canonical_params(kind, kappa)
    s = solve(supply, (1.0, 1.0))
    d = solve(demand, (1.0, 1.0))
    note = (f"maturity condition: {_MATURITY_NOTE[kind]}",)
    return (
        DynamicsSolution(s.modes, supply, label=f"canonical {kind} (supply)", notes=note),
        DynamicsSolution(d.modes, demand, label=f"canonical {kind} (demand)", notes=note),
    )


def canonical(kind: str, kappa: float = 1.0) -> DynamicsSolution:
    """Canonical curve ``kind`` in {a, b, c, d}; all equal 2 at ``m = 0``."""
    return canonical_pair(kind, kappa)[0]


def canonical_closed_form(kind: str, kappa: float, m):
    """Direct closed forms of the four canonical curves."""
    m = np.asarray(m, dtype=float) / kappa
    if kind == "a":
        return np.exp(-PHI * m) + np.exp(m / PHI)
    if kind == "b":
        return np.exp(PHI * m) + np.exp(-m / PHI)
    if kind == "c":
        return 2.0 * np.exp(m / 2.0) * np.cos(math.sqrt(3.0) / 2.0 * m)
    if kind == "d":
        return 2.0 * np.exp(-m / 2.0) * np.cos(math.sqrt(3.0) / 2.0 * m)
    raise DomainError(f"canonical kind must be one of a, b, c, d; got {kind!r}")


class FitKind(enum.Enum):
    PERFECT_FIT = "perfect fit"
    ZERO_PRICE_CROSSINGS = "zero-price crossings"
    NO_FIT = "no fit"


@dataclass(frozen=True)
class FitResult:
    kind: FitKind
    crossings: tuple = ()
    max_deviation: float = 0.0


def _zeros(f, grid: np.ndarray) -> list:
    values = f(grid)
    out = []
    for k in range(grid.size - 1):
        a, b = values[k], values[k + 1]
        if a == 0.0:
            out.append(float(grid[k]))
        elif a * b < 0:
            out.append(brentq(f, grid[k], grid[k + 1], xtol=1e-14, rtol=1e-15))
    if values[-1] == 0.0:
        out.append(float(grid[-1]))
    return out


def perfect_fit_check(s: DynamicsSolution, d: DynamicsSolution, m_grid=None) -> FitResult:
    """Compare a supply curve with a demand curve on a grid.

    The default grid has 512 points on ``[0, 5 |kappa|]``.
    """
    if m_grid is None:
        kappa = abs(s.params.kappa) if s.params is not None else 1.0
        m_grid = np.linspace(0.0, 5.0 * kappa, DEFAULT_GRID)
    grid = np.asarray(m_grid, dtype=float)
    rs, rd = s(grid), d(grid)
    scale = max(1.0, float(np.max(np.abs(rs))), float(np.max(np.abs(rd))))
    deviation = float(np.max(np.abs(rs - rd)))
    if deviation <= FIT_TOL * scale:
        return FitResult(FitKind.PERFECT_FIT, (), deviation)
    crossings = sorted(set(_zeros(s, grid)) | set(_zeros(d, grid)))
    if crossings:
        return FitResult(FitKind.ZERO_PRICE_CROSSINGS, tuple(crossings), deviation)
    return FitResult(FitKind.NO_FIT, (), deviation)


def check_outcome_conservation(outcome_sums: Sequence[float], rtol: float = 1e-9) -> float:
    """Require the marketed outcome sum to stay constant along m.

    The second-order equation only holds under that budget constraint.
    Returns the common value.
    """
    sums = np.asarray(outcome_sums, dtype=float)
    if sums.size == 0:
        raise DomainError("no outcome sums given")
    ref = sums[0]
    if np.any(np.abs(sums - ref) > rtol * max(1.0, abs(ref))):
        raise ConservationViolation(
            f"marketed outcome sum varies along m (range {sums.min()} .. {sums.max()})"
        )
    return float(ref)
