"""Payoff, capacity-weighted prospect values and project value.

Events are index sets over a ground set ``{0, ..., n-1}``. A
:class:`Capacity` stores one weight per subset, indexed by bitmask, which
keeps monotonicity checks and lookups cheap for the small ground sets used
here (at most 16 states).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "OutcomeKind",
    "OutcomeSet",
    "Capacity",
    "OrgStructure",
    "ValueParams",
    "Additivity",
    "payoff",
    "prospect_value",
    "org_capacity",
    "additivity_check",
    "profitability_complexity",
    "outcome_value",
    "project_value",
]

MAX_STATES = 16
ADDITIVITY_TOL = 1e-12


class OutcomeKind(enum.Enum):
    MARKETING = "marketing"
    REALIZED = "realized"


class Additivity(enum.Enum):
    SUB_ADDITIVE = "sub-additive"
    ADDITIVE = "additive"
    SUPER_ADDITIVE = "super-additive"
    MIXED = "mixed"


@dataclass(frozen=True)
class OutcomeSet:
    outcomes: tuple
    kind: OutcomeKind = OutcomeKind.MARKETING

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(float(e) for e in self.outcomes))
        if not self.outcomes:
            raise DomainError("an outcome set must not be empty")

    def __iter__(self):
        return iter(self.outcomes)

    def __len__(self):
        return len(self.outcomes)


def _as_values(outcomes) -> np.ndarray:
    return np.asarray(list(outcomes), dtype=float)


def _mask(event: Iterable[int], n: int) -> int:
    mask = 0
    for s in event:
        s = int(s)
        if not 0 <= s < n:
            raise DomainError(f"state {s} outside ground set of size {n}")
        mask |= 1 << s
    return mask


class Capacity:
    """A monotone set function with W(empty) = 0 and W(S) = 1.

    Build one with :meth:`from_table`, :meth:`from_function`,
    :meth:`additive` or :meth:`power`. The table is validated on
    construction and read-only afterwards.
    """

    def __init__(self, n: int, table: np.ndarray, tol: float = 1e-12):
        n = int(n)
        if not 1 <= n <= MAX_STATES:
            raise DomainError(f"ground set size must be in [1, {MAX_STATES}], got {n}")
        table = np.array(table, dtype=float)
        if table.shape != (1 << n,):
            raise DomainError(f"capacity table must have {1 << n} entries")
        if not np.all(np.isfinite(table)):
            raise DomainError("capacity weights must be finite")
        if table[0] != 0.0:
            raise DomainError("capacity of the empty event must be 0")
        if abs(table[-1] - 1.0) > tol:
            raise DomainError("capacity of the full ground set must be 1")
        if np.any(table < -tol) or np.any(table > 1 + tol):
            raise DomainError("capacity weights must lie in [0, 1]")
        masks = np.arange(1 << n)
        for s in range(n):
            # W(A) >= W(A minus {s}) for every A containing s
            with_s = masks[(masks >> s) & 1 == 1]
            bad = with_s[table[with_s] < table[with_s ^ (1 << s)] - tol]
            if bad.size:
                raise DomainError(
                    f"capacity is not monotone: removing state {s} from "
                    f"{_members(int(bad[0]))} increases the weight"
                )
        table.setflags(write=False)
        self.n = n
        self._table = table

    @classmethod
    def from_function(cls, n: int, fn: Callable[[frozenset], float]) -> "Capacity":
        table = [fn(frozenset(_members(mask))) for mask in range(1 << n)]
        return cls(n, table)

    @classmethod
    def from_table(cls, n: int, weights: dict) -> "Capacity":
        """Build from ``{event: weight}``; every subset must be listed
        except the empty set and the full set, which default to 0 and 1."""
        table = np.full(1 << n, np.nan)
        table[0] = 0.0
        table[(1 << n) - 1] = 1.0
        for event, w in weights.items():
            table[_mask(event, n)] = float(w)
        missing = np.flatnonzero(np.isnan(table))
        if missing.size:
            raise DomainError(
                f"capacity table is incomplete; missing {_members(int(missing[0]))}"
            )
        return cls(n, table)

    @classmethod
    def additive(cls, probabilities: Sequence[float]) -> "Capacity":
        p = np.asarray(probabilities, dtype=float)
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise DomainError("probabilities must be non-negative and sum to 1")
        n = p.size
        masks = np.arange(1 << n)
        bits = (masks[:, None] >> np.arange(n)) & 1
        return cls(n, bits @ p)

    @classmethod
    def power(cls, n: int, exponent: float) -> "Capacity":
        """W(A) = (|A| / |S|) ** exponent."""
        if exponent <= 0:
            raise DomainError("exponent must be > 0")
        sizes = np.array([bin(m).count("1") for m in range(1 << n)], dtype=float)
        return cls(n, (sizes / n) ** exponent)

    def weight(self, event: Iterable[int]) -> float:
        return float(self._table[_mask(event, self.n)])

    def __call__(self, event: Iterable[int]) -> float:
        return self.weight(event)

    def weight_mask(self, mask: int) -> float:
        return float(self._table[mask])

    @property
    def table(self) -> np.ndarray:
        return self._table

    def __repr__(self):
        return f"Capacity(n={self.n})"


def _members(mask: int) -> list:
    return [s for s in range(mask.bit_length()) if mask >> s & 1]


def _check_partition(events: Sequence[Iterable[int]], n: int, what: str) -> list:
    masks = [_mask(e, n) for e in events]
    seen = 0
    for m in masks:
        if m & seen:
            raise DomainError(f"{what} are not pairwise disjoint")
        seen |= m
    if seen != (1 << n) - 1:
        raise DomainError(f"{what} do not cover the ground set")
    return masks


@dataclass(frozen=True)
class OrgStructure:
    """Departments and per-function event partitions over the project states.

    ``departments`` partitions the ground set; ``function_events[i]`` is the
    partition of the ground set attached to function ``i``.
    """

    n_states: int
    departments: tuple
    function_events: tuple
    _dept_masks: tuple = field(init=False, repr=False, compare=False)
    _event_masks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        deps = tuple(frozenset(d) for d in self.departments)
        funcs = tuple(tuple(frozenset(a) for a in events) for events in self.function_events)
        if not funcs:
            raise DomainError("at least one function is required")
        object.__setattr__(self, "departments", deps)
        object.__setattr__(self, "function_events", funcs)
        object.__setattr__(
            self, "_dept_masks", tuple(_check_partition(deps, self.n_states, "departments"))
        )
        object.__setattr__(
            self,
            "_event_masks",
            tuple(
                tuple(_check_partition(ev, self.n_states, f"events of function {i}"))
                for i, ev in enumerate(funcs)
            ),
        )

    @property
    def m_F(self) -> int:
        return len(self.function_events)

    def cells(self):
        """Yield ``(i, alpha, j, mask)`` for every function-event-department cell."""
        for i, events in enumerate(self._event_masks):
            for alpha, dept in enumerate(self._dept_masks):
                for j, ev in enumerate(events):
                    yield i, alpha, j, ev & dept


@dataclass(frozen=True)
class ValueParams:
    rho: float
    c_gain: float
    c_loss: float | None = None

    def __post_init__(self):
        if self.c_loss is None:
            object.__setattr__(self, "c_loss", self.c_gain)
        if self.rho <= 0:
            raise DomainError("rho must be > 0")
        if self.c_gain <= 0 or self.c_loss <= 0:
            raise DomainError("complexities must be > 0")
        if self.c_loss > self.c_gain:
            raise DomainError("c_loss must not exceed c_gain (losses weigh more)")


def payoff(outcomes, capability: float) -> float:
    """Outcome sum divided by capability."""
    if capability <= 0:
        raise DomainError(f"capability must be > 0, got {capability}")
    return math.fsum(_as_values(outcomes)) / capability


def prospect_value(prospect, capacity: Capacity, value_fn: Callable[[float], float]) -> float:
    """Capacity-weighted value of a prospect given as ``[(outcome, event), ...]``.

    The events must partition the ground set. Each outcome is weighted by
    the capacity of its own event.
    """
    prospect = list(prospect)
    if not prospect:
        raise DomainError("a prospect needs at least one (outcome, event) pair")
    masks = _check_partition([ev for _, ev in prospect], capacity.n, "prospect events")
    return math.fsum(
        capacity.weight_mask(mask) * value_fn(eps) for (eps, _), mask in zip(prospect, masks)
    )


def org_capacity(org: OrgStructure, capacity: Capacity) -> float:
    """Cumulative capacity over every function-event-department cell."""
    if capacity.n != org.n_states:
        raise DomainError("capacity and organisation use different ground sets")
    return math.fsum(capacity.weight_mask(mask) for *_, mask in org.cells())


def additivity_check(org: OrgStructure, capacity: Capacity, tol: float = ADDITIVITY_TOL) -> Additivity:
    """Classify the capacity on the organisation's disjoint aggregations.

    Two levels are compared: cells of a function inside one department
    against the department contribution, and department contributions of a
    function against the function total.
    """
    if capacity.n != org.n_states:
        raise DomainError("capacity and organisation use different ground sets")
    W = capacity.weight_mask
    gaps = []
    for events in org._event_masks:
        contributions = []
        for dept in org._dept_masks:
            cells = [ev & dept for ev in events]
            union = 0
            for c in cells:
                union |= c
            gaps.append(W(union) - math.fsum(W(c) for c in cells))
            contributions.append(union)
        total = 0
        for c in contributions:
            total |= c
        gaps.append(W(total) - math.fsum(W(c) for c in contributions))

    gaps = np.asarray(gaps)
    above = np.any(gaps > tol)
    below = np.any(gaps < -tol)
    if above and below:
        return Additivity.MIXED
    if above:
        return Additivity.SUPER_ADDITIVE
    if below:
        return Additivity.SUB_ADDITIVE
    return Additivity.ADDITIVE


def profitability_complexity(c_org: float, c_tech: int) -> int:
    """Ceiling of organisational capacity per mutualised technical component."""
    if c_tech != int(c_tech) or c_tech < 1:
        raise DomainError(f"c_tech must be a positive count, got {c_tech}")
    if c_org < 0:
        raise DomainError(f"c_org must be >= 0, got {c_org}")
    return math.ceil(c_org / int(c_tech))


def outcome_value(E: float, params: ValueParams) -> float:
    """Linear value with a steeper slope for negative outcomes."""
    c = params.c_gain if E >= 0 else params.c_loss
    return E * params.rho / c


def project_value(outcomes, params: ValueParams) -> float:
    values = _as_values(outcomes)
    if values.size == 0:
        raise DomainError("project needs at least one outcome")
    return math.fsum(outcome_value(float(e), params) for e in values)
