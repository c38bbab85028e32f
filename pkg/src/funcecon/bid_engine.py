"""Bid-stage budgeting on a customer expectation matrix.

The expectation matrix is decomposed into weighted permutations, one per
architect. Costing and information operators are diagonal; an architect's
budget pairs each cost with the information of the function it activates.
The rearrangement inequality bounds every such budget, and the weighted
means of the weights give the selection thresholds.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .birkhoff import (
    BirkhoffDecomposition,
    PermutationMatrix,
    birkhoff_decompose,
    cycles_of,
    superpose,
    validate_bistochastic,
)
from .errors import DomainError, FuncEconError

__all__ = [
    "OperatorKind",
    "DiagOperator",
    "AdmissibilityViolation",
    "Selection",
    "SelectionReport",
    "rom_bounds",
    "architect_budget",
    "budget_bounds",
    "term_bounds",
    "selection_report",
    "weighted_threshold",
    "decompose_expectations",
    "cycles_of",
    "superpose",
]

CLASS_TOL = 1e-12


class AdmissibilityViolation(FuncEconError, ValueError):
    pass


class OperatorKind(enum.Enum):
    COST = "E"
    INFORMATION = "I"


class Selection(enum.Enum):
    EXCELLENT = "excellent"
    ATTRACTIVE = "attractive"
    UNSATISFACTORY = "unsatisfactory"


@dataclass(frozen=True)
class DiagOperator:
    """Diagonal cost (E) or information (I) operator; bid-stage values are > 0."""

    kind: OperatorKind
    values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise DomainError("operator needs at least one eigenvalue")
        if any(not (v > 0 and math.isfinite(v)) for v in values):
            raise DomainError(f"{self.kind.value} eigenvalues must be finite and > 0 at bid stage")
        object.__setattr__(self, "values", values)

    @classmethod
    def cost(cls, values) -> "DiagOperator":
        return cls(OperatorKind.COST, tuple(values))

    @classmethod
    def information(cls, values) -> "DiagOperator":
        return cls(OperatorKind.INFORMATION, tuple(values))

    def __len__(self):
        return len(self.values)

    @property
    def trace(self) -> float:
        return math.fsum(self.values)

    def array(self) -> np.ndarray:
        return np.array(self.values)


def _values(op) -> np.ndarray:
    return op.array() if isinstance(op, DiagOperator) else np.asarray(op, dtype=float)


def rom_bounds(E, I, I_theta: float, E_p: float, M_F=None) -> tuple:
    """Rough order of magnitude interval ``(I_theta Tr E, E_p Tr I)``.

    When the expectation matrix is supplied, the per-row knowledge and
    per-column professionalism constraints are checked as well.
    """
    e, i = _values(E), _values(I)
    if e.shape != i.shape:
        raise DomainError("E and I must have the same length")
    tr_e, tr_i = math.fsum(e), math.fsum(i)
    if I_theta > tr_i + 1e-12 * max(1.0, abs(tr_i)):
        raise AdmissibilityViolation(f"I_theta={I_theta} exceeds Tr(I)={tr_i}")
    if tr_e > E_p + 1e-12 * max(1.0, abs(E_p)):
        raise AdmissibilityViolation(f"Tr(E)={tr_e} exceeds E_p={E_p}")
    if M_F is not None:
        m = np.asarray(M_F, dtype=float)
        if m.shape != (e.size, e.size):
            raise DomainError("M_F order does not match the operators")
        knowledge = m @ i
        bad = np.flatnonzero(knowledge < I_theta - 1e-12 * max(1.0, abs(I_theta)))
        if bad.size:
            raise AdmissibilityViolation(
                f"row {bad[0]}: sum_j w_ij I_j = {knowledge[bad[0]]} < I_theta"
            )
        professionalism = e @ m
        bad = np.flatnonzero(professionalism > E_p + 1e-12 * max(1.0, abs(E_p)))
        if bad.size:
            raise AdmissibilityViolation(
                f"column {bad[0]}: sum_i E_i w_ij = {professionalism[bad[0]]} > E_p"
            )
    return I_theta * tr_e, E_p * tr_i


def architect_budget(E, I, P: PermutationMatrix) -> float:
    """Budget ``sum_i E_i I_P(i)`` of one permutation term."""
    e, i = _values(E), _values(I)
    if not (e.size == i.size == P.order):
        raise DomainError("operator lengths must equal the permutation order")
    return math.fsum(e * i[list(P.mapping)])


def budget_bounds(E, I) -> tuple:
    """Rearrangement bounds: oppositely sorted and similarly sorted sums."""
    e, i = np.sort(_values(E)), np.sort(_values(I))
    if e.shape != i.shape:
        raise DomainError("E and I must have the same length")
    return math.fsum(e * i[::-1]), math.fsum(e * i)


def term_bounds(E, I, P: PermutationMatrix) -> tuple:
    """Per-term bounds ``n * min_i E_i I_P(i)`` and ``n * max_i E_i I_P(i)``."""
    e, i = _values(E), _values(I)
    products = e * i[list(P.mapping)]
    return e.size * float(products.min()), e.size * float(products.max())


@dataclass(frozen=True)
class SelectionReport:
    weights: tuple
    budgets: tuple
    bounds: tuple  # ((b_minus, b_plus), ...)
    W_plus: float
    W_minus: float
    W_mean: float
    classes: tuple
    pathology: bool

    def rows(self):
        for k, (w, b, (lo, hi), cls) in enumerate(
            zip(self.weights, self.budgets, self.bounds, self.classes)
        ):
            yield {"beta": k, "weight": w, "budget": b, "b_minus": lo, "b_plus": hi, "class": cls.value}


def weighted_threshold(weights, budgets) -> float:
    """``sum_k b_k W_k / sum_k b_k``."""
    w = np.asarray(weights, dtype=float)
    b = np.asarray(budgets, dtype=float)
    if w.shape != b.shape:
        raise DomainError("weights and budgets must have the same length")
    return float(b @ w / b.sum())


def _classify(w: float, w_plus: float, w_minus: float) -> Selection:
    if w > w_plus + CLASS_TOL:
        return Selection.EXCELLENT
    if w < w_minus - CLASS_TOL:
        return Selection.UNSATISFACTORY
    return Selection.ATTRACTIVE


def selection_report(decomp, E, I, bounds: Sequence[tuple] | None = None) -> SelectionReport:
    """Budgets, thresholds and classes for every decomposition term.

    ``decomp`` is a :class:`BirkhoffDecomposition` or a sequence of
    ``(weight, PermutationMatrix)``. ``bounds`` optionally supplies the
    per-term ``(b_minus, b_plus)``; by default :func:`term_bounds` is used.
    """
    terms = list(decomp)
    if not terms:
        raise DomainError("empty decomposition")
    weights = np.array([w for w, _ in terms], dtype=float)
    budgets = np.array([architect_budget(E, I, p) for _, p in terms])
    if bounds is None:
        bounds = [term_bounds(E, I, p) for _, p in terms]
    bounds = [(float(lo), float(hi)) for lo, hi in bounds]
    if len(bounds) != len(terms):
        raise DomainError("one (b_minus, b_plus) pair per term is required")
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    if np.any(lo > budgets * (1 + 1e-12)) or np.any(budgets > hi * (1 + 1e-12)):
        raise DomainError("every budget must lie inside its bounds")

    w_plus = weighted_threshold(weights, hi)
    w_minus = weighted_threshold(weights, lo)
    w_mean = weighted_threshold(weights, budgets)
    classes = tuple(_classify(w, w_plus, w_minus) for w in weights)
    return SelectionReport(
        weights=tuple(weights.tolist()),
        budgets=tuple(budgets.tolist()),
        bounds=tuple(bounds),
        W_plus=w_plus,
        W_minus=w_minus,
        W_mean=w_mean,
        classes=classes,
        pathology=w_plus < w_minus,
    )


def decompose_expectations(M_F) -> BirkhoffDecomposition:
    """Validate a raw expectation matrix and decompose it; the term weights
    are the architects' influence values."""
    return birkhoff_decompose(validate_bistochastic(M_F))
