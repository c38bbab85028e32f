"""Block expansion of a selected solution down to technical components.

A base permutation of order ``m_F`` is expanded by replacing the one at
``(i, P(i))`` with a doubly stochastic block ``T_i`` of order ``d_i``. The
expanded matrix is doubly stochastic and every term of its permutation
decomposition keeps the block pattern, so each block is reconstructed by
the same weights.

Cost and information eigenvalues are split over the rows and columns of
each block. Split terms may turn negative during exploration; the bilinear
form ``H = E_i^T T^A I_l`` then quantifies the resulting externality.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .birkhoff import (
    BirkhoffDecomposition,
    PermutationMatrix,
    birkhoff_decompose,
    validate_bistochastic,
)
from .errors import DomainError, FuncEconError

__all__ = [
    "BlockPatternError",
    "OrderMismatch",
    "MissingBlock",
    "EmptyCandidateSet",
    "BlockPattern",
    "BlockMatrix",
    "SplitOperators",
    "Externality",
    "ExternalityReport",
    "AdvantageResult",
    "block_expand",
    "block_birkhoff",
    "restrict",
    "block_reconstruction",
    "uniform_split",
    "block_budget",
    "technical_select",
    "externality_metric",
    "annotate_cell",
    "comparative_advantage",
    "apply_sign_schedule",
]

SPLIT_TOL = 1e-9
TIE_TOL = 1e-12


class BlockPatternError(FuncEconError, ValueError):
    pass


class OrderMismatch(BlockPatternError):
    pass


class MissingBlock(BlockPatternError):
    pass


class EmptyCandidateSet(FuncEconError, ValueError):
    pass


@dataclass(frozen=True)
class BlockPattern:
    """Base permutation plus the order of the block placed on each of its ones.

    ``block_orders[i]`` is the order of the block at ``(i, base(i))``.
    Row band ``i`` therefore has height ``block_orders[i]`` and column band
    ``base(i)`` has the same width.
    """

    base: PermutationMatrix
    block_orders: tuple

    def __post_init__(self):
        if not isinstance(self.base, PermutationMatrix):
            object.__setattr__(self, "base", PermutationMatrix(tuple(self.base)))
        orders = tuple(int(d) for d in self.block_orders)
        if len(orders) != self.base.order:
            raise OrderMismatch(
                f"{len(orders)} block orders given for a base of order {self.base.order}"
            )
        if any(d < 1 for d in orders):
            raise OrderMismatch("block orders must be >= 1")
        object.__setattr__(self, "block_orders", orders)

    @property
    def m_F(self) -> int:
        return self.base.order

    @property
    def column_orders(self) -> tuple:
        """Width of each column band (``d_l`` indexed by column)."""
        inv = self.base.inverse().mapping
        return tuple(self.block_orders[inv[l]] for l in range(self.m_F))

    @property
    def N(self) -> int:
        return sum(self.block_orders)

    @property
    def row_offsets(self) -> tuple:
        return tuple(np.concatenate(([0], np.cumsum(self.block_orders)[:-1])).tolist())

    @property
    def col_offsets(self) -> tuple:
        return tuple(np.concatenate(([0], np.cumsum(self.column_orders)[:-1])).tolist())

    def positions(self):
        return [(i, self.base.mapping[i]) for i in range(self.m_F)]

    def block_slices(self, i: int) -> tuple:
        r0 = self.row_offsets[i]
        c0 = self.col_offsets[self.base.mapping[i]]
        d = self.block_orders[i]
        return slice(r0, r0 + d), slice(c0, c0 + d)

    def mask(self) -> np.ndarray:
        """Boolean N x N support of the pattern."""
        out = np.zeros((self.N, self.N), dtype=bool)
        for i in range(self.m_F):
            rs, cs = self.block_slices(i)
            out[rs, cs] = True
        return out


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    pattern: BlockPattern
    blocks: tuple  # one validated block per function index i
    matrix: np.ndarray = field(repr=False)

    def block(self, i: int) -> np.ndarray:
        return self.blocks[i]


def block_expand(pattern: BlockPattern, blocks: Mapping) -> BlockMatrix:
    """Assemble the expanded matrix from ``{(i, l): block}`` or ``{i: block}``.

    Keys may be function indices or ``(row, column)`` base positions.
    """
    by_row = {}
    for key, block in blocks.items():
        if isinstance(key, tuple):
            i, l = key
            if pattern.base.mapping[i] != l:
                raise BlockPatternError(f"({i}, {l}) is not a one of the base permutation")
        else:
            i = key
        if not 0 <= i < pattern.m_F:
            raise BlockPatternError(f"function index {i} out of range")
        by_row[int(i)] = block

    validated = []
    for i in range(pattern.m_F):
        if i not in by_row:
            raise MissingBlock(f"no block for position ({i}, {pattern.base.mapping[i]})")
        b = np.asarray(by_row[i], dtype=float)
        d = pattern.block_orders[i]
        if b.shape != (d, d):
            raise OrderMismatch(
                f"block ({i}, {pattern.base.mapping[i]}) has shape {b.shape}, expected ({d}, {d})"
            )
        validated.append(validate_bistochastic(b).entries)

    full = np.zeros((pattern.N, pattern.N))
    for i, b in enumerate(validated):
        rs, cs = pattern.block_slices(i)
        full[rs, cs] = b
    full = validate_bistochastic(full).entries
    return BlockMatrix(pattern, tuple(validated), full)


def restrict(term: PermutationMatrix, pattern: BlockPattern, i: int) -> PermutationMatrix:
    """Restriction of a full-order permutation to block ``i``.

    Raises :class:`BlockPatternError` when the term leaves the block.
    """
    rs, cs = pattern.block_slices(i)
    local = []
    for r in range(rs.start, rs.stop):
        c = term.mapping[r]
        if not cs.start <= c < cs.stop:
            raise BlockPatternError(f"term maps row {r} outside block {i}")
        local.append(c - cs.start)
    return PermutationMatrix(tuple(local))


def block_birkhoff(B: BlockMatrix) -> BirkhoffDecomposition:
    """Decompose the expanded matrix; every term respects the block pattern."""
    decomp = birkhoff_decompose(validate_bistochastic(B.matrix))
    for _, p in decomp:
        for i in range(B.pattern.m_F):
            restrict(p, B.pattern, i)
    return decomp


def block_reconstruction(decomp: BirkhoffDecomposition, pattern: BlockPattern, i: int) -> np.ndarray:
    """``sum_alpha W_alpha pi_alpha`` restricted to block ``i``."""
    d = pattern.block_orders[i]
    out = np.zeros((d, d))
    for w, p in decomp:
        out[np.arange(d), restrict(p, pattern, i).mapping] += w
    return out


@dataclass(frozen=True)
class SplitOperators:
    """Cost splits per row band and information splits per column band.

    ``E_split[i]`` has ``block_orders[i]`` entries and sums to ``E[i]``;
    ``I_split[l]`` has ``column_orders[l]`` entries and sums to ``I[l]``.
    Signs are unrestricted.
    """

    E_split: tuple
    I_split: tuple

    def __post_init__(self):
        object.__setattr__(self, "E_split", tuple(tuple(map(float, r)) for r in self.E_split))
        object.__setattr__(self, "I_split", tuple(tuple(map(float, r)) for r in self.I_split))

    def check(self, pattern: BlockPattern, E=None, I=None, tol: float = SPLIT_TOL) -> None:
        """Check dimensions against ``pattern`` and conservation against ``E``, ``I``."""
        if len(self.E_split) != pattern.m_F or len(self.I_split) != pattern.m_F:
            raise OrderMismatch("one split per function is required")
        for i, row in enumerate(self.E_split):
            if len(row) != pattern.block_orders[i]:
                raise OrderMismatch(f"E split {i} has {len(row)} terms, expected {pattern.block_orders[i]}")
        for l, row in enumerate(self.I_split):
            if len(row) != pattern.column_orders[l]:
                raise OrderMismatch(f"I split {l} has {len(row)} terms, expected {pattern.column_orders[l]}")
        for name, parents, splits in (("E", E, self.E_split), ("I", I, self.I_split)):
            if parents is None:
                continue
            for k, (parent, row) in enumerate(zip(parents, splits)):
                total = math.fsum(row)
                if abs(total - parent) > tol * max(1.0, abs(parent)):
                    raise DomainError(f"{name} split {k} sums to {total}, expected {parent}")


def uniform_split(E, I, pattern: BlockPattern) -> SplitOperators:
    """Spread each eigenvalue evenly over its band."""
    E = [float(v) for v in getattr(E, "values", E)]
    I = [float(v) for v in getattr(I, "values", I)]
    return SplitOperators(
        tuple((e / d,) * d for e, d in zip(E, pattern.block_orders)),
        tuple((v / d,) * d for v, d in zip(I, pattern.column_orders)),
    )


def block_budget(E_split: Sequence[float], I_split: Sequence[float], pi: PermutationMatrix) -> float:
    """Department budget ``sum_k E_k I_pi(k)`` for one block permutation."""
    e = np.asarray(E_split, dtype=float)
    i = np.asarray(I_split, dtype=float)
    if not (e.size == i.size == pi.order):
        raise DomainError("split lengths must equal the block order")
    return math.fsum(e * i[list(pi.mapping)])


def technical_select(terms, chosen) -> np.ndarray:
    """0/1 matrix of the union of supports of the chosen block permutations.

    ``terms`` is a sequence of ``(weight, PermutationMatrix)``.
    """
    terms = list(terms)
    chosen = sorted(set(int(a) for a in chosen))
    if not chosen:
        raise DomainError("the promoted set A must not be empty")
    if chosen[0] < 0 or chosen[-1] >= len(terms):
        raise DomainError(f"indices {chosen} out of range for {len(terms)} terms")
    d = terms[chosen[0]][1].order
    out = np.zeros((d, d), dtype=int)
    for a in chosen:
        p = terms[a][1]
        if p.order != d:
            raise DomainError("chosen permutations have different orders")
        out[np.arange(d), p.mapping] = 1
    return out


class Externality(enum.Enum):
    CLEAN = "clean"
    MINOR_DEFAULT = "minor default"
    MAJOR_DEFAULT = "major default"
    EXPLICIT_EXTERNALITY = "explicit externality"


def annotate_cell(e: float, i: float) -> str:
    """Label of a cost/information sign pair on a used cell."""
    if i == 0:
        return "ignorance"
    product = e * i
    if product < 0:
        return "negligence" if i > 0 else "malicious thinking"
    if product > 0:
        return "efficient knowledge" if i > 0 else "counterintuitive correction"
    return "idle component"


@dataclass(frozen=True)
class ExternalityReport:
    H: float
    classification: Externality
    negative_terms: tuple  # ((k, l), ...)
    annotations: tuple  # label per negative term

    @property
    def n_negative(self) -> int:
        return len(self.negative_terms)


def externality_metric(E_row, I_row, T) -> ExternalityReport:
    """Bilinear externality ``H = sum_kl E_k t_kl I_l`` and its class.

    Precedence: explicit externality (every cost term negative, every used
    information term positive), then major default (H < 0), then minor
    default (a negative cell with H > 0), else clean.
    """
    e = np.asarray(E_row, dtype=float)
    i = np.asarray(I_row, dtype=float)
    t = np.asarray(T, dtype=float)
    if t.shape != (e.size, i.size):
        raise DomainError(f"T has shape {t.shape}, expected ({e.size}, {i.size})")
    cells = e[:, None] * t * i[None, :]
    H = math.fsum(cells.ravel())
    neg = [(int(k), int(l)) for k, l in zip(*np.nonzero(cells < 0))]
    used_cols = np.flatnonzero(t.any(axis=0))

    if e.size and np.all(e < 0) and used_cols.size and np.all(i[used_cols] > 0):
        cls = Externality.EXPLICIT_EXTERNALITY
    elif H < 0:
        cls = Externality.MAJOR_DEFAULT
    elif neg and H > 0:
        cls = Externality.MINOR_DEFAULT
    else:
        cls = Externality.CLEAN
    return ExternalityReport(
        H=H,
        classification=cls,
        negative_terms=tuple(neg),
        annotations=tuple(annotate_cell(e[k], i[l]) for k, l in neg),
    )


@dataclass(frozen=True)
class AdvantageResult:
    chosen: int
    H: dict
    tied: tuple

    @property
    def unique(self) -> bool:
        return len(self.tied) == 1


def comparative_advantage(candidates: Mapping) -> AdvantageResult:
    """Pick the candidate with the smallest H; ties go to the lowest index.

    ``candidates`` maps an integer index to ``(E_row, I_row, T)``.
    """
    if not candidates:
        raise EmptyCandidateSet("no candidate solution element")
    H = {int(b): externality_metric(*args).H for b, args in candidates.items()}
    best = min(H.values())
    tol = TIE_TOL * max(1.0, abs(best))
    tied = tuple(sorted(b for b, h in H.items() if h - best <= tol))
    return AdvantageResult(chosen=tied[0], H=dict(sorted(H.items())), tied=tied)


def apply_sign_schedule(values: Sequence[float], schedule, t: float) -> tuple:
    """Make ``values[k]`` negative for each ``(time, k)`` event with ``time <= t``.

    Models components that turn into negative externalities with age.
    """
    out = [float(v) for v in values]
    for when, k in schedule:
        if when <= t:
            out[int(k)] = -abs(out[int(k)])
    return tuple(out)
