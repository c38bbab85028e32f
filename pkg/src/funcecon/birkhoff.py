"""Doubly stochastic matrices and their decomposition into permutations.

The decomposition peels one permutation at a time off the positive support
of the residual matrix. Each permutation is a perfect matching of the
bipartite row/column support graph, found with augmenting paths (Kuhn's
algorithm). The previous matching is reused between steps so only the rows
that lost their edge are re-augmented. Rows are processed in ascending
order and columns are tried smallest first, which makes the result a pure
function of the input.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, FuncEconError

__all__ = [
    "BistochasticError",
    "NotSquare",
    "NegativeEntry",
    "RowSumViolation",
    "ColSumViolation",
    "MatchingFailure",
    "BistochasticMatrix",
    "PermutationMatrix",
    "BirkhoffDecomposition",
    "validate_bistochastic",
    "perfect_matching",
    "birkhoff_decompose",
    "cycles_of",
    "superpose",
]

SUM_TOL = 1e-9
SUPPORT_TOL = 1e-12


class BistochasticError(FuncEconError, ValueError):
    """Raised when a matrix fails the doubly stochastic check.

    ``index`` is the first offending row or column (0-based), when any.
    """

    def __init__(self, message: str, index=None):
        super().__init__(message)
        self.index = index


class NotSquare(BistochasticError):
    pass


class NegativeEntry(BistochasticError):
    pass


class RowSumViolation(BistochasticError):
    pass


class ColSumViolation(BistochasticError):
    pass


class MatchingFailure(FuncEconError, ArithmeticError):
    """The residual support admits no perfect matching."""


@dataclass(frozen=True, eq=False)
class BistochasticMatrix:
    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class PermutationMatrix:
    """Permutation ``i -> mapping[i]`` (0-based); entry (i, mapping[i]) is 1."""

    mapping: tuple

    def __post_init__(self):
        mapping = tuple(int(j) for j in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise DomainError(f"{mapping} is not a bijection on 0..{len(mapping) - 1}")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, n: int) -> "PermutationMatrix":
        return cls(tuple(range(n)))

    @classmethod
    def from_matrix(cls, matrix) -> "PermutationMatrix":
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError("a permutation matrix must be square")
        if not np.all((a == 0) | (a == 1)):
            raise DomainError("a permutation matrix has 0/1 entries only")
        if not (np.all(a.sum(axis=0) == 1) and np.all(a.sum(axis=1) == 1)):
            raise DomainError("a permutation matrix has exactly one 1 per row and column")
        return cls(tuple(int(j) for j in a.argmax(axis=1)))

    @property
    def order(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __len__(self):
        return len(self.mapping)

    def matrix(self, dtype=float) -> np.ndarray:
        n = self.order
        out = np.zeros((n, n), dtype=dtype)
        out[np.arange(n), self.mapping] = 1
        return out

    def inverse(self) -> "PermutationMatrix":
        inv = [0] * self.order
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return PermutationMatrix(tuple(inv))


@dataclass(frozen=True)
class BirkhoffDecomposition:
    """Convex combination ``sum_k weights[k] * perms[k]``."""

    terms: tuple  # ((weight, PermutationMatrix), ...)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    @property
    def permutations(self) -> list:
        return [p for _, p in self.terms]

    @property
    def order(self) -> int:
        return self.terms[0][1].order

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def reconstruct(self) -> np.ndarray:
        n = self.order
        out = np.zeros((n, n))
        rows = np.arange(n)
        for w, p in self.terms:
            out[rows, p.mapping] += w
        return out


def validate_bistochastic(entries, tol: float = SUM_TOL) -> BistochasticMatrix:
    """Check that ``entries`` is square, non-negative, with unit row/column sums.

    Negative entries no larger than ``tol`` in magnitude are treated as
    rounding noise and clipped to zero.
    """
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NegativeEntry("matrix has non-finite entries")
    neg_rows = np.flatnonzero((a < -tol).any(axis=1))
    if neg_rows.size:
        i = int(neg_rows[0])
        raise NegativeEntry(f"row {i} has a negative entry", index=i)
    a[a < 0] = 0.0
    rows = np.flatnonzero(np.abs(a.sum(axis=1) - 1.0) > tol)
    if rows.size:
        i = int(rows[0])
        raise RowSumViolation(f"row {i} sums to {a[i].sum()!r}", index=i)
    cols = np.flatnonzero(np.abs(a.sum(axis=0) - 1.0) > tol)
    if cols.size:
        j = int(cols[0])
        raise ColSumViolation(f"column {j} sums to {a[:, j].sum()!r}", index=j)
    a.setflags(write=False)
    return BistochasticMatrix(a)


def perfect_matching(support: np.ndarray, start: Sequence[int] | None = None):
    """Perfect matching of a boolean bipartite support, or ``None``.

    ``start`` is an optional partial matching (row -> column or -1) whose
    edges are kept when still present in ``support``.
    """
    n = support.shape[0]
    adj = [np.flatnonzero(support[i]).tolist() for i in range(n)]
    match_row = [-1] * n
    match_col = [-1] * n
    if start is not None:
        for i, j in enumerate(start):
            if j >= 0 and support[i, j] and match_col[j] < 0:
                match_row[i] = j
                match_col[j] = i

    def augment(i, seen):
        # iterative DFS over alternating paths from row i
        stack = [(i, 0)]
        parent = {}
        while stack:
            r, k = stack[-1]
            if k >= len(adj[r]):
                stack.pop()
                continue
            stack[-1] = (r, k + 1)
            j = adj[r][k]
            if seen[j]:
                continue
            seen[j] = True
            parent[j] = r
            if match_col[j] < 0:
                # flip the path back to the root
                while True:
                    r = parent[j]
                    prev = match_row[r]
                    match_row[r] = j
                    match_col[j] = r
                    if r == i:
                        return True
                    j = prev
            stack.append((match_col[j], 0))
        return False

    for i in range(n):
        if match_row[i] < 0 and not augment(i, [False] * n):
            return None
    return match_row


def birkhoff_decompose(M, tol: float = SUPPORT_TOL) -> BirkhoffDecomposition:
    """Decompose a doubly stochastic matrix into weighted permutations.

    Weights are positive and renormalised to sum to exactly 1. Each step
    removes at least one support entry and moves the residual to a strictly
    smaller face of the Birkhoff polytope, so at most ``n**2 - 2n + 2``
    terms are produced.
    """
    if not isinstance(M, BistochasticMatrix):
        M = validate_bistochastic(M)
    residual = np.array(M.entries, dtype=float)
    n = residual.shape[0]
    rows = np.arange(n)
    residual[residual < tol] = 0.0

    terms = []
    matching = None
    while True:
        support = residual > tol
        if not support.any():
            break
        matching = perfect_matching(support, matching)
        if matching is None:
            if residual.sum() <= n * SUM_TOL:
                break
            raise MatchingFailure(
                f"no perfect matching on the residual support "
                f"(remaining mass {residual.sum():.3e})"
            )
        picked = residual[rows, matching]
        w = float(picked.min())
        residual[rows, matching] = picked - w
        # entries that hit the minimum are exact zeros, not rounding residue
        residual[residual < tol] = 0.0
        terms.append((w, PermutationMatrix(tuple(matching))))

    if not terms:
        raise MatchingFailure("matrix has no positive support")
    total = sum(w for w, _ in terms)
    return BirkhoffDecomposition(tuple((w / total, p) for w, p in terms))


def cycles_of(P: PermutationMatrix) -> list:
    """Disjoint cycles of ``P``, each starting at its smallest element."""
    seen = [False] * P.order
    cycles = []
    for start in range(P.order):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = P.mapping[i]
        cycles.append(tuple(cycle))
    return cycles


def superpose(selected: Iterable[PermutationMatrix]) -> np.ndarray:
    """0/1 matrix whose ones are the union of the permutations' supports."""
    selected = list(selected)
    if not selected:
        raise DomainError("nothing to superpose")
    n = selected[0].order
    out = np.zeros((n, n), dtype=int)
    rows = np.arange(n)
    for p in selected:
        if p.order != n:
            raise DomainError("permutations of different orders cannot be superposed")
        out[rows, p.mapping] = 1
    return out
