"""
Coordinate projections and compressions.

``compress_k`` rewrites every fiber along coordinate ``k`` to an initial
segment ``{0, ..., s-1}``.  Compressions preserve cardinality and never
increase sumset sizes, and since ``phi . C_i = C_{i+1} . phi`` they never
increase ``|A + phi(A)|`` either.  A set fixed by every ``C_k`` is exactly a
downward-closed subset of N^d (an order ideal).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .core import PointSet
from .errors import IndexOutOfRange


@dataclass(frozen=True)
class IndexSet:
    """A subset of ``{1, ..., arity}`` (1-based, like coordinate indices)."""

    members: frozenset
    arity: int

    def __init__(self, members: Iterable[int] = (), arity: int | None = None):
        mem = frozenset(int(j) for j in members)
        if arity is None:
            arity = max(mem, default=0)
        if any(j < 1 or j > arity for j in mem):
            raise IndexOutOfRange(f"index set {sorted(mem)} not inside [1, {arity}]")
        object.__setattr__(self, "members", mem)
        object.__setattr__(self, "arity", int(arity))

    @classmethod
    def from_mask(cls, mask: int, arity: int) -> "IndexSet":
        return cls((j + 1 for j in range(arity) if mask >> j & 1), arity)

    @property
    def mask(self) -> int:
        return sum(1 << (j - 1) for j in self.members)

    @property
    def alpha(self) -> int:
        return alpha(self)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __and__(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.members & other.members, max(self.arity, other.arity))

    def __repr__(self) -> str:
        return f"IndexSet({sorted(self.members)}, arity={self.arity})"


def _members(I) -> frozenset:
    return I.members if isinstance(I, IndexSet) else frozenset(int(j) for j in I)


def alpha(I) -> int:
    """Length of the longest run of consecutive integers in ``I``.

    >>> alpha({2, 3, 4, 7})
    3
    """
    mem = _members(I)
    best = 0
    for j in mem:
        if j - 1 not in mem:
            run = 1
            while j + run in mem:
                run += 1
            best = max(best, run)
    return best


def shift_index_set(J) -> IndexSet:
    """``{j + 1 : j in J}``; the arity grows by one."""
    mem = _members(J)
    arity = J.arity if isinstance(J, IndexSet) else max(mem, default=0)
    return IndexSet((j + 1 for j in mem), arity + 1)


def all_index_sets(m: int) -> Iterator[IndexSet]:
    for mask in range(1 << m):
        yield IndexSet.from_mask(mask, m)


def _check_k(A: PointSet, k: int) -> None:
    if not 1 <= k <= A.dim:
        raise IndexOutOfRange(f"coordinate {k} outside [1, {A.dim}]")


def project(A: PointSet, I) -> PointSet:
    """Zero every coordinate outside ``I``; ``p_{}(A) = {0}``."""
    mem = _members(I)
    bad = [j for j in mem if not 1 <= j <= A.dim]
    if bad:
        raise IndexOutOfRange(f"indices {sorted(bad)} outside [1, {A.dim}]")
    keep = np.zeros(A.dim, dtype=bool)
    keep[[j - 1 for j in mem]] = True
    return PointSet._wrap(np.where(keep, A.points, 0))


def projection_sizes(M: np.ndarray) -> np.ndarray:
    """``|p_I|`` of the rows of ``M`` for every ``I``, indexed by bitmask.

    Bit ``j-1`` of the mask stands for coordinate ``j``.
    """
    n, d = M.shape
    out = np.empty(1 << d, dtype=np.int64)
    lo = M.min(axis=0)
    spans = [int(h) - int(l) + 1 for l, h in zip(lo, M.max(axis=0))]
    fits = math.prod(spans) < (1 << 62)
    if fits:
        Z = M - lo
        strides = np.ones(d, dtype=np.int64)
        for j in range(d - 2, -1, -1):
            strides[j] = strides[j + 1] * spans[j + 1]
        cols = [Z[:, j] * strides[j] for j in range(d)]
    for mask in range(1 << d):
        idx = [j for j in range(d) if mask >> j & 1]
        if not idx:
            out[mask] = 1
        elif fits:
            out[mask] = np.unique(sum(cols[j] for j in idx)).size
        else:
            out[mask] = np.unique(M[:, idx], axis=0).shape[0]
    return out


def delete_coord(A: PointSet, k: int) -> PointSet:
    """Remove coordinate ``k`` from every point (fibers merge)."""
    _check_k(A, k)
    if A.dim == 1:
        raise IndexOutOfRange("cannot delete the only coordinate of a 1-dimensional set")
    return PointSet._wrap(np.delete(A.points, k - 1, axis=1))


def compress_k(A: PointSet, k: int) -> PointSet:
    """Compression along coordinate ``k``.

    Each fiber ``{a in A : a without coordinate k = x}`` keeps its size ``s``
    but its ``k``-th coordinates become ``0, 1, ..., s-1``.
    """
    _check_k(A, k)
    M = A.points
    n = len(M)
    if A.dim == 1:
        return PointSet._wrap(np.arange(n, dtype=np.int64)[:, None])
    rest = np.delete(M, k - 1, axis=1)
    fibers, counts = np.unique(rest, axis=0, return_counts=True)
    starts = np.cumsum(counts) - counts
    level = np.arange(n, dtype=np.int64) - np.repeat(starts, counts)
    base = np.repeat(fibers, counts, axis=0)
    return PointSet._wrap(np.insert(base, k - 1, level, axis=1))


def compression_sweeps(A: PointSet) -> tuple[PointSet, int]:
    """Apply ``C_1, ..., C_d`` repeatedly until a sweep changes nothing.

    Returns the fixpoint and the number of sweeps that changed the set.  After
    the first sweep all coordinates are nonnegative, and any later changing
    sweep strictly lowers the total coordinate sum, so this terminates.
    """
    changed = 0
    while True:
        B = A
        for k in range(1, B.dim + 1):
            if k <= B.dim:
                B = compress_k(B, k)
        if B == A:
            return A, changed
        A = B
        changed += 1


def compress_full(A: PointSet) -> PointSet:
    return compression_sweeps(A)[0]


def is_downward_closed(A: PointSet) -> bool:
    """True when ``A`` lies in N^d and contains every point it dominates."""
    M = A.points
    if (M < 0).any():
        return False
    mem = A.members()
    for j in range(A.dim):
        rows = M[M[:, j] > 0].copy()
        rows[:, j] -= 1
        for r in rows:
            if tuple(int(v) for v in r) not in mem:
                return False
    return True


def is_compressed(A: PointSet) -> bool:
    """``C_k(A) = A`` for every ``k``.

    Equivalent to downward closure in N^d, which is what gets checked; the
    test suite cross-checks against the literal definition.
    """
    return is_downward_closed(A)


def basis_vector(k: int, d: int) -> tuple[int, ...]:
    return tuple(1 if j == k else 0 for j in range(1, d + 1))


def reduce_dim(A: PointSet) -> PointSet:
    """Compress, then drop every coordinate whose basis vector is missing.

    On a compressed set ``e_k`` is absent exactly when coordinate ``k``
    vanishes identically, so dropping it is a bijection; merging coordinates
    ``k`` and ``k+1`` of ``A + phi(A)`` surjects onto the new dilate sum, so
    ``|A + phi(A)|`` cannot grow.  Repeats until nothing is dropped.  The
    singleton ``{0}`` is returned as is.
    """
    while True:
        A = compress_full(A)
        if len(A) == 1:
            return A
        M = A.points
        zero_cols = [j for j in range(A.dim) if not M[:, j].any()]
        if not zero_cols:
            return A
        A = PointSet._wrap(np.delete(M, zero_cols, axis=1))
