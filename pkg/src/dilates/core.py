"""
Exact model of finite subsets of Q[lambda] for transcendental lambda.

A polynomial ``x_1 + x_2*lambda + ... + x_d*lambda^(d-1)`` is stored as the
integer vector ``(x_1, ..., x_d)``.  Because ``1, lambda, lambda^2, ...`` are
linearly independent, multiplication by lambda is the shift map

    phi(x_1, ..., x_d) = (0, x_1, ..., x_d)

and ``|A + lambda*A| = |A + phi(A)|``.  Rational inputs are cleared to integers
at ingestion; this is harmless because ``x -> N*x`` commutes with phi.

Coordinates are signed 64-bit integers.  Every kernel checks its bounds before
touching numpy and raises :class:`CoordinateOverflow` instead of wrapping.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, CoordinateOverflow, EmptySetError, SetFormatError

INT64_MAX = int(np.iinfo(np.int64).max)
INT64_MIN = int(np.iinfo(np.int64).min)

#: default cap on the number of pairs enumerated by one Minkowski sum
DEFAULT_CAP = 10**7

# rows x columns handled per numpy chunk inside minkowski()
_CHUNK_ELEMS = 1 << 22


def _check_range(lo: int, hi: int) -> None:
    if lo < INT64_MIN or hi > INT64_MAX:
        raise CoordinateOverflow(f"coordinate range [{lo}, {hi}] leaves int64")


def _unique_rows(M: np.ndarray) -> np.ndarray:
    """Lexicographically sorted distinct rows of an int64 matrix."""
    n, d = M.shape
    if n <= 1:
        return M.copy()
    if d == 1:
        return np.unique(M[:, 0])[:, None]
    lo = M.min(axis=0)
    hi = M.max(axis=0)
    spans = [int(h) - int(l) + 1 for l, h in zip(lo, hi)]
    if math.prod(spans) < (1 << 62):
        # mixed-radix key, first column most significant
        strides = np.ones(d, dtype=np.int64)
        for j in range(d - 2, -1, -1):
            strides[j] = strides[j + 1] * spans[j + 1]
        keys = np.unique(((M - lo) * strides).sum(axis=1))
        out = np.empty((keys.size, d), dtype=np.int64)
        for j in range(d):
            out[:, j], keys = np.divmod(keys, strides[j])
        return out + lo
    return np.unique(M, axis=0)


def _canonical(M: np.ndarray) -> np.ndarray:
    if M.shape[0] == 0:
        raise EmptySetError("point sets must be nonempty")
    M = _unique_rows(M)
    nz = np.flatnonzero(M.any(axis=0))
    d = int(nz[-1]) + 1 if nz.size else 1
    M = np.ascontiguousarray(M[:, :d])
    M.setflags(write=False)
    return M


class PointSet:
    """A nonempty finite subset of V_d in canonical form.

    Rows are distinct and sorted lexicographically; trailing coordinates that
    vanish on every point are trimmed, so ``dim`` is minimal (but at least 1).
    Instances are immutable and hashable.

    >>> PointSet([(0, 0), (1, 0), (1, 0)])
    PointSet(dim=1, [(0,), (1,)])
    """

    __slots__ = ("_pts", "_members", "_hash")

    def __init__(self, points: Iterable[Sequence[int]] | np.ndarray):
        if isinstance(points, np.ndarray):
            M = points
            if M.ndim == 1:
                M = M[:, None]
            if M.dtype != np.int64:
                if M.size and (int(M.min()) < INT64_MIN or int(M.max()) > INT64_MAX):
                    raise CoordinateOverflow("coordinates leave int64")
                M = M.astype(np.int64)
        else:
            rows = [tuple(int(v) for v in p) for p in points]
            if not rows:
                raise EmptySetError("point sets must be nonempty")
            d = max(len(r) for r in rows)
            if d == 0:
                raise EmptySetError("points need at least one coordinate")
            flat = [v for r in rows for v in r]
            _check_range(min(flat), max(flat))
            M = np.zeros((len(rows), d), dtype=np.int64)
            for i, r in enumerate(rows):
                M[i, : len(r)] = r
        self._pts = _canonical(M)
        self._members = None
        self._hash = None

    @classmethod
    def _wrap(cls, M: np.ndarray) -> "PointSet":
        obj = cls.__new__(cls)
        obj._pts = _canonical(M)
        obj._members = None
        obj._hash = None
        return obj

    @property
    def points(self) -> np.ndarray:
        """Read-only ``(len, dim)`` int64 array of the points."""
        return self._pts

    @property
    def dim(self) -> int:
        return self._pts.shape[1]

    def __len__(self) -> int:
        return self._pts.shape[0]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.tuples())

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self._pts]

    def members(self) -> frozenset:
        if self._members is None:
            self._members = frozenset(self.tuples())
        return self._members

    def __contains__(self, p) -> bool:
        p = tuple(int(v) for v in p)
        if len(p) > self.dim:
            if any(p[self.dim:]):
                return False
            p = p[: self.dim]
        elif len(p) < self.dim:
            p = p + (0,) * (self.dim - len(p))
        return p in self.members()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self._pts.shape == other._pts.shape and bool(np.array_equal(self._pts, other._pts))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._pts.shape, self._pts.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        body = self.tuples()
        if len(body) > 8:
            shown = ", ".join(map(str, body[:8])) + ", ..."
        else:
            shown = ", ".join(map(str, body))
        return f"PointSet(dim={self.dim}, [{shown}])"

    def padded(self, d: int) -> np.ndarray:
        """Points as an array with exactly ``d`` columns (zero padded)."""
        if d < self.dim:
            raise ValueError(f"cannot pad dim {self.dim} down to {d}")
        if d == self.dim:
            return self._pts
        out = np.zeros((len(self), d), dtype=np.int64)
        out[:, : self.dim] = self._pts
        return out

    def translate(self, t: Sequence[int]) -> "PointSet":
        d = max(self.dim, len(t))
        tv = [int(v) for v in t] + [0] * (d - len(t))
        M = self.padded(d)
        _check_range(int(M.min()) + min(0, min(tv)), int(M.max()) + max(0, max(tv)))
        return PointSet._wrap(M + np.asarray(tv, dtype=np.int64))

    def scale(self, factor: int) -> "PointSet":
        factor = int(factor)
        if factor == 0:
            raise ValueError("scale factor must be nonzero")
        lo, hi = int(self._pts.min()), int(self._pts.max())
        _check_range(min(lo * factor, hi * factor), max(lo * factor, hi * factor))
        return PointSet._wrap(self._pts * factor)


# -- ingestion / serialization ------------------------------------------------

def _parse_entry(tok: str, lineno: int) -> Fraction:
    num, sep, den = tok.partition("/")
    try:
        p, q = int(num), int(den) if sep else 1
    except ValueError:
        raise SetFormatError(f"line {lineno}: malformed entry {tok!r}") from None
    if q == 0:
        raise SetFormatError(f"line {lineno}: zero denominator in {tok!r}")
    return Fraction(p, q)


def parse_set(text: str) -> PointSet:
    """Parse ``.pts`` content into a canonical :class:`PointSet`.

    One point per line, whitespace separated integers or ``p/q`` rationals;
    ``#`` starts a comment and blank lines are skipped.  Short rows are padded
    with zeros.  Rationals are cleared by the least common denominator of all
    entries.

    >>> parse_set("1/2\\n3/2").tuples()
    [(1,), (3,)]
    """
    rows: list[list[Fraction]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append([_parse_entry(tok, lineno) for tok in line.split()])
    if not rows:
        raise EmptySetError("set file contains no points")
    lcd = 1
    for r in rows:
        for v in r:
            lcd = math.lcm(lcd, v.denominator)
    int_rows = [[int(v * lcd) for v in r] for r in rows]
    flat = [v for r in int_rows for v in r]
    _check_range(min(flat), max(flat))
    return PointSet(int_rows)


def serialize_set(A: PointSet) -> str:
    """Canonical ``.pts`` text: integers only, lexicographic, one point per line."""
    return "".join(" ".join(str(int(v)) for v in row) + "\n" for row in A.points)


def read_set(path) -> PointSet:
    with open(path, encoding="utf-8") as fh:
        return parse_set(fh.read())


def write_set(A: PointSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_set(A))


# -- operations -----------------------------------------------------------------

def phi(A: PointSet, t: int = 1) -> PointSet:
    """Multiply by lambda^t: prefix every point with ``t`` zero coordinates."""
    if t < 1:
        raise ValueError("shift must be a positive integer")
    M = np.zeros((len(A), A.dim + t), dtype=np.int64)
    M[:, t:] = A.points
    return PointSet._wrap(M)


def minkowski(A: PointSet, B: PointSet, cap: int | None = DEFAULT_CAP) -> PointSet:
    """The sumset ``{a + b}``; the shorter set is zero padded.

    ``cap`` bounds the number of pairs enumerated (``None`` disables it).
    """
    if cap is not None and len(A) * len(B) > cap:
        raise CapExceeded(f"sumset of {len(A)} x {len(B)} points exceeds cap {cap}")
    d = max(A.dim, B.dim)
    X, Y = A.padded(d), B.padded(d)
    if len(X) < len(Y):
        X, Y = Y, X
    xlo, xhi = X.min(axis=0), X.max(axis=0)
    ylo, yhi = Y.min(axis=0), Y.max(axis=0)
    _check_range(
        min(int(a) + int(b) for a, b in zip(xlo, ylo)),
        max(int(a) + int(b) for a, b in zip(xhi, yhi)),
    )
    step = max(1, _CHUNK_ELEMS // (len(Y) * d))
    parts = []
    for i in range(0, len(X), step):
        S = (X[i : i + step, None, :] + Y[None, :, :]).reshape(-1, d)
        parts.append(_unique_rows(S))
    M = parts[0] if len(parts) == 1 else _unique_rows(np.concatenate(parts))
    return PointSet._wrap(M)


def dilate_sum(A: PointSet, cap: int | None = DEFAULT_CAP) -> PointSet:
    """``A + phi(A)``, the model of ``A + lambda*A``."""
    return minkowski(A, phi(A), cap=cap)


def iterated_sum(sets: Sequence[PointSet], cap: int | None = DEFAULT_CAP) -> PointSet:
    out = sets[0]
    for S in sets[1:]:
        out = minkowski(out, S, cap=cap)
    return out


def _integer_rank(rows: list[list[int]], width: int) -> int:
    """Rank over Q of integer vectors, by fraction-free elimination.

    Each incoming row is reduced against an echelon basis using integer
    cross-multiplication (``r <- p*r - r[c]*b``) followed by removal of the
    row content, so entries stay small and no division is ever inexact.
    """
    basis: list[tuple[int, list[int]]] = []  # (pivot column, row)
    for r in rows:
        r = list(r)
        for c, b in basis:
            if r[c]:
                p, f = b[c], r[c]
                r = [p * x - f * y for x, y in zip(r, b)]
                g = 0
                for x in r:
                    g = math.gcd(g, x)
                if g > 1:
                    r = [x // g for x in r]
        piv = next((j for j, x in enumerate(r) if x), None)
        if piv is None:
            continue
        basis.append((piv, r))
        if len(basis) == width:
            break
    return len(basis)


def affine_dim(A: PointSet) -> int:
    """Dimension of the affine hull of ``A`` (exact)."""
    M = A.points
    if len(M) == 1:
        return 0
    D = M[1:] - M[0]
    return _integer_rank([[int(v) for v in row] for row in D], A.dim)


def doubling_K(A: PointSet, cap: int | None = DEFAULT_CAP) -> Fraction:
    """``|A + phi(A)| / |A|`` as an exact rational."""
    return Fraction(len(dilate_sum(A, cap=cap)), len(A))
