"""
Exact verifiers for the inequalities behind the lower bound on |A + phi(A)|.

Every ``check_*`` function returns a :class:`Report`.  Since each checked
statement is a theorem, ``passed=False`` always means a bug somewhere in this
package, and the report carries a witness to debug it.

Comparisons are exact.  Irrational right-hand sides (``N^(k/(k+1))`` or the
d-th roots in the Brunn-Minkowski bound) are bracketed between rationals
obtained from integer roots; a verdict is only "certified" when the bracket
lies on one side of the left-hand side, otherwise ``review`` is set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .compression import (
    IndexSet,
    _members,
    alpha,
    is_compressed,
    project,
    projection_sizes,
    reduce_dim,
    shift_index_set,
)
from .core import DEFAULT_CAP, PointSet, affine_dim, dilate_sum, minkowski, phi
from .errors import CapExceeded, IndexOutOfRange, PreconditionError

#: largest dimension for which 2^d projections are enumerated
MAX_PROJECTION_DIM = 20
MAX_ALPHA_COUNT = 25


@dataclass(frozen=True)
class Report:
    """Outcome of one verifier.

    ``relation`` reads ``lhs <relation> rhs``.  ``exact`` is False when the
    displayed numbers are floats; ``review`` marks a comparison that could not
    be certified with the rational brackets in use.
    """

    claim: str
    lhs: Any
    rhs: Any
    relation: str
    passed: bool
    slack: Any = None
    inputs: dict = field(default_factory=dict)
    exact: bool = True
    review: bool = False
    witness: Any = None
    steps: tuple = ()

    def to_dict(self) -> dict:
        out = {
            "claim": self.claim,
            "passed": self.passed,
            "lhs": _jsonable(self.lhs),
            "relation": self.relation,
            "rhs": _jsonable(self.rhs),
            "slack": _jsonable(self.slack),
            "exact": self.exact,
            "review": self.review,
            "inputs": _jsonable(self.inputs),
        }
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.steps:
            out["steps"] = [s.to_dict() for s in self.steps]
        return out

    def to_text(self, indent: int = 0) -> str:
        tag = "PASS" if self.passed else "FAIL"
        flags = "" if self.exact else " [float]"
        if self.review:
            flags += " [review]"
        info = ", ".join(f"{k}={_short(v)}" for k, v in self.inputs.items())
        line = (
            f"{' ' * indent}{tag} {self.claim}: {_short(self.lhs)} {self.relation} "
            f"{_short(self.rhs)} (slack {_short(self.slack)}){flags}"
        )
        if info:
            line += f"  [{info}]"
        if self.witness is not None and not self.passed:
            line += f"  witness={_short(self.witness)}"
        lines = [line]
        lines += [s.to_text(indent + 2) for s in self.steps]
        return "\n".join(lines)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, PointSet):
        return [list(p) for p in v.tuples()]
    if isinstance(v, IndexSet):
        return sorted(v.members)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (set, frozenset)):
        return sorted(_jsonable(x) for x in v)
    return v


def _short(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, int) and abs(v) >= 10**15:
        return f"~{float(v):.6g}"
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return _short(v.numerator)
        return f"{v} (~{float(v):.6g})" if len(str(v)) < 30 else f"~{float(v):.6g}"
    if isinstance(v, (list, tuple)) and len(v) > 12:
        return "[" + ", ".join(_short(x) for x in v[:12]) + ", ...]"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    return str(v)


def _compare(claim, lhs, rhs, relation, **kw) -> Report:
    if relation == "<=":
        ok, slack = lhs <= rhs, rhs - lhs
    elif relation == ">=":
        ok, slack = lhs >= rhs, lhs - rhs
    else:
        ok, slack = lhs == rhs, 0 if lhs == rhs else None
    return Report(claim, lhs, rhs, relation, bool(ok), slack, **kw)


# -- rational root brackets --------------------------------------------------

def iroot(n: int, r: int) -> int:
    """Floor of the ``r``-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if n < 2 or r == 1:
        return n
    x = 1 << -(-n.bit_length() // r)
    while True:
        y = ((r - 1) * x + n // x ** (r - 1)) // r
        if y >= x:
            break
        x = y
    while x**r > n:
        x -= 1
    while (x + 1) ** r <= n:
        x += 1
    return x


def root_bracket(x: Fraction, r: int, digits: int = 30) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= x^(1/r) <= hi`` with ``hi - lo <= 10^-digits``.

    ``lo == hi`` exactly when the root is one of the grid values.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("root of a negative number")
    scale = 10**digits
    num = x.numerator * scale**r
    t = iroot(num // x.denominator, r)
    lo = Fraction(t, scale)
    hi = lo if lo**r == x else Fraction(t + 1, scale)
    return lo, hi


def _exact_root(x: Fraction, r: int) -> Fraction | None:
    p, q = iroot(x.numerator, r), iroot(x.denominator, r)
    if p**r == x.numerator and q**r == x.denominator:
        return Fraction(p, q)
    return None


# -- individual checks ---------------------------------------------------------

def check_discbm(A: PointSet, B: PointSet, max_dim: int = MAX_PROJECTION_DIM,
                 cap: int | None = DEFAULT_CAP) -> Report:
    """Sum over ``I`` of ``|p_I(A+B)|`` against ``(|A|^(1/d) + |B|^(1/d))^d``."""
    d = max(A.dim, B.dim)
    if d > max_dim:
        raise CapExceeded(f"dimension {d} above projection cap {max_dim}")
    S = minkowski(A, B, cap=cap)
    lhs = int(projection_sizes(S.padded(d)).sum())
    a, b = Fraction(len(A)), Fraction(len(B))
    inputs = {"|A|": len(A), "|B|": len(B), "d": d, "|A+B|": len(S)}
    # (a^(1/d) + b^(1/d))^d = b (1 + (a/b)^(1/d))^d, rational when a/b is a d-th power
    ratio = _exact_root(a / b, d)
    if ratio is not None:
        return _compare("discbm", lhs, b * (1 + ratio) ** d, ">=", inputs=inputs)
    for digits in (30, 60, 120):
        la, ha = root_bracket(a, d, digits)
        lb, hb = root_bracket(b, d, digits)
        lo, hi = (la + lb) ** d, (ha + hb) ** d
        if lhs >= hi or lhs < lo:
            break
    approx = float((lo + hi) / 2)
    return Report("discbm", lhs, approx, ">=", passed=lhs >= lo, slack=lhs - approx,
                  inputs=inputs, exact=False, review=lo <= lhs < hi)


def check_hdsums(A: PointSet, B: PointSet, cap: int | None = DEFAULT_CAP) -> Report:
    """``|A+B| >= |A| + d|B| - d(d+1)/2`` with ``d = dim(A+B)`` and ``|A| >= |B|``."""
    if len(A) < len(B):
        A, B = B, A
    S = minkowski(A, B, cap=cap)
    d = affine_dim(S)
    rhs = len(A) + d * len(B) - d * (d + 1) // 2
    return _compare("hdsums", len(S), rhs, ">=",
                    inputs={"|A|": len(A), "|B|": len(B), "d": d})


def check_ruzsa_triangle(X: PointSet, Y: PointSet, Z: PointSet,
                         cap: int | None = DEFAULT_CAP) -> Report:
    """``|X||Y+Z| <= |X+Y||X+Z|``."""
    yz = len(minkowski(Y, Z, cap=cap))
    xy = len(minkowski(X, Y, cap=cap))
    xz = len(minkowski(X, Z, cap=cap))
    return _compare("ruzsa_triangle", len(X) * yz, xy * xz, "<=",
                    inputs={"|X|": len(X), "|Y+Z|": yz, "|X+Y|": xy, "|X+Z|": xz})


def check_pr_chain(A: PointSet, cap: int | None = DEFAULT_CAP) -> Report:
    """Replay the chain ending in ``|(A+phi A) + phi(A+phi A)| <= K^10 |A|``.

    Intermediate bounds: ``|A+A| <= K^2 n``, ``|4A| <= K^8 n`` and
    ``|A + 3 phi(A)| <= K^9 n``, plus the three triangle inequalities used to
    derive them.  The Plunnecke-Ruzsa step is checked, not re-proved.
    """
    n = len(A)
    P = phi(A)
    S = minkowski(A, P, cap=cap)
    K = Fraction(len(S), n)
    AA = minkowski(A, A, cap=cap)
    AAA = minkowski(AA, A, cap=cap)
    AAAA = minkowski(AA, AA, cap=cap)
    APPP = minkowski(A, phi(AAA), cap=cap)
    APP = minkowski(A, phi(AA), cap=cap)
    final = dilate_sum(S, cap=cap)
    steps = (
        check_ruzsa_triangle(P, A, A, cap=cap),
        _compare("sum_AA", len(AA), K**2 * n, "<="),
        _compare("sum_4A", len(AAAA), K**8 * n, "<="),
        check_ruzsa_triangle(P, A, phi(AAA), cap=cap),
        _compare("sum_A_3phiA", len(APPP), K**9 * n, "<="),
        check_ruzsa_triangle(P, APP, phi(A, 2), cap=cap),
        _compare("sum_B_phiB", len(final), K**10 * n, "<="),
    )
    ok = all(s.passed for s in steps)
    return Report("pr_chain", len(final), K**10 * n, "<=", ok, K**10 * n - len(final),
                  inputs={"n": n, "K": K, "N": len(final)}, steps=steps)


def _alpha_of_mask(mask: int) -> int:
    k = 0
    while mask:
        mask &= mask >> 1
        k += 1
    return k


def check_projection_bound(A: PointSet, I=None, N=None, arity: int | None = None,
                           max_dim: int = MAX_PROJECTION_DIM,
                           cap: int | None = DEFAULT_CAP) -> Report:
    """``|p_I(A)|^(k+1) <= N^k`` with ``k = alpha(I)`` for a compressed ``A``.

    ``N`` defaults to ``|A + phi(A)|``; a larger rational (such as ``K^10 n``)
    may be supplied instead.  Without ``I`` every subset of ``[arity]`` is
    checked, ``arity`` defaulting to ``dim(A)``.
    """
    if not is_compressed(A):
        raise PreconditionError("projection bound requires a compressed set")
    m = A.dim if arity is None else arity
    if m < A.dim:
        raise IndexOutOfRange(f"arity {m} below dim {A.dim}")
    if N is None:
        N = len(dilate_sum(A, cap=cap))
    if I is not None:
        if any(not 1 <= j <= m for j in _members(I)):
            raise IndexOutOfRange(f"index set outside [1, {m}]")
        masks = [sum(1 << (j - 1) for j in _members(I))]
        sizes = None
    else:
        if m > max_dim:
            raise CapExceeded(f"dimension {m} above projection cap {max_dim}")
        masks = range(1 << m)
        sizes = projection_sizes(A.points)
    low = (1 << A.dim) - 1
    worst = None
    witness = None
    for mask in masks:
        k = _alpha_of_mask(mask)
        if sizes is not None:
            p = int(sizes[mask & low])
        else:
            p = len(project(A, [j + 1 for j in range(A.dim) if mask >> j & 1]))
        lhs, rhs = p ** (k + 1), Fraction(N) ** k
        gap = rhs - lhs
        if worst is None or gap < worst:
            worst = gap
        if lhs > rhs and witness is None:
            witness = {"I": [j + 1 for j in range(m) if mask >> j & 1], "|p_I|": p, "k": k}
    return Report("projection_bound", "|p_I(A)|^(k+1)", "N^k", "<=", witness is None, worst,
                  inputs={"n": len(A), "d": m, "N": N, "checked": len(masks)}, witness=witness)


def _isin_rows(Q: np.ndarray, R: np.ndarray) -> np.ndarray:
    both = np.concatenate([Q, R])
    lo = both.min(axis=0)
    spans = [int(h) - int(l) + 1 for l, h in zip(lo, both.max(axis=0))]
    if math.prod(spans) < (1 << 62):
        strides = np.ones(len(spans), dtype=np.int64)
        for j in range(len(spans) - 2, -1, -1):
            strides[j] = strides[j + 1] * spans[j + 1]
        return np.isin(((Q - lo) * strides).sum(axis=1), ((R - lo) * strides).sum(axis=1))
    ref = {tuple(r) for r in R.tolist()}
    return np.array([tuple(q) in ref for q in Q.tolist()], dtype=bool)


def check_injection_claim(A: PointSet, J1, J2, cap: int | None = DEFAULT_CAP) -> Report:
    """Materialise ``(x, y) -> (p_J(x), x + phi(y))`` with ``J = J1 & (J2 + 1)``.

    Checks that images land in ``p_J(A) x (A + phi(A))``, that the map is
    injective, and that ``|p_J1(A)| |p_J2(A)| <= N |p_J(A)|``.
    """
    if not is_compressed(A):
        raise PreconditionError("injection claim requires a compressed set")
    d = A.dim
    J1, J2 = IndexSet(_members(J1), d), IndexSet(_members(J2), d)
    J = J1 & IndexSet(shift_index_set(J2).members, d + 1)
    X = project(A, J1).padded(d)
    Y = project(A, J2).padded(d)
    PJ = project(A, J)
    D = dilate_sum(A, cap=cap)
    N = len(D)
    keep = np.zeros(d, dtype=bool)
    keep[[j - 1 for j in J.members]] = True
    first = np.where(keep, X, 0)
    nx, ny = len(X), len(Y)
    if cap is not None and nx * ny > cap:
        raise CapExceeded(f"{nx * ny} pairs exceed cap {cap}")
    Xp = np.zeros((nx, d + 1), dtype=np.int64)
    Xp[:, :d] = X
    Yp = np.zeros((ny, d + 1), dtype=np.int64)
    Yp[:, 1:] = Y
    second = (Xp[:, None, :] + Yp[None, :, :]).reshape(-1, d + 1)
    first_rep = np.repeat(first, ny, axis=0)
    in_first = _isin_rows(first, PJ.padded(d))
    in_second = _isin_rows(second, D.padded(d + 1))
    images = np.concatenate([first_rep, second], axis=1)
    distinct = len(PointSet._wrap(images)) if len(images) else 0
    lands = bool(in_first.all() and in_second.all())
    injective = distinct == nx * ny
    lhs, rhs = nx * ny, N * len(PJ)
    ok = lands and injective and lhs <= rhs
    witness = None
    if not ok:
        witness = {"lands_in_codomain": lands, "injective": injective,
                   "distinct_images": distinct}
    return Report("injection", lhs, rhs, "<=", ok, rhs - lhs,
                  inputs={"J1": sorted(J1.members), "J2": sorted(J2.members),
                          "J": sorted(J.members), "N": N, "|p_J(A)|": len(PJ),
                          "image_size": distinct},
                  witness=witness)


def alpha_histogram(m: int) -> list[int]:
    """``h[k] = #{I subset of [m] : alpha(I) = k}`` by enumeration of bitmasks."""
    if m > MAX_ALPHA_COUNT:
        raise CapExceeded(f"m={m} above enumeration cap {MAX_ALPHA_COUNT}")
    hist = np.zeros(m + 1, dtype=np.int64)
    chunk = 1 << 20
    for start in range(0, 1 << m, chunk):
        cur = np.arange(start, min(start + chunk, 1 << m), dtype=np.int64)
        a = np.zeros(cur.size, dtype=np.int64)
        while cur.any():
            a += cur != 0
            cur = cur & (cur >> 1)
        hist += np.bincount(a, minlength=m + 1)
    return [int(v) for v in hist]


def count_by_alpha(m: int) -> tuple[list[int], Report]:
    """Histogram of ``alpha`` over subsets of ``[m]`` and the bound ``(m+1) 2^(m-k)``."""
    if m < 1:
        raise ValueError("m must be positive")
    hist = alpha_histogram(m)
    bounds = [(m + 1) * 2 ** (m - k) for k in range(m + 1)]
    total_ok = sum(hist) == 2**m
    over = [k for k in range(m + 1) if hist[k] > bounds[k]]
    slack = min(b - h for b, h in zip(bounds, hist))
    rep = Report("alpha_count", hist, bounds, "<=", total_ok and not over, slack,
                 inputs={"m": m, "total": sum(hist)},
                 witness={"k": over} if over else None)
    return hist, rep


def lower_bound_value(n: int, c: float = 0.1) -> float:
    """``exp(c sqrt(ln n)) * n`` in double precision (informational only)."""
    if n < 1:
        raise ValueError("n must be positive")
    return math.exp(c * math.sqrt(math.log(n))) * n


def upper_bound_value(n: int, cprime: float) -> float:
    return lower_bound_value(n, cprime)


# -- proof tracer --------------------------------------------------------------

def theorem_trace(A: PointSet, max_dim: int = MAX_PROJECTION_DIM,
                  cap: int | None = DEFAULT_CAP) -> list[Report]:
    """Replay the lower-bound argument on a concrete set.

    Steps: reduction to a compressed low-dimensional set, ``d <= 2K``, the
    K^10 chain, compression of ``B = A + phi(A)``, the projection bounds on
    ``B``, the Brunn-Minkowski sandwich over ``I subset of [d+1]``, the alpha
    counting bound, and the float relaxations ending in the AM-GM step.
    """
    n = len(A)
    A1 = reduce_dim(A)
    D0, D1 = dilate_sum(A, cap=cap), dilate_sum(A1, cap=cap)
    K = Fraction(len(D1), n)
    d = A1.dim
    m = d + 1
    logn = math.log(n)
    c_eff = math.log(K) / math.sqrt(logn) if n > 1 else None
    out: list[Report] = []

    ok = len(A1) == n and is_compressed(A1)
    out.append(Report("reduce_dim", len(D1), len(D0), "<=", ok and len(D1) <= len(D0),
                      len(D0) - len(D1),
                      inputs={"n": n, "|A1|": len(A1), "d_in": A.dim, "d": d,
                              "compressed": is_compressed(A1)}))
    out.append(_compare("dim_bound", Fraction(d), 2 * K, "<=",
                        inputs={"d": d, "K": K, "c_eff": c_eff}))
    if n > 1:
        out.append(_compare("full_dimension", (affine_dim(A1), affine_dim(D1)), (d, d + 1), "==",
                            inputs={"d": d}))
    out.append(check_hdsums(A1, phi(A1), cap=cap))

    chain = check_pr_chain(A1, cap=cap)
    out.append(chain)
    N = chain.inputs["N"]
    X = K**10 * n
    B = D1
    out.append(_compare("B_compressed", is_compressed(B), True, "==", inputs={"|B|": len(B)}))
    if m > max_dim:
        raise CapExceeded(f"dimension {m} above projection cap {max_dim}")
    out.append(replace(check_projection_bound(B, N=N, arity=m, cap=cap), claim="projection_bound_N"))
    out.append(replace(check_projection_bound(B, N=X, arity=m, cap=cap), claim="projection_bound_K10"))

    sizes = projection_sizes(B.padded(m))
    total = int(sizes.sum())
    out.append(_compare("bm_lower", 2**m * n, total, "<=", inputs={"m": m, "n": n}))

    hist, hrep = count_by_alpha(m)
    out.append(hrep)
    bounds = hrep.rhs

    # X^(k/(k+1)) bracketed by rationals
    brackets = [root_bracket(X**k, k + 1, 30) for k in range(m + 1)]
    by_alpha = [0] * (m + 1)
    for mask in range(1 << m):
        by_alpha[_alpha_of_mask(mask)] += int(sizes[mask])
    rhs_lo = sum(h * lo for h, (lo, _) in zip(hist, brackets))
    rhs_hi = sum(h * hi for h, (_, hi) in zip(hist, brackets))
    out.append(Report("alpha_sum", total, float(rhs_lo), "<=", total <= rhs_hi,
                      rhs_lo - total, inputs={"X=K^10 n": X}, exact=False,
                      review=rhs_lo < total <= rhs_hi))
    cnt_lo = sum(b * lo for b, (lo, _) in zip(bounds, brackets))
    gap_lo = sum((b - h) * lo for b, h, (lo, _) in zip(bounds, hist, brackets))
    out.append(Report("counting_bound", float(rhs_lo), float(cnt_lo), "<=", gap_lo >= 0,
                      gap_lo, exact=False))

    # float relaxations, normalised by 2^m n
    Kf = float(K)
    l2 = math.log(2)
    s1_terms = [(m + 1) * 2.0**-k * Kf ** (10 * k / (k + 1)) * n ** (-1 / (k + 1))
                for k in range(m + 1)]
    s1 = math.fsum(s1_terms)
    out.append(Report("normalised", 1.0, s1, "<=", s1 >= 1.0, s1 - 1.0, exact=False))
    gaps = [(m + 1) * 2.0**-k * n ** (-1 / (k + 1)) * (Kf**10 - Kf ** (10 * k / (k + 1)))
            for k in range(m + 1)]
    s2 = 2 * (m + 1) * math.fsum(2.0 ** (-k - 1) * Kf**10 * n ** (-1 / (k + 1))
                                 for k in range(m + 1))
    out.append(Report("K_power_relax", s1, s2, "<=", min(gaps) >= 0, math.fsum(gaps), exact=False))
    am = []
    for k in range(m + 1):
        a, b = (k + 1) * l2, logn / (k + 1)
        am.append((math.sqrt(a) - math.sqrt(b)) ** 2)
    worst_am = min(am)
    out.append(Report("am_gm", "(k+1)log2 + log(n)/(k+1)", "2 sqrt(log2 log n)", ">=",
                      worst_am >= 0, worst_am, exact=False, inputs={"k_range": [0, m]}))
    e0 = math.exp(-2 * math.sqrt(l2 * logn))
    s3 = 2 * (m + 1) ** 2 * Kf**10 * e0
    gaps3 = [2 * (m + 1) * Kf**10 * e0 * -math.expm1(-g) for g in am]
    out.append(Report("am_gm_sum", s2, s3, "<=", min(gaps3) >= 0, math.fsum(gaps3), exact=False))
    return out


def trace_passed(reports: Sequence[Report]) -> bool:
    return all(r.passed for r in reports)
