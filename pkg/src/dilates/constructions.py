"""
Generators: the lattice-grid construction, progressions and random ideals.

The grid construction takes ``A = {sum_i a_i lambda^i : a in [n]^m}``.  Here
``[n]`` is realised as ``{0, ..., n-1}`` and the common factor lambda is
dropped, giving the box ``{0..n-1}^m`` in V_m.  Both changes are bijections
that commute with the sum structure, so ``|A|`` and ``|A + phi(A)|`` are
unchanged.
"""
from __future__ import annotations

import random
from itertools import product

import numpy as np

from .core import DEFAULT_CAP, PointSet, dilate_sum
from .errors import CapExceeded

#: largest set a generator will materialise
DEFAULT_SIZE_CAP = 10**6


def kl_grid(n: int, m: int, size_cap: int = DEFAULT_SIZE_CAP) -> PointSet:
    """The box ``{0, ..., n-1}^m``; compressed, of size ``n^m``."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    if n**m > size_cap:
        raise CapExceeded(f"grid of {n}^{m} points exceeds cap {size_cap}")
    axes = np.meshgrid(*[np.arange(n, dtype=np.int64)] * m, indexing="ij")
    return PointSet._wrap(np.stack([a.ravel() for a in axes], axis=1))


def kl_grid_dilate_size(n: int, m: int) -> int:
    """Closed form ``n^2 (2n-1)^(m-1)`` for ``|G + phi(G)|``, G = kl_grid(n, m).

    The sum ``(x_1, x_2 + y_1, ..., x_m + y_(m-1), y_m)`` has independent
    coordinates with ``n`` values at both ends and ``2n-1`` in between.  The
    tests validate it against direct enumeration for n <= 6, m <= 4.
    """
    return n * n * (2 * n - 1) ** (m - 1)


def ap(n: int) -> PointSet:
    """The progression ``{0, ..., n-1}`` in V_1; its dilate sum has ``n^2`` points."""
    if n < 1:
        raise ValueError("n must be positive")
    return PointSet._wrap(np.arange(n, dtype=np.int64)[:, None])


def addable_corners(members: set, d: int) -> list[tuple[int, ...]]:
    """Points outside a downward-closed set whose addition keeps it closed.

    Sorted, so that seeded random choices are reproducible.
    """
    out = set()
    for p in members:
        for j in range(d):
            q = p[:j] + (p[j] + 1,) + p[j + 1:]
            if q in members or q in out:
                continue
            if all(q[i] == 0 or q[:i] + (q[i] - 1,) + q[i + 1:] in members for i in range(d)):
                out.add(q)
    return sorted(out)


def removable_corners(members: set, d: int) -> list[tuple[int, ...]]:
    """Maximal points: removing one keeps the set downward closed."""
    out = []
    for p in members:
        if all(p[:j] + (p[j] + 1,) + p[j + 1:] not in members for j in range(d)):
            out.append(p)
    return sorted(out)


def random_ideal(n: int, d: int, seed: int = 0) -> PointSet:
    """A downward-closed set of ``n`` points in N^d, grown from the origin.

    Each step adds a uniformly chosen addable corner.  This is not uniform
    over ideals; it is meant for coverage in property tests.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    rng = random.Random(seed)
    members = {(0,) * d}
    frontier = set(addable_corners(members, d))
    while len(members) < n:
        c = rng.choice(sorted(frontier))
        members.add(c)
        frontier.discard(c)
        for j in range(d):
            q = c[:j] + (c[j] + 1,) + c[j + 1:]
            if all(q[i] == 0 or q[:i] + (q[i] - 1,) + q[i + 1:] in members for i in range(d)):
                frontier.add(q)
    return PointSet(sorted(members))


def cube_like_ideal(n: int, d: int) -> PointSet:
    """The first ``n`` points of N^d ordered by (max coordinate, sum, lex).

    Every predecessor of a point comes earlier in this order, so every prefix
    is downward closed; prefixes fill boxes as evenly as possible.
    """
    side = 1
    while side**d < n:
        side += 1
    pts = sorted(product(range(side), repeat=d), key=lambda p: (max(p), sum(p), p))
    return PointSet(pts[:n])


def kl_upper_envelope(m: int, exact_limit: int = 3, cap: int | None = DEFAULT_CAP):
    """Check ``|A + phi(A)| <= 2^((m+1)^2)`` for the grid with ``n = 2^m``.

    Up to ``m = exact_limit`` the sumset is enumerated (and compared with the
    closed form); beyond that the validated closed form is used.
    """
    from .oracles import Report

    if m < 1:
        raise ValueError("m must be positive")
    n = 2**m
    size = n**m
    bound = 2 ** ((m + 1) ** 2)
    formula = kl_grid_dilate_size(n, m)
    inputs = {"m": m, "n": n, "|A|": size, "closed_form": formula}
    if m <= exact_limit:
        value = len(dilate_sum(kl_grid(n, m), cap=cap))
        method = "enumerated"
        ok = value <= bound and value == formula
    else:
        value, method, ok = formula, "closed_form", formula <= bound
    inputs["method"] = method
    return Report("kl_envelope", value, bound, "<=", ok, bound - value, inputs=inputs)
