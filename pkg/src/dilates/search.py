"""
Extremal search for D(n) = min |A + phi(A)| over n-point sets A.

Compression never increases |A + phi(A)| and preserves |A|, so the minimum is
attained on a downward-closed set (an order ideal of N^d); dimension
reduction further gives a minimiser with d <= 2K where K = D(n)/n.  The search
therefore ranges over order ideals only:

* ``exact_min`` enumerates every ideal with ``n`` points in N^d_max;
* ``local_search`` anneals over ideals with size-preserving corner moves.

Results are :class:`SearchRecord` objects, stored one JSON object per line in
an append-only ledger.
"""
from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterator, Sequence

from .constructions import addable_corners, cube_like_ideal, removable_corners
from .core import PointSet, dilate_sum, serialize_set
from .errors import CapExceeded, PreconditionError
from .oracles import lower_bound_value

ENUM_MAX_N = 10
ENUM_MAX_D = 4
DEFAULT_CPRIME = 3 * math.sqrt(math.log(2))


@dataclass
class SearchRecord:
    n: int
    d: int
    best_value: int
    witness: PointSet
    method: str
    seed: int | None = None
    proven_optimal: bool = False
    d_max: int | None = None
    dim_certified: bool = False
    wall_time: float | None = None

    @property
    def K(self) -> float:
        return self.best_value / self.n

    def to_json(self, timing: bool = False) -> str:
        rec = asdict(self)
        rec["witness"] = [list(p) for p in self.witness.tuples()]
        if not timing:
            rec.pop("wall_time")
        return json.dumps(rec, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "SearchRecord":
        rec = json.loads(line)
        rec["witness"] = PointSet(rec["witness"])
        rec.setdefault("wall_time", None)
        return cls(**rec)


def append_record(path, record: SearchRecord, timing: bool = False) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(record.to_json(timing) + "\n")


def read_ledger(path) -> list[SearchRecord]:
    with open(path, encoding="utf-8") as fh:
        return [SearchRecord.from_json(line) for line in fh if line.strip()]


def dilate_size(A: PointSet) -> int:
    return len(dilate_sum(A, cap=None))


# -- exhaustive mode ------------------------------------------------------------

def _last_maximal(members: set, d: int) -> tuple[int, ...]:
    return removable_corners(members, d)[-1]


def enumerate_ideals(n: int, d: int, max_n: int = ENUM_MAX_N,
                     max_d: int = ENUM_MAX_D) -> Iterator[PointSet]:
    """Every downward-closed ``n``-point subset of N^d, each exactly once.

    Reverse search: the parent of an ideal drops its lexicographically largest
    maximal point, and a child is kept only when the added corner is that
    point.  Each ideal has exactly one parent, so no deduplication table is
    needed.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    if n > max_n or d > max_d:
        raise CapExceeded(f"enumeration of (n={n}, d={d}) exceeds caps ({max_n}, {max_d})")
    members = {(0,) * d}

    def grow(size: int) -> Iterator[PointSet]:
        if size == n:
            yield PointSet(sorted(members))
            return
        for c in addable_corners(members, d):
            members.add(c)
            if _last_maximal(members, d) == c:
                yield from grow(size + 1)
            members.remove(c)

    yield from grow(1)


def exact_min(n: int, d_max: int = ENUM_MAX_D, max_n: int = ENUM_MAX_N,
              max_d: int = ENUM_MAX_D) -> SearchRecord:
    """Minimum of ``|A + phi(A)|`` over all ideals of size ``n`` in N^d_max.

    Ties go to the lexicographically least serialisation.  ``dim_certified``
    is set when ``d_max >= floor(2K)`` for the optimum found: any better set
    would reduce to an ideal of dimension at most ``2K``, which was searched.
    """
    t0 = time.perf_counter()
    best = None
    for A in enumerate_ideals(n, d_max, max_n=max_n, max_d=max_d):
        key = (dilate_size(A), serialize_set(A))
        if best is None or key < best[0]:
            best = (key, A)
    (value, _), W = best
    return SearchRecord(
        n=n, d=W.dim, best_value=value, witness=W, method="exhaustive",
        proven_optimal=True, d_max=d_max,
        dim_certified=d_max >= (2 * value) // n,
        wall_time=time.perf_counter() - t0,
    )


# -- local search ----------------------------------------------------------------

@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric cooling ``T_i = max(t_min, t0 * cooling^i)``."""

    t0: float = 2.0
    cooling: float = 0.995
    t_min: float = 0.01

    def temperature(self, i: int) -> float:
        return max(self.t_min, self.t0 * self.cooling**i)

    @classmethod
    def from_config(cls, cfg: dict) -> "AnnealSchedule":
        keys = {"t0", "cooling", "t_min"}
        return cls(**{k: float(v) for k, v in cfg.items() if k in keys})


def _value(members: set) -> int:
    return dilate_size(PointSet(sorted(members)))


def _anneal(n: int, d: int, budget: int, seed: int, schedule: AnnealSchedule,
            init: PointSet | None) -> tuple[int, list]:
    rng = random.Random(seed)
    start = init if init is not None else cube_like_ideal(n, d)
    if len(start) != n:
        raise PreconditionError(f"initial set has {len(start)} points, expected {n}")
    if start.dim > d:
        raise PreconditionError(f"initial set has dim {start.dim} > {d}")
    members = {tuple(int(v) for v in row) for row in start.padded(d)}
    if not PointSet(sorted(members)) == start or not _is_ideal(members, d):
        raise PreconditionError("initial set must be downward closed")
    val = _value(members)
    best_val, best = val, sorted(members)
    for i in range(budget):
        temp = schedule.temperature(i)
        r = rng.choice(removable_corners(members, d))
        members.remove(r)
        adds = [c for c in addable_corners(members, d) if c != r] if members else []
        if not adds:
            members.add(r)
            continue
        a = rng.choice(adds)
        members.add(a)
        new = _value(members)
        delta = new - val
        if delta <= 0 or rng.random() < math.exp(-delta / temp):
            val = new
            if new < best_val:
                best_val, best = new, sorted(members)
        else:
            members.remove(a)
            members.add(r)
    return best_val, best


def _is_ideal(members: set, d: int) -> bool:
    for p in members:
        for j in range(d):
            if p[j] < 0 or (p[j] > 0 and p[:j] + (p[j] - 1,) + p[j + 1:] not in members):
                return False
    return True


def local_search(n: int, d: int, budget: int = 2000, seed: int = 0,
                 schedule: AnnealSchedule | None = None, init: PointSet | None = None,
                 workers: int = 1) -> SearchRecord:
    """Simulated annealing over ``n``-point ideals in N^d.

    A move removes a maximal point and adds a different addable corner, so
    size and downward closure are preserved.  Worker ``i`` uses seed
    ``seed + i``; the result is the best over workers with ties broken by
    serialisation, so the outcome does not depend on scheduling.
    """
    schedule = schedule or AnnealSchedule()
    t0 = time.perf_counter()
    seeds = [seed + i for i in range(max(1, workers))]
    args = [(n, d, budget, s, schedule, init) for s in seeds]
    if len(seeds) == 1:
        results = [_anneal(*args[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(seeds)) as pool:
            results = list(pool.map(_anneal, *zip(*args)))
    best_val, best = min(results, key=lambda r: (r[0], serialize_set(PointSet(r[1]))))
    W = PointSet(best)
    return SearchRecord(n=n, d=W.dim, best_value=best_val, witness=W,
                        method="local", seed=seed, wall_time=time.perf_counter() - t0)


# -- tables ----------------------------------------------------------------------

TABLE_COLUMNS = ["n", "best", "d", "method", "proven_optimal", "dim_certified",
                 "floor_2n_minus_1", "ap_n_squared", "lower_env", "upper_env"]


def bounds_table(n_list: Sequence[int], c: float = 0.1, cprime: float = DEFAULT_CPRIME,
                 records: Sequence[SearchRecord] = (), d_max: int = ENUM_MAX_D,
                 exhaustive_limit: int = ENUM_MAX_N, budget: int = 2000, seed: int = 0,
                 schedule: AnnealSchedule | None = None) -> list[dict]:
    """Best-known ``D(n)`` next to the trivial floor and the two envelopes.

    Existing ``records`` are reused; missing sizes are computed exhaustively
    up to ``exhaustive_limit`` and by local search beyond.  The envelope
    columns ``exp(c sqrt(ln n)) n`` are floats and purely informational.
    """
    rows = []
    for n in n_list:
        pool = [r for r in records if r.n == n]
        if not any(r.proven_optimal for r in pool):
            if n <= exhaustive_limit:
                pool.append(exact_min(n, d_max))
            else:
                pool.append(local_search(n, d_max, budget=budget, seed=seed, schedule=schedule))
        best = min(pool, key=lambda r: (r.best_value, not r.proven_optimal,
                                        serialize_set(r.witness)))
        rows.append({
            "n": n,
            "best": best.best_value,
            "d": best.d,
            "method": best.method,
            "proven_optimal": best.proven_optimal,
            "dim_certified": best.dim_certified,
            "floor_2n_minus_1": 2 * n - 1,
            "ap_n_squared": n * n,
            "lower_env": lower_bound_value(n, c),
            "upper_env": lower_bound_value(n, cprime),
        })
    return rows


def table_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def load_config(path) -> dict:
    """Plain ``key = value`` file; ``#`` comments.  Numeric values are parsed."""
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            val = val.strip()
            try:
                cfg[key.strip()] = int(val)
            except ValueError:
                try:
                    cfg[key.strip()] = float(val)
                except ValueError:
                    cfg[key.strip()] = val
    return cfg
