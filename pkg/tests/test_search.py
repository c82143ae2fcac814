import json
from itertools import product

import pytest
from sympy import partition

import bruteforce as bf
from dilates import CapExceeded, PointSet, dilate_sum, is_compressed, kl_grid
from dilates.search import (
    AnnealSchedule,
    SearchRecord,
    append_record,
    bounds_table,
    enumerate_ideals,
    exact_min,
    load_config,
    local_search,
    read_ledger,
    table_to_csv,
)


def padded(A, d):
    return sorted(tuple(p) + (0,) * (d - len(p)) for p in A.tuples())


class TestEnumerateIdeals:
    @pytest.mark.parametrize("n,d,count", [(3, 1, 1), (3, 2, 3), (3, 3, 6)])
    def test_small_counts(self, n, d, count):
        assert sum(1 for _ in enumerate_ideals(n, d)) == count

    @pytest.mark.parametrize("n,d", [(2, 2), (3, 3), (4, 2), (4, 3), (5, 2), (5, 3), (4, 4), (6, 2)])
    def test_against_box_filter(self, n, d):
        ours = sorted(padded(A, d) for A in enumerate_ideals(n, d))
        oracle = sorted(bf.ideals_by_box_filter(n, d))
        assert ours == oracle

    @pytest.mark.parametrize("n", range(1, 11))
    def test_two_dimensional_counts_are_partition_numbers(self, n):
        assert sum(1 for _ in enumerate_ideals(n, 2)) == partition(n)

    def test_plane_and_solid_partitions(self):
        # plane partitions of 10 and solid partitions of 10
        assert sum(1 for _ in enumerate_ideals(10, 3)) == 500
        assert sum(1 for _ in enumerate_ideals(10, 4)) == 3122

    def test_every_output_compressed_and_distinct(self):
        seen = set()
        for A in enumerate_ideals(7, 3):
            assert is_compressed(A) and len(A) == 7
            assert A not in seen
            seen.add(A)

    def test_caps(self):
        with pytest.raises(CapExceeded):
            next(enumerate_ideals(11, 2))
        with pytest.raises(CapExceeded):
            next(enumerate_ideals(3, 5))


class TestExactMin:
    def test_small_values(self):
        assert exact_min(1).best_value == 1
        r = exact_min(2)
        assert r.best_value == 4 and r.proven_optimal and r.dim_certified

    def test_three(self):
        oracle = min(len(bf.dilate(S)) for S in bf.ideals_by_box_filter(3, 4))
        r = exact_min(3)
        assert r.best_value == oracle == 8
        assert r.witness.tuples() == [(0, 0), (0, 1), (1, 0)]
        assert len(dilate_sum(PointSet([(0, 0), (1, 0), (0, 1)]))) == 8
        # d_max = 4 < floor(2 * 8/3) = 5, so a wider search is needed to certify
        assert not r.dim_certified
        wide = exact_min(3, d_max=6, max_d=6)
        assert wide.best_value == 8 and wide.dim_certified

    def test_witness_matches_value(self):
        for n in range(1, 8):
            r = exact_min(n)
            assert len(dilate_sum(r.witness)) == r.best_value and len(r.witness) == n

    def test_monotone_in_n(self):
        vals = [exact_min(n).best_value for n in range(1, 9)]
        assert vals == sorted(vals)
        assert all(2 * n - 1 <= v <= n * n for n, v in enumerate(vals, 1))

    def test_nonincreasing_in_dmax(self):
        for n in (4, 6):
            vals = [exact_min(n, d_max=d).best_value for d in range(1, 5)]
            assert vals == sorted(vals, reverse=True)

    def test_tie_break_is_lexicographic(self):
        r = exact_min(4)
        assert r.witness.tuples() == [(0, 0), (0, 1), (1, 0), (1, 1)]


class TestLocalSearch:
    def test_best_not_worse_than_start(self):
        start = PointSet([(0, 0), (0, 1), (1, 0), (1, 1)])
        r = local_search(4, 2, budget=50, seed=3, init=start)
        assert r.best_value <= len(dilate_sum(start))

    def test_grid_seed(self):
        G = kl_grid(2, 4)
        r = local_search(16, 4, budget=200, seed=5, init=G)
        assert r.best_value <= len(dilate_sum(G))
        assert len(dilate_sum(r.witness)) == r.best_value and len(r.witness) == 16
        assert is_compressed(r.witness)

    def test_deterministic(self):
        a = local_search(12, 3, budget=150, seed=9)
        b = local_search(12, 3, budget=150, seed=9)
        assert a.to_json() == b.to_json()

    def test_never_beats_exhaustive(self):
        for n in (5, 7, 9):
            best = exact_min(n, d_max=3, max_d=4).best_value
            for seed in range(3):
                assert local_search(n, 3, budget=150, seed=seed).best_value >= best

    def test_multiple_workers_deterministic(self):
        a = local_search(10, 3, budget=60, seed=1, workers=2)
        b = local_search(10, 3, budget=60, seed=1, workers=2)
        assert a.to_json() == b.to_json()
        single = [local_search(10, 3, budget=60, seed=s).best_value for s in (1, 2)]
        assert a.best_value == min(single)

    def test_rejects_bad_init(self):
        from dilates import PreconditionError

        with pytest.raises(PreconditionError):
            local_search(3, 2, init=PointSet([(0, 0), (0, 2), (1, 0)]))
        with pytest.raises(PreconditionError):
            local_search(4, 2, init=PointSet([(0, 0), (0, 1), (1, 0)]))

    def test_single_point(self):
        assert local_search(1, 2, budget=10).best_value == 1


class TestRecordsAndTables:
    def test_ledger_roundtrip(self, tmp_path):
        path = tmp_path / "ledger.jsonl"
        r1, r2 = exact_min(2), local_search(6, 2, budget=20, seed=4)
        append_record(path, r1)
        append_record(path, r2)
        back = read_ledger(path)
        assert [b.to_json() for b in back] == [r1.to_json(), r2.to_json()]
        assert "wall_time" not in json.loads(r1.to_json())
        assert "wall_time" in json.loads(r1.to_json(timing=True))

    def test_table_rows(self):
        rows = bounds_table([1, 2, 4])
        assert [r["best"] for r in rows] == [1, 4, 12]
        assert [r["floor_2n_minus_1"] for r in rows] == [1, 3, 7]
        assert rows[1]["proven_optimal"]
        assert rows[2]["best"] == exact_min(4).best_value

    def test_table_uses_records_and_local(self):
        rec = local_search(12, 3, budget=40, seed=0)
        rows = bounds_table([12], records=[rec], exhaustive_limit=10, budget=40)
        assert rows[0]["best"] <= rec.best_value and rows[0]["method"] == "local"

    def test_csv(self):
        text = table_to_csv(bounds_table([1, 2]))
        lines = text.splitlines()
        assert lines[0].startswith("n,best,d,method")
        assert lines[1].startswith("1,1,")

    def test_config(self, tmp_path):
        cfg = tmp_path / "anneal.cfg"
        cfg.write_text("# schedule\nt0 = 3.5\ncooling=0.9\nbudget = 40\nname = x\n")
        values = load_config(cfg)
        assert values == {"t0": 3.5, "cooling": 0.9, "budget": 40, "name": "x"}
        s = AnnealSchedule.from_config(values)
        assert s.t0 == 3.5 and s.cooling == 0.9 and s.temperature(10**6) == s.t_min

    def test_record_from_json(self):
        r = exact_min(3)
        back = SearchRecord.from_json(r.to_json())
        assert back.witness == r.witness and back.best_value == 8
