import io
import json
import subprocess
import sys

import pytest

from dilates import PointSet, kl_grid, parse_set, read_set, write_set
from dilates import oracles
from dilates.cli import run
from dilates.oracles import Report


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, A in [("ap2", PointSet([(0,), (1,)])), ("grid", kl_grid(2, 2)),
                    ("raw", PointSet([(0, 1)])), ("gap", PointSet([(0,), (2,)]))]:
        paths[name] = tmp_path / f"{name}.pts"
        write_set(A, paths[name])
    return paths


class TestSetCommands:
    def test_dilate(self, files):
        code, out, _ = call("dilate", files["ap2"])
        assert code == 0 and len(parse_set(out)) == 4

    def test_sumset_and_roundtrip(self, files, tmp_path):
        target = tmp_path / "s.pts"
        code, out, _ = call("sumset", files["grid"], files["ap2"], "--out", target)
        assert code == 0 and out == ""
        assert read_set(target) == PointSet([(a, b) for a in range(3) for b in range(2)])

    def test_compress_and_reduce(self, files):
        assert parse_set(call("compress", files["gap"])[1]) == PointSet([(0,), (1,)])
        assert parse_set(call("reduce", files["raw"])[1]) == PointSet([(0,)])

    def test_formats(self, files):
        code, out, _ = call("dilate", files["ap2"], "--format", "jsonl")
        assert code == 0 and json.loads(out)["size"] == 4
        code, out, _ = call("dilate", files["ap2"], "--format", "csv")
        assert out.splitlines() == ["0,0", "0,1", "1,0", "1,1"]

    def test_construct_roundtrip(self, tmp_path):
        target = tmp_path / "g.pts"
        assert call("construct", "grid", "--n", 3, "--m", 2, "--out", target)[0] == 0
        assert read_set(target) == kl_grid(3, 2)
        code, out, _ = call("construct", "ideal", "--n", 9, "--d", 3, "--seed", 4)
        assert code == 0 and len(parse_set(out)) == 9
        assert call("construct", "ap", "--n", 5)[1] == "0\n1\n2\n3\n4\n"

    def test_bound(self):
        code, out, _ = call("bound", 50, 0.0)
        assert code == 0 and float(out) == 50.0


class TestVerify:
    @pytest.mark.parametrize("argv", [
        ("discbm", "grid", "ap2"), ("hdsums", "grid", "grid"), ("triangle", "ap2", "grid", "ap2"),
        ("prchain", "grid"), ("trace", "grid"), ("projbound", "grid"),
    ])
    def test_passes(self, files, argv):
        code, out, _ = call("verify", argv[0], *[files[a] for a in argv[1:]])
        assert code == 0 and out.startswith("PASS")

    def test_projbound_index_and_injection(self, files):
        assert call("verify", "projbound", files["grid"], "--index", "1,2")[0] == 0
        assert call("verify", "injection", files["grid"], "--j1", "1", "--j2", "1,2")[0] == 0
        assert call("verify", "alphacount", 6)[0] == 0

    def test_noncompressed_is_usage_error(self, files):
        code, _, err = call("verify", "projbound", files["raw"])
        assert code == 2 and "error" in err

    def test_trace_jsonl_has_nested_steps(self, files):
        code, out, _ = call("verify", "trace", files["grid"], "--format", "jsonl")
        claims = [json.loads(line)["claim"] for line in out.splitlines()]
        assert code == 0 and "pr_chain" in claims and len(claims) > 15

    def test_violation_exit_code(self, files, monkeypatch):
        bad = Report("hdsums", 9, 1, "<=", False, -8)
        monkeypatch.setattr(oracles, "check_hdsums", lambda *a, **k: bad)
        code, out, err = call("verify", "hdsums", files["ap2"], files["ap2"])
        assert code == 1 and out.startswith("FAIL") and "implementation bug" in err


class TestErrors:
    def test_cap(self, files):
        code, _, err = call("dilate", files["grid"], "--cap", 3)
        assert code == 3 and "cap" in err

    def test_cap_from_config(self, files, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("cap = 3\n")
        assert call("dilate", files["grid"], "--config", cfg)[0] == 3

    def test_missing_file(self, tmp_path):
        assert call("dilate", tmp_path / "nope.pts")[0] == 2

    def test_malformed_file(self, tmp_path):
        p = tmp_path / "bad.pts"
        p.write_text("1 x\n")
        assert call("dilate", p)[0] == 2

    def test_bad_usage(self):
        assert call("frobnicate")[0] == 2
        assert call("verify", "projbound", "a", "--index", "1,x")[0] == 2


class TestSearch:
    def test_exact_writes_ledger(self, tmp_path):
        ledger = tmp_path / "l.jsonl"
        code, out, _ = call("search", "exact", "--n", 2, "--out", ledger)
        row = json.loads(ledger.read_text())
        assert code == 0 and row["best_value"] == 4 and row["proven_optimal"]
        assert "best=4" in out

    def test_ledger_from_environment(self, tmp_path, monkeypatch):
        ledger = tmp_path / "env.jsonl"
        monkeypatch.setenv("DILATES_LEDGER", str(ledger))
        call("search", "exact", "--n", 3)
        call("search", "exact", "--n", 2)
        assert [json.loads(x)["best_value"] for x in ledger.read_text().splitlines()] == [8, 4]

    def test_stdout_when_no_ledger(self, monkeypatch):
        monkeypatch.delenv("DILATES_LEDGER", raising=False)
        code, out, _ = call("search", "exact", "--n", 3)
        assert json.loads(out)["best_value"] == 8

    def test_local_with_witness_and_init(self, tmp_path):
        init, wit = tmp_path / "init.pts", tmp_path / "w.pts"
        write_set(kl_grid(2, 3), init)
        code, out, _ = call("search", "local", "--n", 8, "--d", 3, "--budget", 50,
                            "--init", init, "--witness", wit, "--format", "jsonl")
        rec = json.loads(out)
        assert code == 0 and len(read_set(wit)) == 8 and rec["best_value"] <= 36

    def test_local_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for path in (a, b):
            assert call("search", "local", "--n", 10, "--d", 3, "--budget", 80,
                        "--seed", 7, "--out", path)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_timing_flag(self, tmp_path):
        ledger = tmp_path / "t.jsonl"
        call("search", "exact", "--n", 2, "--out", ledger, "--timing")
        assert "wall_time" in json.loads(ledger.read_text())

    def test_table(self, tmp_path):
        code, out, _ = call("search", "table", "--n-list", "1,2,4")
        lines = out.splitlines()
        assert code == 0 and lines[0].startswith("n,") and len(lines) == 4
        code, out, _ = call("search", "table", "--n-list", "2", "--format", "jsonl")
        assert json.loads(out)["best"] == 4


def test_module_entry_point(tmp_path):
    p = tmp_path / "a.pts"
    p.write_text("0\n1\n2\n")
    res = subprocess.run([sys.executable, "-m", "dilates", "dilate", str(p)],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and len(res.stdout.splitlines()) == 9
