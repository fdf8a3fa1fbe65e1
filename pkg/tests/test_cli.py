import csv
import io
import json
import subprocess
import sys

import pytest

from em_lab.cli import run, split_top_level
from em_lab.identities import VerifyReport
from em_lab.qpoly import Poly
from em_lab.stats import statistic
from em_lab.tableaux import RPartiteTableau
from em_lab.wreath import ColoredPermutation

GRID = [{"id": "carlitz", "params": {"n": 3}},
        {"id": "fmaj_dist", "params": {"n": 2, "r": 3}},
        {"id": "colored_df", "params": {"r": 2}, "truncations": {"N": 2, "M": 3}},
        {"id": "derangement_count", "params": {"n": 3, "r": 2}}]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def grid_file(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(GRID))
    return str(path)


def test_split_top_level():
    assert split_top_level("fmaj[2,1]:q, des:x") == ["fmaj[2,1]:q", "des:x"]


class TestBasicCommands:
    def test_distribution_example(self):
        code, out, _ = call("distribution", "--n", "2", "--r", "1", "--stats", "des*@color:x,maj@color:q")
        assert code == 0 and out == "1 + q*x\n"

    def test_distribution_json_and_csv(self):
        code, out, _ = call("distribution", "--n", "2", "--r", "2", "--stats", "des:x,fmaj:q", "--format", "json")
        poly = Poly.from_json_obj(json.loads(out))
        assert code == 0 and poly.evaluate(q=1, x=1).constant_term() == 8
        code, out, _ = call("distribution", "--n", "2", "--r", "2", "--stats", "des:x,fmaj:q", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["q", "x", "coeff"] and sum(int(r[-1]) for r in rows[1:]) == 8

    def test_enumerate(self):
        code, out, _ = call("enumerate", "--n", "3", "--r", "1", "--subset", "derangements")
        assert code == 0 and out.split("\n")[:-1] == ["2 3 1", "3 1 2"]
        code, out, _ = call("enumerate", "--n", "2", "--r", "2", "--format", "json")
        objs = [json.loads(line) for line in out.splitlines()]
        assert len(objs) == 8
        assert all(ColoredPermutation.from_json_obj(o).r == 2 for o in objs)

    def test_stats_table(self):
        code, out, _ = call("stats", "--n", "1", "--r", "2", "--stat", "fmaj,fdes,fmaj[2,1]")
        assert code == 0
        assert out.splitlines() == ["window\tfmaj@color\tfdes@color\tfmaj[2,1]@color", "1^0\t0\t0\t0", "1^1\t1\t1\t1"]
        code, out, _ = call("stats", "--n", "2", "--r", "2", "--stat", "maj", "--format", "json")
        objs = [json.loads(line) for line in out.splitlines()]
        assert code == 0 and len(objs) == 8
        for o in objs:
            assert o["stats"]["maj@color"] == statistic(ColoredPermutation.from_json_obj(o), "maj@color")

    def test_rsk(self):
        code, out, _ = call("rsk", "--r", "2", "--w", "2^1 1^0 3^1")
        assert code == 0
        assert "Des Q {0, 2}" in out and "Des P {1}" in out
        code, out, _ = call("rsk", "--r", "2", "--w", "2^0 1^1", "--format", "json")
        obj = json.loads(out)
        assert RPartiteTableau.from_json_obj(obj["Q"]) == RPartiteTableau([[[1]], [[2]]])
        assert obj["des_Q"] == [1]

    def test_list_identities(self):
        code, out, _ = call("list-identities", "--format", "json")
        ids = [o["id"] for o in json.loads(out)]
        assert code == 0 and "carlitz" in ids and len(ids) >= 35


class TestVerifyCommands:
    def test_verify_pass(self):
        code, out, _ = call("verify", "--id", "fmaj_dist", "--n", "1", "--r", "3")
        assert code == 0 and out.startswith("PASS fmaj_dist [n=1 r=3]")

    def test_verify_fail(self):
        code, out, _ = call("verify", "--id", "ldes_lmaj", "--n", "1", "--r", "2", "--format", "json")
        reps = [VerifyReport.from_json_obj(o) for o in json.loads(out)]
        assert code == 1 and not reps[0].passed and reps[0].mismatch is not None

    def test_verify_truncation_flag(self):
        code, out, _ = call("verify", "--id", "carlitz", "--n", "2", "--M", "3", "--format", "json")
        assert code == 0
        assert json.loads(out) == [{"id": "carlitz", "params": {"n": 2}, "truncations": {"M": 3}, "pass": True}]

    def test_verify_all_grid(self, grid_file):
        code, out, _ = call("verify-all", "--grid", grid_file, "--workers", "1")
        lines = out.splitlines()
        assert code == 0 and lines[-1] == "4 passed, 0 failed"
        assert [l.split()[1] for l in lines[:-1]] == sorted(l.split()[1] for l in lines[:-1])

    def test_verify_all_failure_exit(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps(GRID + [{"id": "ldes_lmaj", "params": {"n": 1, "r": 2}}]))
        code, out, _ = call("verify-all", "--grid", str(path), "--workers", "1")
        assert code == 1 and out.splitlines()[-1] == "4 passed, 1 failed"

    def test_worker_count_byte_identical(self, grid_file, monkeypatch):
        monkeypatch.delenv("EM_LAB_WORKERS", raising=False)
        outs = {call("verify-all", "--grid", grid_file, "--workers", w, "--format", f)[1]
                for w in ("1", "3") for f in ("json",)}
        assert len(outs) == 1
        monkeypatch.setenv("EM_LAB_WORKERS", "2")
        assert call("verify-all", "--grid", grid_file, "--workers", "1", "--format", "json")[1] in outs


class TestErrors:
    @pytest.mark.parametrize("argv", [
        [], ["verify", "--id", "nonsense"], ["verify", "--id", "carlitz", "--n", "99"],
        ["enumerate", "--n", "2"], ["enumerate", "--n", "-1", "--r", "1"],
        ["distribution", "--n", "2", "--r", "1", "--stats", "des"],
        ["distribution", "--n", "2", "--r", "1", "--stats", "bogus:x"],
        ["rsk", "--r", "4", "--w", "1^5"], ["stats", "--n", "1", "--r", "3", "--stat", "neg"],
        ["verify-all", "--grid", "/nonexistent/grid.json"], ["enumerate", "--n", "1", "--r", "1", "--workers", "0"],
    ])
    def test_usage_exit_2(self, argv):
        code, out, err = call(*argv)
        assert code == 2 and err

    def test_bad_grid_contents(self, tmp_path):
        path = tmp_path / "g.json"
        for content in ("{}", "[1]", "not json", '[{"id": "carlitz", "params": 3}]'):
            path.write_text(content)
            assert call("verify-all", "--grid", str(path))[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "em_lab.cli", "verify", "--id", "carlitz", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("PASS carlitz")
