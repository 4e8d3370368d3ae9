import json

import pytest

from ecqubo.cli import RunReport, main
from ecqubo.qubo import read_qubo


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


class TestCentrality:
    def test_g8_ec(self, capsys):
        data = run_json(capsys, "centrality", "--graph", "g8_spider", "--measure", "ec")
        first = data["nodes"][0]
        assert first["node"] == 0 and abs(first["score"] - 0.4629) < 1e-3

    def test_complete_all_tied(self, capsys):
        data = run_json(capsys, "centrality", "--graph", "complete:5")
        assert {n["rank"] for n in data["nodes"]} == {"[1-5]"}

    def test_walk_small_gamma_is_degree_order(self, capsys):
        data = run_json(capsys, "centrality", "--graph", "path:3", "--measure", "walk", "--gamma", "0.01")
        assert data["nodes"][0]["node"] == 1
        assert data["nodes"][1]["rank"] == data["nodes"][2]["rank"]

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "centrality", "--graph", "florentine_families", "--measure", "degree")
        assert code == 0 and "Medici" in out.splitlines()[2]


class TestQuboExport:
    def test_path3(self, capsys, tmp_path):
        out = tmp_path / "p3.qubo"
        code, _, _ = run(capsys, "qubo-export", "--graph", "path:3", "--tau", "1", "--out", str(out))
        text = out.read_text()
        assert code == 0 and "p qubo 0 3 3 3" in text.splitlines()
        assert read_qubo(text).n == 3

    def test_complete2(self, capsys, tmp_path):
        out = tmp_path / "k2.qubo"
        run(capsys, "qubo-export", "--graph", "complete:2", "--tau", "1", "--out", str(out))
        body = [l for l in out.read_text().splitlines() if not l.startswith(("c", "p"))]
        assert len(body) == 3

    def test_unwritable(self, capsys, tmp_path):
        code, _, err = run(capsys, "qubo-export", "--graph", "path:3", "--tau", "1",
                           "--out", str(tmp_path / "missing" / "x.qubo"))
        assert code == 2 and "error" in err


class TestSolve:
    def test_karate(self, capsys):
        data = run_json(capsys, "solve", "--graph", "karate_club", "--tau", "1", "--solver", "fixed-weight")
        assert data["result"]["ground_sets"] == [[33]]
        assert data["reference"]["agrees"] == [True]

    def test_lollipop_tau5(self, capsys):
        data = run_json(capsys, "solve", "--graph", "lollipop:10,20", "--tau", "5", "--solver", "fixed-weight")
        assert [0, 1, 2, 4, 9] in data["result"]["ground_sets"]
        assert all(data["reference"]["agrees"])

    def test_bull_tau5(self, capsys):
        code, out, _ = run(capsys, "solve", "--graph", "bull", "--tau", "5")
        assert code == 0 and "{0, 1, 2, 3, 4}  EC top-5 match: yes" in out

    def test_sa(self, capsys):
        data = run_json(capsys, "solve", "--graph", "g8_spider", "--tau", "1", "--solver", "sa",
                        "--reads", "200", "--seed", "7")
        assert data["method"] == "sa" and data["result"]["ground_sets"] == [[0]]

    def test_run_report_round_trip(self, capsys):
        code, out, _ = run(capsys, "solve", "--graph", "path:3", "--tau", "1", "--json")
        report = RunReport.from_json(out)
        assert report.format_version == 1
        assert RunReport.from_json(report.to_json()) == report

    def test_show_limit(self, capsys):
        code, out, _ = run(capsys, "solve", "--graph", "g8_spider", "--tau", "5", "--show", "2")
        assert "... 10 more (all match: yes)" in out

    def test_capacity_exit(self, capsys):
        code, _, err = run(capsys, "solve", "--graph", "tutte", "--tau", "1", "--solver", "exhaustive")
        assert code == 3 and "exhaustive" in err

    def test_bad_graph(self, capsys):
        code, _, _ = run(capsys, "solve", "--graph", "nosuchgraph", "--tau", "1")
        assert code == 2

    def test_bad_tau(self, capsys):
        code, _, _ = run(capsys, "solve", "--graph", "bull", "--tau", "9")
        assert code == 2

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--graph", "bull"])
        assert exc.value.code == 2


class TestRank:
    def test_path3(self, capsys):
        code, out, _ = run(capsys, "rank", "--graph", "path:3", "--compare")
        lines = out.splitlines()
        assert lines[1].split()[:3] == ["1", "1", "1"]
        assert "(tie: 0, 2)" in lines[2]

    def test_complete4_tie_flagged(self, capsys):
        data = run_json(capsys, "rank", "--graph", "complete:4")
        assert all(e["tied"] for e in data["entries"][:-1])

    def test_g8(self, capsys):
        data = run_json(capsys, "rank", "--graph", "g8_spider")
        entries = data["entries"]
        assert entries[0]["nodes"] == [0] and not entries[0]["tied"]
        assert [e["nodes"][0] for e in entries[1:4]] == [1, 2, 3]
        assert all(e["tied"] for e in entries[1:])
        assert data["agreement"]["prefix"] == 16


class TestDot:
    def test_g8_highlight(self, capsys, tmp_path):
        out = tmp_path / "g8.dot"
        code, _, _ = run(capsys, "dot", "--graph", "g8_spider", "--nodes", "0", "--out", str(out))
        fills = [l for l in out.read_text().splitlines() if "fillcolor" in l]
        assert code == 0 and len(fills) == 16
        assert len({f.split("fillcolor=")[1] for f in fills[1:]}) == 1
        assert fills[0].split("fillcolor=")[1] != fills[1].split("fillcolor=")[1]

    def test_karate_tau5(self, capsys, tmp_path):
        out = tmp_path / "k.dot"
        data = run_json(capsys, "dot", "--graph", "karate_club", "--tau", "5",
                        "--solver", "fixed-weight", "--out", str(out))
        assert data["highlighted"] == [0, 1, 2, 32, 33]
        assert out.read_text().count("#fde725") == 5

    def test_measure_buckets(self, capsys, tmp_path):
        out = tmp_path / "m.dot"
        data = run_json(capsys, "dot", "--graph", "g8_spider", "--measure", "ec", "--out", str(out))
        assert data["highlighted"] == [0, 1, 2, 3]
