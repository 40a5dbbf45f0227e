import json

import pytest

from walkmult.cli import main

P3_JSON = '{"n": 3, "mode": "rational", "edges": [[1,2,"1"],[2,3,"1"]]}'
LADDER_JSON = json.dumps({
    "n": 6, "mode": "rational",
    "edges": [[1, 2, "1"], [2, 3, "1"], [4, 5, "1"], [5, 6, "1"],
              [1, 4, "1"], [2, 5, "1"], [3, 6, "1"]],
})


@pytest.fixture
def p3_file(tmp_path):
    f = tmp_path / "p3.json"
    f.write_text(P3_JSON)
    return str(f)


@pytest.fixture
def ladder_file(tmp_path):
    f = tmp_path / "ladder.json"
    f.write_text(LADDER_JSON)
    return str(f)


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


class TestAnalyze:
    def test_p3_report(self, p3_file, capsys):
        code, out = run(["analyze", p3_file], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["cospectral_pairs"][0]["pair"] == [1, 3]
        assert report["cospectral_pairs"][0]["singlets"]["even"] == [2]
        assert report["automorphisms"]["order"] == 2

    def test_ladder_lists_central_pair(self, ladder_file, capsys):
        code, out = run(["analyze", ladder_file], capsys)
        pairs = [tuple(e["pair"])
                 for e in json.loads(out)["cospectral_pairs"]]
        assert (2, 5) in pairs

    def test_malformed_file_exit2(self, tmp_path, capsys):
        f = tmp_path / "bad.json"
        f.write_text("not a graph at all {{{")
        code, _ = run(["analyze", str(f)], capsys)
        assert code == 2

    def test_pretty_output(self, p3_file, capsys):
        code, out = run(["analyze", p3_file, "--pretty"], capsys)
        assert code == 0
        assert "{1,3}" in out


class TestMultiplets:
    def test_p3_pair_report(self, p3_file, capsys):
        code, out = run(["multiplets", p3_file, "--pair", "1", "3",
                         "--max-size", "2"], capsys)
        assert code == 0
        report = json.loads(out)
        subsets = [tuple(r["subset"]) for r in report["multiplets"]]
        assert (2,) in subsets and (1, 3) in subsets

    def test_odd_filter_empty_below_doublet(self, p3_file, capsys):
        code, out = run(["multiplets", p3_file, "--pair", "1", "3",
                         "--max-size", "1", "--parity", "odd"], capsys)
        assert code == 0
        assert json.loads(out)["multiplets"] == []

    def test_max_size_zero_usage_error(self, p3_file, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["multiplets", p3_file, "--max-size", "0"])
        assert exc.value.code == 2

    def test_budget_exit3(self, ladder_file, capsys):
        code, _ = run(["multiplets", ladder_file, "--pair", "2", "5",
                       "--max-size", "4", "--budget", "3"], capsys)
        assert code == 3


class TestApply:
    def test_cone_script(self, p3_file, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "pair": [1, 3],
            "steps": [{"op": "cone", "subset": [1, 3], "parity": "even",
                       "gamma": ["1", "1"]}],
        }))
        code, out = run(["apply", p3_file, str(script)], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["graph"]["n"] == 4
        cert = report["certificates"][0]["certificate"]
        assert cert["tip"] == 4 and cert["tip_parity"] == 1

    def test_interconnect_loop_2ab(self, ladder_file, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "pair": [2, 5],
            "steps": [{"op": "interconnect",
                       "x_subset": [1, 4], "x_gamma": ["1", "1"],
                       "y_subset": [1, 6], "y_gamma": ["2", "2"],
                       "parity": "even"}],
        }))
        code, out = run(["apply", ladder_file, str(script)], capsys)
        assert code == 0
        edges = {(i, j): w for i, j, w in json.loads(out)["graph"]["edges"]}
        assert edges[(1, 1)] == "4"  # loop 2ab with a=1, b=2

    def test_refused_removal_exit4(self, ladder_file, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "pair": [2, 5],
            "steps": [{"op": "remove-vertex", "vertex": 1}],
        }))
        code, _ = run(["apply", ladder_file, str(script)], capsys)
        assert code == 4

    def test_multiplet_index_reference(self, p3_file, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "pair": [1, 3],
            "steps": [{"op": "cone", "multiplet_index": 0}],
        }))
        code, out = run(["apply", p3_file, str(script)], capsys)
        assert code == 0
        assert json.loads(out)["graph"]["n"] == 4


class TestEigen:
    def test_p3_counts(self, p3_file, capsys):
        code, out = run(["eigen", p3_file, "--pair", "1", "3"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["parity_counts"] == {"even": 2, "odd": 1, "zero": 0}
        assert report["all_zero_sums_ok"]

    def test_non_cospectral_pair_exit5(self, p3_file, capsys):
        code, _ = run(["eigen", p3_file, "--pair", "1", "2"], capsys)
        assert code == 5


class TestGenerate:
    def test_ladder_bundle(self, capsys):
        code, out = run(["generate", "ladder", "--seed", "1",
                         "--steps", "2"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["automorphisms"]["trivial"] is True
        assert report["pair"] == [2, 5]

    def test_steps_zero_passthrough(self, capsys):
        code, out = run(["generate", "prism", "--seed", "0"], capsys)
        assert code == 0
        assert json.loads(out)["graph"]["n"] == 6

    def test_unknown_template_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["generate", "moebius"])
        assert exc.value.code == 2

    def test_deterministic_reports(self, capsys):
        _, a = run(["generate", "cycle", "--seed", "3", "--steps", "1"],
                   capsys)
        _, b = run(["generate", "cycle", "--seed", "3", "--steps", "1"],
                   capsys)
        assert a == b


class TestPlot:
    def test_plot_from_report(self, p3_file, tmp_path, capsys):
        report_path = tmp_path / "rep.json"
        code, _ = run(["multiplets", p3_file, "--pair", "1", "3",
                       "--max-size", "2", "-o", str(report_path)], capsys)
        assert code == 0
        img = tmp_path / "out.png"
        code = main(["plot", str(report_path), "-o", str(img)])
        assert code == 0
        assert img.stat().st_size > 0

    def test_empty_report(self, tmp_path):
        rep = tmp_path / "empty.json"
        rep.write_text("{}")
        img = tmp_path / "empty.png"
        assert main(["plot", str(rep), "-o", str(img)]) == 0
        assert img.exists()


class TestThreads:
    def test_worker_count_env(self, monkeypatch):
        from walkmult.cli import worker_count
        monkeypatch.setenv("WALKMULT_THREADS", "4")
        assert worker_count() == 4
        monkeypatch.setenv("WALKMULT_THREADS", "junk")
        assert worker_count() == 1

    def test_analyze_parallel_matches_serial(self, ladder_file, capsys,
                                             monkeypatch):
        code, serial = run(["analyze", ladder_file], capsys)
        monkeypatch.setenv("WALKMULT_THREADS", "3")
        code, parallel = run(["analyze", ladder_file], capsys)
        assert serial == parallel
