import io
import subprocess
import sys

import pytest

from conftest import DATA
from symcanon.cli import EXIT_INPUT, EXIT_PARSE, EXIT_TIMEOUT, EXIT_USAGE, RunConfig, bench, main, run
from symcanon.graph import matching_graph, parse_dimacs
from symcanon.canonical import search_canonical
from symcanon.pipeline import parse_stats

FIG1 = str(DATA / "figure1.dimacs")


def invoke(config, text=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(config, stdin=io.StringIO(text), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def info(err):
    return parse_stats("\n".join(l for l in err.splitlines() if "=" in l))


class TestRun:
    def test_auto_figure1(self):
        code, out, _ = invoke(RunConfig(input=FIG1, mode="auto"))
        assert code == 0
        assert "grpsize=48" in out.splitlines()
        assert "orbits=[0,1,2,3|4,5,6]" in out

    @pytest.mark.parametrize("mode", ["canon", "combined"])
    def test_relabeled_input_same_form(self, mode):
        _, out0, err0 = invoke(RunConfig(input=FIG1, mode=mode))
        _, out1, err1 = invoke(RunConfig(input=FIG1, mode=mode, seed=17))
        assert out0 == out1
        assert info(err0)["digest"] == info(err1)["digest"]
        assert info(err0)["grpsize"] == 48

    def test_form_parses_back(self):
        _, out, _ = invoke(RunConfig(input=FIG1, mode="canon"))
        G = parse_dimacs(out)
        assert search_canonical(G).form_bytes().decode() == out

    def test_deterministic_without_stats(self):
        assert invoke(RunConfig(input=FIG1)) == invoke(RunConfig(input=FIG1))

    def test_stats_on_stderr(self):
        code, _, err = invoke(RunConfig(input=FIG1, mode="combined", stats=True))
        stats = info(err)
        assert code == 0
        assert stats["total_nodes"] == stats["phase1_nodes"] + stats["phase2_nodes"] + stats["phase3_nodes"]
        assert "seconds" in stats

    def test_stdin_and_cnf(self):
        code, out, _ = invoke(RunConfig(format="cnf", mode="auto"), "p cnf 2 1\n1 2 0\n")
        assert code == 0 and "grpsize=2" in out

    def test_early_symmetry_flag(self):
        _, a, _ = invoke(RunConfig(input=FIG1, mode="canon"))
        _, b, _ = invoke(RunConfig(input=FIG1, mode="canon", early_symmetry=True))
        assert a == b

    def test_parse_error(self):
        code, out, err = invoke(RunConfig(), "p edge 2 1\ne 1 1\n")
        assert code == EXIT_PARSE and out == ""
        assert "line 2" in err

    def test_unreadable(self, tmp_path):
        code, _, err = invoke(RunConfig(input=str(tmp_path / "missing.dimacs")))
        assert code == EXIT_INPUT and "cannot read" in err

    def test_timeout(self):
        text = matching_graph(3000).to_dimacs()
        code, out, err = invoke(RunConfig(mode="canon", timeout=1e-6), text)
        assert code == EXIT_TIMEOUT and out == "" and "timeout" in err

    def test_bad_config(self):
        with pytest.raises(ValueError):
            RunConfig(mode="both")
        with pytest.raises(ValueError):
            RunConfig(timeout=0)

    def test_large_matching_phase3_below_canon(self, tmp_path):
        path = tmp_path / "m1000.dimacs"
        path.write_text(matching_graph(1000).to_dimacs())
        _, out_c, err_c = invoke(RunConfig(input=str(path), mode="canon", stats=True))
        _, out_p, err_p = invoke(RunConfig(input=str(path), mode="combined", stats=True))
        assert out_c == out_p
        assert info(err_p)["phase3_nodes"] < info(err_c)["nodes"]


class TestMain:
    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--mode", "sideways"])
        assert exc.value.code == EXIT_USAGE

    def test_nonpositive_timeout(self, capsys):
        assert main([FIG1, "--timeout", "0"]) == EXIT_USAGE

    def test_main_auto(self, capsys):
        assert main([FIG1, "--mode", "auto"]) == 0
        assert "grpsize=48" in capsys.readouterr().out

    def test_bench_flag(self, capsys):
        assert main(["--bench-sizes", "8,16"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "n\tmode\tnodes\tmillis\tstatus"
        assert len(lines) == 7

    def test_bench_odd_size(self, capsys):
        assert main(["--bench-sizes", "7"]) == EXIT_USAGE

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "symcanon.cli", FIG1, "--mode", "auto"],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and "grpsize=48" in proc.stdout


class TestBench:
    def test_rows(self):
        out = io.StringIO()
        rows = bench(RunConfig(), [20, 40], out)
        assert [(r["n"], r["mode"]) for r in rows] == [
            (20, "auto"), (20, "canon"), (20, "combined"),
            (40, "auto"), (40, "canon"), (40, "combined")]
        assert all(r["status"] == "ok" for r in rows)
        assert rows[0]["nodes"] < rows[1]["nodes"]

    def test_timeouts_are_rows(self):
        out = io.StringIO()
        rows = bench(RunConfig(timeout=1e-6), [4000, 6000], out)
        assert len(rows) == 6
        assert all(r["status"] == "timeout" and r["nodes"] is None for r in rows)
        assert "\t-\t" in out.getvalue()
