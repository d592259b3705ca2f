import json

import pytest

from minla.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_random_to_stdout(self, capsys):
        code, out, _ = run_cli(
            capsys, "gen", "--kind", "random", "--model", "lines", "--n", "6",
            "--seed", "4",
        )
        assert code == 0
        assert out.startswith("minla-trace v1\n")
        assert "model: lines" in out

    def test_tree_requires_power_of_two(self, capsys):
        code, _, err = run_cli(
            capsys, "gen", "--kind", "tree", "--model", "lines", "--n", "6",
            "--seed", "4",
        )
        assert code == 2
        assert "power of two" in err

    def test_tree_requires_lines(self, capsys):
        code, _, err = run_cli(
            capsys, "gen", "--kind", "tree", "--model", "cliques", "--n", "8",
            "--seed", "4",
        )
        assert code == 2

    def test_gen_to_file_round_trips(self, capsys, tmp_path):
        out_file = tmp_path / "trace.txt"
        code, _, _ = run_cli(
            capsys, "gen", "--kind", "tree", "--model", "lines", "--n", "8",
            "--seed", "5", "--out", str(out_file),
        )
        assert code == 0
        from minla import parse_trace

        trace = parse_trace(out_file.read_text())
        assert trace.n == 8 and trace.k == 7


@pytest.fixture
def trace_file(tmp_path, capsys):
    path = tmp_path / "t.txt"
    main(
        ["gen", "--kind", "random", "--model", "cliques", "--n", "7", "--seed", "9",
         "--out", str(path)]
    )
    capsys.readouterr()
    return path


class TestSimulate:
    def test_csv_output_reproducible(self, capsys, trace_file):
        argv = (
            "simulate", "--algo", "rand", "--trace", str(trace_file),
            "--seed", "3", "--trials", "4", "--format", "csv",
        )
        code_a, out_a, _ = run_cli(capsys, *argv)
        code_b, out_b, _ = run_cli(capsys, *argv)
        assert code_a == code_b == 0
        assert out_a == out_b
        header = out_a.split("\n", 1)[0]
        assert header == (
            "trace_id,algo,n,trial,cost_move,cost_rearrange,cost_total,"
            "opt_cost,ratio,seed"
        )
        assert len(out_a.strip().split("\n")) == 5

    def test_json_output(self, capsys, trace_file):
        code, out, _ = run_cli(
            capsys, "simulate", "--algo", "det", "--trace", str(trace_file),
            "--seed", "3", "--trials", "2", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["config"]["algo"] == "det"
        assert len(payload["records"]) == 2

    def test_missing_trace_file(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "simulate", "--algo", "det", "--trace", str(tmp_path / "no.txt"),
            "--seed", "1", "--trials", "1",
        )
        assert code == 2
        assert err.startswith("error:")

    def test_invalid_trace_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("minla-trace v1\nmodel: rings\nn: 2\npi0: 0 1\n")
        code, _, err = run_cli(
            capsys, "simulate", "--algo", "det", "--trace", str(bad),
            "--seed", "1", "--trials", "1",
        )
        assert code == 2
        assert "line 2" in err

    def test_capacity_exits_3(self, capsys, tmp_path):
        lines = ["minla-trace v1", "model: cliques", "n: 30",
                 "pi0: " + " ".join(map(str, range(30))), "event: 0 1"]
        big = tmp_path / "big.txt"
        big.write_text("\n".join(lines) + "\n")
        code, _, err = run_cli(
            capsys, "simulate", "--algo", "det", "--trace", str(big),
            "--seed", "1", "--trials", "1",
        )
        assert code == 3
        assert "cap" in err


class TestOpt:
    def test_dp_and_exhaustive_agree(self, capsys, trace_file):
        code, out_dp, _ = run_cli(capsys, "opt", "--trace", str(trace_file))
        code_e, out_ex, _ = run_cli(
            capsys, "opt", "--trace", str(trace_file), "--exhaustive"
        )
        assert code == code_e == 0
        cost_dp = int(out_dp.split("cost: ")[1].split("\n")[0])
        cost_ex = int(out_ex.split("cost: ")[1].split("\n")[0])
        assert cost_dp == cost_ex


class TestVerify:
    def test_harmonic_passes(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--lemma", "harmonic", "--trials", "1000",
            "--seed", "2",
        )
        assert code == 0
        assert "result: pass" in out

    def test_insufficient_trials_exit_2(self, capsys):
        code, _, err = run_cli(
            capsys, "verify", "--lemma", "identities", "--trials", "10",
            "--seed", "2",
        )
        assert code == 2

    def test_left_right_default_trace(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--lemma", "left-right", "--trials", "2000",
            "--seed", "2",
        )
        assert code == 0
        assert "left of" in out


class TestBench:
    def test_writes_reports_and_exit_code(self, capsys, tmp_path, monkeypatch):
        from minla import bench

        fake = [
            lambda: bench.CriterionResult(1, "alpha", True, "fine"),
            lambda: bench.CriterionResult(2, "beta", False, "broke"),
        ]
        monkeypatch.setattr(bench, "ALL_CRITERIA", tuple(fake))
        out_dir = tmp_path / "reports"
        code, out, _ = run_cli(
            capsys, "bench", "--suite", "paper", "--out", str(out_dir)
        )
        assert code == 4
        assert "PASS criterion 1 (alpha): fine" in out
        assert "FAIL criterion 2 (beta): broke" in out
        summary = (out_dir / "summary.txt").read_text()
        assert summary.count("\n") == 2
        assert (out_dir / "criterion-01-alpha.txt").exists()

    def test_all_green_exits_zero(self, capsys, tmp_path, monkeypatch):
        from minla import bench

        monkeypatch.setattr(
            bench,
            "ALL_CRITERIA",
            (lambda: bench.CriterionResult(1, "alpha", True, "fine"),),
        )
        code, _, _ = run_cli(
            capsys, "bench", "--suite", "paper", "--out", str(tmp_path / "r")
        )
        assert code == 0


class TestDuel:
    def test_report_and_dump(self, capsys, tmp_path):
        dump = tmp_path / "induced.txt"
        code, out, _ = run_cli(
            capsys, "duel", "--algo", "det", "--adversary", "middle-line",
            "--n", "9", "--dump-trace", str(dump),
        )
        assert code == 0
        assert "duel n=9" in out
        from minla import parse_trace, run

        induced = parse_trace(dump.read_text())
        cost = int(out.split("algo_cost=")[1].split()[0])
        assert run("det", induced).total_cost == cost

    def test_even_n_rejected(self, capsys):
        code, _, err = run_cli(capsys, "duel", "--n", "8")
        assert code == 2
