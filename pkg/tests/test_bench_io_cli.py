"""File formats, the benchmark driver, and the command line end to end."""

from __future__ import annotations

import json
import shutil

import numpy as np
import pytest

from ctrlsparse import (
    BenchConfig,
    SparsityPattern,
    is_controllable,
    load_matrix,
    load_pattern,
    run_benchmark,
    save_matrix,
    save_pattern,
    structure_to_dict,
    summarize,
    write_csv,
)
from ctrlsparse.cli import main


class TestMatrixFiles:
    @pytest.mark.parametrize("ext", [".mtx", ".mm", ".csv", ".txt", ".dat"])
    def test_round_trip(self, tmp_path, ext):
        a = np.array([[1.25, -3.5], [0.0, 2.0e-3]])
        path = tmp_path / f"m{ext}"
        save_matrix(path, a)
        assert np.abs(load_matrix(path) - a).max() < 1e-12

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_matrix(tmp_path / "nope.csv")


class TestPatternFiles:
    @pytest.mark.parametrize("ext", [".json", ".txt"])
    def test_round_trip(self, tmp_path, fig2_pattern, ext):
        path = tmp_path / f"p{ext}"
        save_pattern(path, fig2_pattern)
        assert load_pattern(path) == fig2_pattern

    def test_files_are_one_based(self, tmp_path, fig2_pattern):
        path = tmp_path / "p.txt"
        save_pattern(path, fig2_pattern)
        first_entry = path.read_text().splitlines()[1]
        assert first_entry.split() == ["1", "1"]

    def test_zero_index_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"n": 3, "l": 2, "support": [[0, 1]]}))
        with pytest.raises(ValueError, match="1-based"):
            load_pattern(path)

    def test_out_of_range_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 2\n4 1\n")
        with pytest.raises(ValueError, match="1-based"):
            load_pattern(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("")
        with pytest.raises(ValueError):
            load_pattern(path)


class TestSummaries:
    def test_structure_to_dict(self, circuit_es):
        d = structure_to_dict(circuit_es)
        assert d["n"] == 4
        assert d["n_modes"] == 2
        assert d["k_max"] == 1
        assert d["min_inputs"] == 1
        assert d["diagonalizable"] is False
        assert d["modes"][0]["index"] == 1
        assert d["modes"][0]["conjugate_partner"] == 2
        json.dumps(d)


class TestBenchmarkDriver:
    CONFIG = BenchConfig(
        generator="jordan",
        sizes=(6,),
        trials=2,
        algorithms=("greedy_macp", "simple_mscp", "two_stage_mscp"),
        seed=1,
        n_inputs=2,
        k_max=2,
    )

    def test_records_and_summary(self, tmp_path):
        records = run_benchmark(self.CONFIG)
        assert len(records) == 6
        assert all(r.result.isdigit() for r in records)
        assert all(r.seconds >= 0 for r in records)
        summary = summarize(records)
        assert set(summary) == {
            ("greedy_macp", 6),
            ("simple_mscp", 6),
            ("two_stage_mscp", 6),
        }
        out = tmp_path / "bench.csv"
        write_csv(records, out)
        lines = out.read_text().splitlines()
        assert lines[0] == "generator,n,trial,algorithm,result,seconds,seed"
        assert len(lines) == 7

    def test_thread_cap_does_not_change_results(self, monkeypatch):
        baseline = {
            (r.algorithm, r.n, r.trial): r.result for r in run_benchmark(self.CONFIG)
        }
        monkeypatch.setenv("CTRLSPARSE_THREADS", "2")
        threaded = {
            (r.algorithm, r.n, r.trial): r.result for r in run_benchmark(self.CONFIG)
        }
        assert baseline == threaded

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            run_benchmark(BenchConfig(generator="erdos"))


@pytest.fixture()
def cli_files(tmp_path, example1_a, fig2_pattern):
    matrix = tmp_path / "a6.csv"
    save_matrix(matrix, example1_a)
    pattern = tmp_path / "fig2.json"
    save_pattern(pattern, fig2_pattern)
    thin = tmp_path / "thin.json"
    save_pattern(thin, SparsityPattern.from_pairs(6, 2, [(0, 0)]))
    return tmp_path, str(matrix), str(pattern), str(thin)


class TestCli:
    def test_console_script_installed(self):
        assert shutil.which("ctrlsparse") is not None

    def test_analyze_json(self, cli_files, capsys):
        _, matrix, _, _ = cli_files
        assert main(["analyze", matrix, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["n"] == 6
        assert payload["k_max"] == 2
        assert payload["rank_demand"] == 6
        assert [m["eigenvalue"]["re"] for m in payload["modes"]] == [1.0, 2.0, 3.0]

    def test_check_feasible_and_not(self, cli_files, capsys):
        _, matrix, pattern, thin = cli_files
        assert main(["check", matrix, pattern, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["feasible"] is True
        assert [w["mode"] for w in payload["witnesses"]] == [1, 2, 3]
        assert main(["check", matrix, thin, "--format", "json"]) == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload == {"feasible": False, "failed_mode": 1}

    def test_construct_writes_controllable_b(self, cli_files, example1_a, fig2_pattern, capsys):
        tmp_path, matrix, pattern, _ = cli_files
        out = tmp_path / "b.csv"
        assert main(["construct", matrix, pattern, "-o", str(out)]) == 0
        capsys.readouterr()
        b = load_matrix(out)
        assert fig2_pattern.admits(b)
        assert is_controllable(example1_a, b)

    def test_micp_forbidden_states(self, cli_files, capsys):
        _, matrix, _, _ = cli_files
        # 1-based state 5 is expendable
        assert main(["micp", matrix, "--forbidden", "5", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pattern"]["l"] == 2
        assert all(r != 5 for r, _ in payload["pattern"]["support"])
        # 1-based state 2 is in every feasible pair of the first mode
        assert main(["micp", matrix, "--forbidden", "2", "--format", "json"]) == 1

    def test_macp_brute_json(self, cli_files, capsys):
        _, matrix, _, _ = cli_files
        assert main(["macp", matrix, "--algo", "brute", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {"states": [1, 2, 3], "size": 3, "value": 6}

    def test_mscp_two_stage_certificate(self, cli_files, capsys):
        _, matrix, _, _ = cli_files
        rc = main(
            ["mscp", matrix, "--inputs", "2", "--algo", "two-stage", "--certify", "--format", "json"]
        )
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["sparsity"] == 4
        assert payload["certificate"]["branch"] == "multi_assignment"
        assert payload["certificate"]["stage1_states"] == [1, 2, 3]

    def test_oracle_mscp(self, cli_files, capsys):
        _, matrix, _, _ = cli_files
        assert main(["oracle", "mscp", matrix, "--inputs", "2", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["sparsity"] == 4

    def test_gen_round_trip(self, tmp_path, capsys):
        out = tmp_path / "g.csv"
        assert main(["gen", "jordan", "8", "--k-max", "2", "--seed", "3", "-o", str(out)]) == 0
        capsys.readouterr()
        assert load_matrix(out).shape == (8, 8)

    def test_gen_stabilized_scale_free(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        rc = main(["gen", "scale-free", "12", "--seed", "2", "--stabilize", "-o", str(out)])
        assert rc == 0
        capsys.readouterr()
        assert np.linalg.eigvals(load_matrix(out)).real.max() < 0

    def test_bench_csv(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        rc = main(
            [
                "bench", "-o", str(out),
                "--generator", "jordan", "--sizes", "6", "--trials", "1",
                "--algorithms", "greedy_macp", "--seed", "1",
            ]
        )
        assert rc == 0
        capsys.readouterr()
        lines = out.read_text().splitlines()
        assert lines[0].startswith("generator,")
        assert len(lines) == 2

    def test_missing_matrix_is_usage_error(self, tmp_path, capsys):
        rc = main(["analyze", str(tmp_path / "nope.csv")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_infeasible_domain_error_is_exit_one(self, cli_files, capsys):
        tmp_path, matrix, _, thin = cli_files
        rc = main(["construct", matrix, thin])
        assert rc == 1
        assert "error:" in capsys.readouterr().err
