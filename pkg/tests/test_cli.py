"""CLI behaviour: subcommands, exit codes, reproducibility."""

import json

import pytest

from cpnorm import MapFile, identity_channel
from cpnorm.cli import main
from cpnorm.fileio import save_map


@pytest.fixture()
def identity_map_file(tmp_path):
    path = tmp_path / "identity2.json"
    save_map(MapFile.from_cpmap(identity_channel(2), {"name": "id2"}), path)
    return str(path)


@pytest.fixture()
def generic_map_file(tmp_path):
    path = tmp_path / "gen.json"
    code = main(["gen", "--n", "2", "--m", "2", "--k", "3", "--seed", "1",
                 "--out", str(path)])
    assert code == 0
    return str(path)


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_stdout_parses(self, capsys):
        code, out, _ = run_cli(capsys, ["gen", "--n", "2", "--m", "2", "--k", "2",
                                        "--seed", "3"])
        assert code == 0
        obj = json.loads(out)
        assert obj["version"] == 1 and obj["n"] == 2

    def test_deterministic(self, capsys):
        argv = ["gen", "--n", "2", "--m", "2", "--k", "3", "--seed", "7"]
        _, out1, _ = run_cli(capsys, argv)
        _, out2, _ = run_cli(capsys, argv)
        assert out1 == out2

    def test_bad_dims_exit_3(self, capsys):
        code, _, err = run_cli(capsys, ["gen", "--n", "0", "--m", "2", "--k", "1"])
        assert code == 3
        assert "error:" in err

    def test_diagonal_from_matrix(self, capsys, tmp_path):
        matrix_path = tmp_path / "mat.json"
        matrix_path.write_text(json.dumps([[1.0, 1.0], [0.0, 1.0]]))
        code, out, _ = run_cli(capsys, ["gen", "--kind", "diagonal_from_matrix",
                                        "--matrix", str(matrix_path)])
        assert code == 0
        obj = json.loads(out)
        assert obj["n"] == 2 and obj["m"] == 2
        assert obj["metadata"]["matrix"] == [[1.0, 1.0], [0.0, 1.0]]
        assert len(obj["kraus"]) == 3


class TestCompute:
    def test_identity_closed_form(self, capsys, identity_map_file):
        code, out, _ = run_cli(capsys, ["compute", "--map", identity_map_file,
                                        "--p", "4", "--q", "2"])
        assert code == 0
        rec = json.loads(out)
        assert rec["result"]["norm_estimate"] == pytest.approx(2**0.25, abs=1e-6)
        assert rec["result"]["status"] == "converged"

    def test_unproven_regime_warns_but_exits_zero(self, capsys, identity_map_file):
        code, out, err = run_cli(capsys, ["compute", "--map", identity_map_file,
                                          "--p", "2", "--q", "2"])
        assert code == 0
        assert "unproven regime" in err
        rec = json.loads(out)
        assert any("unproven regime" in w for w in rec["result"]["warnings"])

    def test_invalid_exponent_exit_3(self, capsys, identity_map_file):
        code, _, err = run_cli(capsys, ["compute", "--map", identity_map_file,
                                        "--p", "0.5", "--q", "2"])
        assert code == 3
        assert "error:" in err

    def test_max_iter_exit_2(self, capsys, generic_map_file):
        code, out, _ = run_cli(capsys, ["compute", "--map", generic_map_file,
                                        "--p", "3", "--q", "2", "--max-iter", "1"])
        assert code == 2
        rec = json.loads(out)
        assert rec["result"]["status"] == "max_iter_reached"

    def test_missing_file_exit_3(self, capsys):
        code, _, err = run_cli(capsys, ["compute", "--map", "/nonexistent.json",
                                        "--p", "3", "--q", "2"])
        assert code == 3

    def test_trace_file(self, capsys, generic_map_file, tmp_path):
        trace = tmp_path / "trace.tsv"
        code, _, _ = run_cli(capsys, ["compute", "--map", generic_map_file,
                                      "--p", "3", "--q", "2",
                                      "--trace", str(trace)])
        assert code == 0
        lines = trace.read_text().splitlines()
        assert lines[0].startswith("# k")
        assert all(len(line.split("\t")) == 5 for line in lines[1:])
        assert len(lines) >= 3

    def test_reproducible_stdout(self, capsys, generic_map_file):
        argv = ["compute", "--map", generic_map_file, "--p", "3", "--q", "2",
                "--seed", "5"]
        _, out1, _ = run_cli(capsys, argv)
        _, out2, _ = run_cli(capsys, argv)
        assert out1 == out2

    def test_record_echoes_input(self, capsys, generic_map_file):
        _, out, _ = run_cli(capsys, ["compute", "--map", generic_map_file,
                                     "--p", "3", "--q", "2"])
        rec = json.loads(out)
        assert rec["input"]["p"] == 3.0
        assert rec["input"]["map"]["kraus"]
        assert rec["tool"]["name"] == "cpnorm"

    def test_custom_start_file(self, capsys, generic_map_file, tmp_path):
        start = tmp_path / "start.json"
        start.write_text(json.dumps([[[0.7, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.3, 0.0]]]))
        code, out, _ = run_cli(capsys, ["compute", "--map", generic_map_file,
                                        "--p", "3", "--q", "2",
                                        "--start", str(start)])
        assert code == 0


class TestDiagnose:
    def test_identity_counterexamples(self, capsys, identity_map_file):
        code, out, _ = run_cli(capsys, ["diagnose", "--map", identity_map_file,
                                        "--p", "3", "--q", "2",
                                        "--trials", "8", "--samples", "16"])
        assert code == 0
        rec = json.loads(out)
        diag = rec["diagnostics"]
        assert diag["fully_indecomposable"]["verdict"] == "counterexample_found"
        assert diag["positively_improving"]["verdict"] == "counterexample_found"
        assert diag["contraction"]["step_certified"] is True

    def test_reproducible(self, capsys, generic_map_file):
        argv = ["diagnose", "--map", generic_map_file, "--p", "3", "--q", "2",
                "--trials", "8", "--samples", "16", "--seed", "2"]
        _, out1, _ = run_cli(capsys, argv)
        _, out2, _ = run_cli(capsys, argv)
        assert out1 == out2


class TestVerify:
    def test_identity_pass(self, capsys, identity_map_file):
        code, out, _ = run_cli(capsys, ["verify", "--map", identity_map_file,
                                        "--p", "4", "--q", "2",
                                        "--budget", "1500"])
        assert code == 0
        rec = json.loads(out)
        assert rec["cross_validation"]["status"] == "PASS"
        assert rec["cross_validation"]["power_value"] == pytest.approx(
            2**0.25, abs=1e-6
        )

    def test_desk_scale_exit_3(self, capsys, tmp_path):
        path = tmp_path / "big.json"
        save_map(MapFile.from_cpmap(identity_channel(7)), path)
        code, _, err = run_cli(capsys, ["verify", "--map", str(path),
                                        "--p", "3", "--q", "2"])
        assert code == 3
        assert "error:" in err
