"""Command-line interface: exit codes, output contracts, env caps."""

import io
import json
import pathlib
import subprocess

import pytest

from paralab.cli import EXIT_NO, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, run
from paralab.models import check_model, classical_model, model_from_json, model_to_json
from paralab.theories import theory_from_name

GOLDEN = (pathlib.Path(__file__).parent / "data" / "c1.p").read_text()

VALID_TRANSCRIPT = """\
1 AX A1 i(X,i(Y,X))
2 AX A2 i(i(X,Y),i(i(X,i(Y,Z)),i(X,Z)))
3 CD 2,1 i(i(X,i(i(Y,X),Z)),i(X,Z))
4 CD 3,1 i(X,X)
"""

# c1 stripped to the lone non-implication axiom: saturates immediately
A9_ALONE = "c1" + "".join(
    f"-A{k}" for k in (1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 14))


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("PARALAB_MAX_SECONDS", raising=False)


class TestProve:
    def test_axiom_instance(self, capsys):
        assert run(["prove", "--theory", "c1", "--goal", "i(p,i(q,p))"]) == EXIT_OK
        assert capsys.readouterr().out == "1 AX A1 i(X,i(Y,X))\n"

    def test_saturation_is_definitive_no(self, capsys):
        code = run(["prove", "--theory", A9_ALONE, "--goal", "i(X,X)"])
        assert code == EXIT_NO
        err = capsys.readouterr().err
        assert "exhausted: saturated" in err

    def test_budget_exhaustion_is_unknown(self, capsys):
        code = run(["prove", "--theory", "c1", "--goal", "n(X)",
                    "--max-generated", "1000"])
        assert code == EXIT_UNKNOWN
        err = capsys.readouterr().err
        assert "exhausted: max_generated" in err
        stats = json.loads(err.strip().splitlines()[-1])
        assert stats["generated"] == 1000

    def test_env_cap_applies(self, capsys, monkeypatch):
        monkeypatch.setenv("PARALAB_MAX_SECONDS", "0.05")
        code = run(["prove", "--theory", "c1", "--goal", "n(X)"])
        assert code == EXIT_UNKNOWN
        assert "max_seconds" in capsys.readouterr().err

    def test_env_cap_minimum_wins(self, capsys, monkeypatch):
        monkeypatch.setenv("PARALAB_MAX_SECONDS", "0.05")
        code = run(["prove", "--theory", "c1", "--goal", "n(X)",
                    "--max-seconds", "3600"])
        assert code == EXIT_UNKNOWN

    def test_bad_env_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("PARALAB_MAX_SECONDS", "soon")
        assert run(["prove", "--theory", "c1", "--goal", "i(X,X)"]) == EXIT_USAGE

    def test_bad_theory_and_goal(self, capsys):
        assert run(["prove", "--theory", "k3", "--goal", "i(X,X)"]) == EXIT_USAGE
        assert run(["prove", "--theory", "c1", "--goal", "i(X"]) == EXIT_USAGE


class TestCheckProof:
    def test_valid_from_file(self, capsys, tmp_path):
        path = tmp_path / "proof.txt"
        path.write_text(VALID_TRANSCRIPT)
        assert run(["check-proof", "--theory", "c1", str(path)]) == EXIT_OK
        assert capsys.readouterr().out == "valid\n"

    def test_valid_from_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(VALID_TRANSCRIPT))
        assert run(["check-proof", "--theory", "c1", "-"]) == EXIT_OK

    def test_invalid_line_reported(self, capsys, tmp_path):
        path = tmp_path / "proof.txt"
        path.write_text(VALID_TRANSCRIPT.replace("CD 3,1 i(X,X)", "CD 1,3 i(X,X)"))
        assert run(["check-proof", "--theory", "c1", str(path)]) == EXIT_NO
        assert capsys.readouterr().out.startswith("invalid at line 4:")

    def test_malformed(self, capsys, tmp_path):
        path = tmp_path / "proof.txt"
        path.write_text("1 AX\n")
        assert run(["check-proof", "--theory", "c1", str(path)]) == EXIT_NO
        assert "malformed transcript" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert run(["check-proof", "--theory", "c1", "/no/such/file"]) == EXIT_USAGE


class TestFindModel:
    def test_smallest_c1_model(self, capsys):
        assert run(["find-model", "--theory", "c1"]) == EXIT_OK
        out = capsys.readouterr().out.strip()
        m = model_from_json(out)
        assert m.size == 1 and check_model(m, theory_from_name("c1")).ok

    def test_min_size(self, capsys):
        assert run(["find-model", "--theory", "c1+explosion",
                    "--min-size", "2", "--max-size", "2"]) == EXIT_OK
        m = model_from_json(capsys.readouterr().out.strip())
        assert m.size == 2
        assert check_model(m, theory_from_name("c1+explosion")).ok

    def test_timeout_exit(self, capsys, monkeypatch):
        monkeypatch.setenv("PARALAB_MAX_SECONDS", "0.01")
        code = run(["find-model", "--theory", "c1",
                    "--min-size", "4", "--max-size", "4"])
        assert code == EXIT_UNKNOWN
        stats = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert stats["timed_out"] is True

    def test_bad_range(self, capsys):
        assert run(["find-model", "--theory", "c1", "--max-size", "0"]) == EXIT_USAGE


class TestCheckModel:
    def test_ok(self, capsys, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(model_to_json(classical_model()))
        assert run(["check-model", "--theory", "c1+explosion",
                    "--model", str(path)]) == EXIT_OK
        assert capsys.readouterr().out == "ok\n"

    def test_violations_listed(self, capsys, tmp_path):
        doc = json.loads(model_to_json(classical_model()))
        doc["provable"] = []
        path = tmp_path / "m.json"
        path.write_text(json.dumps(doc))
        assert run(["check-model", "--theory", "c1", "--model", str(path)]) == EXIT_NO
        out = capsys.readouterr().out
        assert "A1 fails at {X=0, Y=0}" in out
        assert out.strip().splitlines()[-1].endswith("violations")

    def test_bad_model_file(self, capsys, tmp_path):
        path = tmp_path / "m.json"
        path.write_text("{nope")
        assert run(["check-model", "--theory", "c1", "--model", str(path)]) == EXIT_USAGE


class TestEnumerate:
    def test_size_one(self, capsys):
        assert run(["enumerate", "--theory", "c1", "--max-size", "1"]) == EXIT_OK
        captured = capsys.readouterr()
        lines = captured.out.strip().splitlines()
        assert len(lines) == 1
        assert model_from_json(lines[0]).size == 1
        stats = json.loads(captured.err.strip().splitlines()[-1])
        assert stats["models"] == 1 and stats["last_completed_size"] == 1

    def test_flag_accepted(self, capsys):
        assert run(["enumerate", "--theory", "c1", "--max-size", "1",
                    "--enumerate-all"]) == EXIT_OK


class TestExperiment:
    def test_refuted_exits_one(self, capsys):
        code = run(["experiment", "0", "--max-size", "2"])
        assert code == EXIT_NO
        report = json.loads(capsys.readouterr().out)
        assert report["experiment_id"] == "0"
        assert report["verdict"] == "Refuted"
        assert report["bound"] == 2

    def test_timeout_exits_two(self, capsys, monkeypatch):
        monkeypatch.setenv("PARALAB_MAX_SECONDS", "0.05")
        assert run(["experiment", "0", "--max-size", "6"]) == EXIT_UNKNOWN
        assert json.loads(capsys.readouterr().out)["verdict"] == "Unknown"

    def test_evidence_exits_zero(self, capsys):
        code = run(["experiment", "3", "--max-size", "2"])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "Evidence"
        assert report["details"]["models_scanned"] == 16_387

    def test_experiment2_refuses_theory_flag(self, capsys):
        assert run(["experiment", "2", "--theory", "c1"]) == EXIT_USAGE

    def test_theory_validated_before_launch(self, capsys):
        assert run(["experiment", "3", "--theory", "nope"]) == EXIT_USAGE

    def test_unknown_id(self, capsys):
        assert run(["experiment", "9"]) == EXIT_USAGE


class TestExportTptp:
    def test_golden(self, capsys):
        assert run(["export-tptp", "--theory", "c1"]) == EXIT_OK
        assert capsys.readouterr().out == GOLDEN

    def test_conjecture(self, capsys):
        assert run(["export-tptp", "--theory", "c1", "--goal", "i(X,X)"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.splitlines()[-1] == "fof(goal, conjecture, ![X]: p(i(X,X)))."

    def test_negation_requires_goal(self, capsys):
        assert run(["export-tptp", "--theory", "c1",
                    "--negate-conjecture"]) == EXIT_USAGE


class TestUsage:
    def test_no_arguments(self, capsys):
        assert run([]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_unknown_subcommand(self, capsys):
        assert run(["transmogrify"]) == EXIT_USAGE

    def test_unknown_flag(self, capsys):
        assert run(["prove", "--theory", "c1", "--goal", "p", "--fast"]) == EXIT_USAGE


def test_console_script_installed():
    out = subprocess.run(
        ["paralab", "export-tptp", "--theory", "c1"],
        capture_output=True, text=True, timeout=60,
    )
    assert out.returncode == EXIT_OK
    assert out.stdout == GOLDEN
