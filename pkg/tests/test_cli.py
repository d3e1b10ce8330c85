from __future__ import annotations

import json

from actrsim.cli import main
from actrsim.experiment import builtin_model_text


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_player1_reinforcement_csv(capsys):
    code, out, err = run_cli(
        capsys, "run", "--player", "1", "--strategy", "reinforcement",
        "--tiebreak", "last-declared",
    )
    assert code == 0
    assert out.splitlines()[1] == "1,0.000,1.873,-0.020,19,0,1"


def test_player2_success_cost_average_row(capsys):
    code, out, err = run_cli(
        capsys, "run", "--player", "2", "--strategy", "success-cost",
        "--tiebreak", "first-declared",
    )
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 22  # header, 20 samples, average
    assert lines[-1] == "avg,7.440,19.822,12.419,8.9,9.1,2"


def test_explicit_model_and_samples_files(tmp_path, capsys):
    model = tmp_path / "game.model"
    model.write_text(builtin_model_text(), encoding="utf-8")
    samples = tmp_path / "moves.txt"
    samples.write_text(" ".join(["r"] * 20) + "\n", encoding="utf-8")
    code, out, _ = run_cli(
        capsys, "run", "--model", str(model), "--samples", str(samples)
    )
    assert code == 0
    assert out.splitlines()[1] == "1,0.000,1.873,-0.020,19,0,1"


def test_missing_model_file_exits_1(capsys):
    code, out, err = run_cli(capsys, "run", "--model", "nonexistent.model")
    assert code == 1
    assert "actrsim:" in err
    assert out == ""


def test_bad_model_text_exits_1_with_position(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("(p broken\n  =goal> isa)", encoding="utf-8")
    code, _, err = run_cli(capsys, "run", "--model", str(bad))
    assert code == 1
    assert "broken" in err


def test_validation_diagnostics_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text(
        "(chunk-type game me)(add-dm (g1 isa game))(goal-focus goal g1)"
        "(p r =goal> isa game score low ==> -goal>)",
        encoding="utf-8",
    )
    code, _, err = run_cli(capsys, "run", "--model", str(bad))
    assert code == 1
    assert "score" in err


def test_provider_exhaustion_exits_2(capsys):
    # 2.5 s needs a 21st move; the samples hold only 20
    code, _, err = run_cli(capsys, "run", "--player", "1", "--t-limit", "2.5")
    assert code == 2
    assert "runtime error" in err


def test_bad_alpha_exits_1(capsys):
    code, _, err = run_cli(capsys, "run", "--player", "1", "--alpha", "3")
    assert code == 1
    assert "alpha" in err


def test_json_format(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--player", "1", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"][0]["U_p"] == 1.873
    assert payload["config"]["strategy"] == "reinforcement"


def test_trace_goes_to_stderr(capsys):
    code, out, err = run_cli(capsys, "run", "--player", "1", "--trace")
    assert code == 0
    lines = err.splitlines()
    assert len(lines) == 40
    assert lines[0].split("\t") == ["1", "0.050", "play-scissors", "=x=rock"]


def test_trace_file(tmp_path, capsys):
    trace_path = tmp_path / "run.trace"
    code, _, err = run_cli(
        capsys, "run", "--player", "1", "--trace-file", str(trace_path)
    )
    assert code == 0
    assert err == ""
    lines = trace_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 40


def test_random_cost_output_is_reproducible(capsys):
    args = ("run", "--player", "2", "--strategy", "random-cost",
            "--seed", "9", "--runs", "3")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_sample_selector_restricts_to_one_sample(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--player", "2", "--sample", "1", "--strategy",
        "random-cost", "--runs", "50", "--seed", "84",
    )
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 52  # header, 50 runs, average
    avg = lines[-1].split(",")
    assert abs(float(avg[2]) - 18.910) <= 0.5  # paper-level mean for U_p


def test_sample_selector_out_of_range(capsys):
    code, _, err = run_cli(capsys, "run", "--player", "2", "--sample", "21")
    assert code == 1
    assert "out of range" in err
