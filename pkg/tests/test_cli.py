import json
from pathlib import Path

import pytest

import cli

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def _write_job(tmp_path, data, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_analyze_orthant(capsys):
    assert cli.main(["run", "--job", str(JOBS / "orthant.json")]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "group order:      1" in out
    assert "smooth in codim:  4" in out


def test_analyze_order5(capsys):
    assert cli.main(["run", "--job", str(JOBS / "order5.json"), "--task", "analyze"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "group order:      5" in out
    assert "smooth in codim:  3" in out
    assert "in SL_n:          True" in out


def test_roots_listing(capsys):
    assert cli.main(["run", "--job", str(JOBS / "orthant.json"), "--task", "roots"]) == cli.EXIT_OK
    assert "Total: 108 roots" in capsys.readouterr().out


def test_certify(capsys):
    assert cli.main(["run", "--job", str(JOBS / "a4_straighten.json"), "--task", "certify"]) == cli.EXIT_OK
    assert "Result: PASS" in capsys.readouterr().out


def test_broken_curve_violates_hypothesis(capsys):
    assert cli.main(["run", "--job", str(JOBS / "broken.json")]) == cli.EXIT_HYPOTHESIS
    assert "Hypothesis violated (curve validity)" in capsys.readouterr().err
    assert cli.main(["run", "--job", str(JOBS / "broken.json"), "--task", "certify"]) == cli.EXIT_HYPOTHESIS


def test_dependent_rays_are_an_input_error(tmp_path, capsys):
    job = _write_job(tmp_path, {"cone": {"rays": [[1, 0, 0], [0, 1, 0], [1, 1, 0]]}, "task": "analyze"})
    assert cli.main(["run", "--job", job]) == cli.EXIT_INPUT
    assert "rays dependent" in capsys.readouterr().err


def test_float_coefficient_is_an_input_error(tmp_path, capsys):
    job = _write_job(tmp_path, {
        "cone": {"rays": [[1, 0], [0, 1]]},
        "curves": {"c": [[0, 0.5], [1]]},
        "task": "certify",
    })
    assert cli.main(["run", "--job", job]) == cli.EXIT_INPUT
    assert "$.curves.c[0][1]" in capsys.readouterr().err


def test_missing_job_file(tmp_path):
    assert cli.main(["run", "--job", str(tmp_path / "none.json")]) == cli.EXIT_INPUT


def test_missing_config_falls_back_to_defaults(tmp_path, capsys):
    code = cli.main(["--config", str(tmp_path / "config.json"), "run", "--job", str(JOBS / "orthant.json")])
    assert code == cli.EXIT_OK
    assert "using defaults" in capsys.readouterr().out


@pytest.fixture(scope="module")
def straighten_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("straighten")
    word, transcript = out / "word.json", out / "transcript.json"
    code = cli.main(["run", "--job", str(JOBS / "a4_straighten.json"),
                     "--emit", str(word), "--transcript", str(transcript)])
    return code, word, transcript


def test_straighten_emits_word_and_transcript(straighten_run):
    code, word, transcript = straighten_run
    assert code == cli.EXIT_OK
    record = json.loads(transcript.read_text(encoding="utf-8"))
    assert record["verified"] is True
    assert record["seed"] == 42
    assert all(len(coeffs) <= 2 for coeffs in record["image"])
    assert json.loads(word.read_text(encoding="utf-8"))["rank"] == 4


def test_transcript_is_deterministic(straighten_run, tmp_path):
    _, _, transcript = straighten_run
    again = tmp_path / "transcript.json"
    assert cli.main(["run", "--job", str(JOBS / "a4_straighten.json"), "--transcript", str(again)]) == cli.EXIT_OK
    assert again.read_bytes() == transcript.read_bytes()


def test_verify_replays_word(straighten_run, capsys):
    _, word, _ = straighten_run
    capsys.readouterr()
    assert cli.main(["verify", "--word", str(word), "--job", str(JOBS / "a4_straighten.json")]) == cli.EXIT_OK
    assert capsys.readouterr().out.strip() == "PASS"


def test_verify_rejects_tampered_word(straighten_run, tmp_path, capsys):
    _, word, _ = straighten_run
    data = json.loads(word.read_text(encoding="utf-8"))
    cubic = [s for s in data["steps"] if s["ray"] == 2]
    assert len(cubic) == 1
    cubic[0]["time"] = "2"
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(data), encoding="utf-8")
    capsys.readouterr()
    assert cli.main(["verify", "--word", str(tampered), "--job", str(JOBS / "a4_straighten.json")]) == cli.EXIT_FAIL
    assert capsys.readouterr().out.strip() == "FAIL"


def test_verify_against_other_cone(straighten_run):
    _, word, _ = straighten_run
    assert cli.main(["verify", "--word", str(word), "--job", str(JOBS / "order5.json")]) == cli.EXIT_INPUT


def test_extend_and_verify(tmp_path, capsys):
    word = tmp_path / "word.json"
    job = str(JOBS / "a4_extend.json")
    assert cli.main(["run", "--job", job, "--emit", str(word)]) == cli.EXIT_OK
    assert "Verification: PASS" in capsys.readouterr().out
    assert cli.main(["verify", "--word", str(word), "--job", job]) == cli.EXIT_OK
    assert capsys.readouterr().out.strip() == "PASS"


def test_certain_failure_is_not_reported_as_undecided(tmp_path, capsys):
    job = _write_job(tmp_path, {
        "cone": {"rays": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]},
        "curves": {"c": [[0, 1], [1, 0, 1], [1, 0, 1], [0, 0, 0, 1]]},
        "task": "certify",
        "options": {"curve": "c", "ext_bound": 4},
    })
    assert cli.main(["run", "--job", job]) == cli.EXIT_HYPOTHESIS
    assert "Result: FAIL" in capsys.readouterr().out
    assert cli.main(["run", "--job", job, "--task", "straighten"]) == cli.EXIT_HYPOTHESIS
    assert "search bound exhausted" not in capsys.readouterr().err


def test_unreadable_job_is_an_input_error(tmp_path, capsys):
    binary = tmp_path / "binary.json"
    binary.write_bytes(b"\xff\xfe")
    assert cli.main(["run", "--job", str(binary)]) == cli.EXIT_INPUT
    assert cli.main(["run", "--job", str(tmp_path)]) == cli.EXIT_INPUT
    assert "Input error" in capsys.readouterr().err


def test_job_without_subcommand_runs(capsys):
    assert cli.main(["--job", str(JOBS / "orthant.json"), "--task", "roots"]) == cli.EXIT_OK
    assert "Total: 108 roots" in capsys.readouterr().out


def test_verify_pins_transcript_lines(straighten_run, tmp_path, capsys):
    _, word, transcript = straighten_run
    job = str(JOBS / "a4_straighten.json")
    capsys.readouterr()
    assert cli.main(["verify", "--word", str(word), "--job", job, "--transcript", str(transcript)]) == cli.EXIT_OK
    assert capsys.readouterr().out.strip() == "PASS"

    record = json.loads(transcript.read_text(encoding="utf-8"))
    record["target"][0][1] = "1/7"
    shifted = tmp_path / "shifted.json"
    shifted.write_text(json.dumps(record), encoding="utf-8")
    assert cli.main(["verify", "--word", str(word), "--job", job, "--transcript", str(shifted)]) == cli.EXIT_FAIL
    assert capsys.readouterr().out.strip() == "FAIL"
