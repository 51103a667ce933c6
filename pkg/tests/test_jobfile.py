import json
from pathlib import Path

import pytest
from sympy import Rational

from errors import JobError
from jobfile import (
    dump_word,
    format_rational,
    load_job,
    load_transcript_targets,
    load_word,
    parse_job,
    parse_word,
)
from lnd import AutomorphismWord, DemazureRoot, FlowStep, lift_field
from symalg import monomial

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def _job(**overrides):
    data = {
        "cone": {"rays": [[1, 0], [0, 1]]},
        "curves": {"c": [[0, 1], [1, 0, 1]]},
        "task": "certify",
        "options": {"curve": "c"},
    }
    data.update(overrides)
    return data


@pytest.fixture
def order5_word(order5_p, order5):
    root = DemazureRoot.from_vector(order5, 2, order5.from_pairings((1, 1, -1, 0)))
    coeff = monomial((0, 0, 0, 5), 2) + monomial((0, 0, 0, 0), "-1/3")
    steps = (
        FlowStep(field=lift_field(order5_p, root, coeff), time=Rational(-3, 2)),
        FlowStep(field=lift_field(order5_p, DemazureRoot.from_vector(order5, 3, (1, 0, 0, 0))), time=Rational(4)),
    )
    return AutomorphismWord(rank=4, steps=steps)


class TestParseJob:
    def test_example_jobs_load(self):
        for path in sorted(JOBS.glob("*.json")):
            job = load_job(str(path))
            assert job.rank == 4

    def test_fields(self):
        job = parse_job(_job(options={"curve": "c", "seed": 7, "reparam": [2, "1/2"], "targets": [[1, 0], ["3/4", 1]]}))
        assert job.task == "certify"
        assert job.curves["c"] == [[0, 1], [1, 0, 1]]
        assert job.options.seed == 7
        assert job.options.reparam == (2, Rational(1, 2))
        assert job.options.targets[1] == (Rational(3, 4), 1)
        assert job.curve(None) == job.curve("c")

    @pytest.mark.parametrize("data, location", [
        ({"curves": {}}, "$.cone"),
        (_job(cone={"rays": [[1, 0], [0]]}), "$.cone.rays[1]"),
        (_job(cone={"rays": [[1, 0], [0, "1"]]}), "$.cone.rays[1][1]"),
        (_job(curves={"c": [[0, 1.5], [1]]}), "$.curves.c[0][1]"),
        (_job(curves={"c": [[0, 1]]}), "$.curves.c"),
        (_job(task="solve"), "$.task"),
        (_job(options={"curve": "missing"}), "$.options.curve"),
        (_job(options={"reparam": [0, 1]}), "$.options.reparam[0]"),
        (_job(options={"targets": [[0, 1], [1, 1]]}), "$.options.targets[0][0]"),
        (_job(options={"seed": "42"}), "$.options.seed"),
    ])
    def test_errors_carry_location(self, data, location):
        with pytest.raises(JobError) as info:
            parse_job(data)
        assert info.value.location == location
        assert str(info.value).startswith(location)

    def test_missing_file(self, tmp_path):
        with pytest.raises(JobError, match="not found"):
            load_job(str(tmp_path / "nope.json"))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(JobError, match="invalid JSON"):
            load_job(str(path))


def test_format_rational():
    assert format_rational(Rational(6, 4)) == "3/2"
    assert format_rational(Rational(4, 2)) == "2"
    assert format_rational(Rational(-1, 3)) == "-1/3"


class TestWordFiles:
    def test_canonical_round_trip(self, order5_word, order5_p, order5):
        text = dump_word(order5_word, order5)
        parsed = parse_word(json.loads(text), order5_p)
        assert parsed == order5_word
        assert dump_word(parsed, order5) == text

    def test_layout(self, order5_word, order5):
        data = json.loads(dump_word(order5_word, order5))
        assert data["rank"] == 4
        first = data["steps"][0]
        assert first["ray"] == 2
        assert first["time"] == "-3/2"
        assert first["coefficient"] == [
            {"exponents": [0, 0, 0, 0], "value": "-1/3"},
            {"exponents": [0, 0, 0, 5], "value": "2"},
        ]

    def test_other_cone_is_rejected(self, order5_word, order5, orthant_p):
        data = json.loads(dump_word(order5_word, order5))
        with pytest.raises(JobError) as info:
            parse_word(data, orthant_p)
        assert info.value.location == "$.rays"

    def test_invalid_root_is_rejected(self, order5_word, order5, order5_p):
        data = json.loads(dump_word(order5_word, order5))
        data["steps"][1]["root"] = [0, 0, 0, -1]
        with pytest.raises(JobError) as info:
            parse_word(data, order5_p)
        assert info.value.location == "$.steps[1]"

    def test_non_invariant_coefficient_is_rejected(self, order5_word, order5, order5_p):
        data = json.loads(dump_word(order5_word, order5))
        data["steps"][0]["coefficient"] = [{"exponents": [1, 0, 0, 0], "value": "1"}]
        with pytest.raises(JobError):
            parse_word(data, order5_p)

    def test_load_word(self, tmp_path, order5_word, order5, order5_p):
        path = tmp_path / "word.json"
        path.write_text(dump_word(order5_word, order5), encoding="utf-8")
        assert load_word(str(path), order5_p) == order5_word
        with pytest.raises(JobError):
            load_word(str(tmp_path / "missing.json"), order5_p)


@pytest.mark.parametrize("loader", ["job", "word"])
def test_unreadable_files_are_job_errors(loader, tmp_path, orthant_p):
    def load(path):
        return load_job(path) if loader == "job" else load_word(path, orthant_p)

    binary = tmp_path / "binary.json"
    binary.write_bytes(b"\xff\xfe{}")
    with pytest.raises(JobError, match="not UTF-8") as info:
        load(str(binary))
    assert info.value.location == "$"
    with pytest.raises(JobError, match="cannot read"):
        load(str(tmp_path))


def test_transcript_targets(tmp_path):
    path = tmp_path / "transcript.json"
    path.write_text(json.dumps({"target": [["3", "1/2"], [1, 4]]}), encoding="utf-8")
    assert load_transcript_targets(str(path), 2) == [(3, Rational(1, 2)), (1, 4)]
    with pytest.raises(JobError) as info:
        load_transcript_targets(str(path), 4)
    assert info.value.location == "$.target"
    path.write_text(json.dumps({"target": [["3", 0.5], [1, 4]]}), encoding="utf-8")
    with pytest.raises(JobError) as info:
        load_transcript_targets(str(path), 2)
    assert info.value.location == "$.target[0][1]"
