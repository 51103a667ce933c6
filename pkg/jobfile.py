"""
Job and word file formats.

A job file names a cone, a set of lifted curves and a task:

    {"cone": {"rays": [[1, 0], [0, 1]]},
     "curves": {"c": [[0, 1], [1, 1]]},
     "task": "certify",
     "options": {"curve": "c", "seed": 42}}

Curve coordinates are ascending coefficient lists. Rationals are ints or
"p/q" strings; floats are rejected. A word file records an automorphism as
ordered flow steps and is written canonically, so parsing and re-writing a
word file reproduces it byte for byte.
"""

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy import Rational

from cone import SimplicialCone
from errors import DimensionError, DomainError, JobError
from lnd import AutomorphismWord, DemazureRoot, FlowStep, lift_field
from quotient import QuotientPresentation
from symalg import monomial, multi_terms, multi_zero, to_rational

TASKS = ("analyze", "roots", "certify", "straighten", "extend")


@dataclass
class JobOptions:
    """Per-job overrides; None falls through to config.json."""
    curve: Optional[str] = None
    target_curve: Optional[str] = None
    seed: Optional[int] = None
    root_bound: Optional[int] = None
    ext_bound: Optional[int] = None
    max_retries: Optional[int] = None
    height_bound: Optional[int] = None
    reparam: Tuple[Rational, Rational] = (Rational(1), Rational(0))
    targets: Optional[List[Tuple[Rational, Rational]]] = None


@dataclass
class Job:
    rays: List[List[int]]
    curves: Dict[str, List[List[Rational]]]
    task: str
    options: JobOptions = field(default_factory=JobOptions)

    @property
    def rank(self) -> int:
        return len(self.rays)

    def curve(self, name: Optional[str]) -> List[List[Rational]]:
        """Coefficients of a named curve; the first curve when name is None."""
        if not self.curves:
            raise JobError("job defines no curves", "$.curves")
        if name is None:
            name = next(iter(self.curves))
        if name not in self.curves:
            raise JobError(f"unknown curve {name!r}", "$.options.curve")
        return self.curves[name]


def _int(value, location: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise JobError(f"expected an integer, got {value!r}", location)
    return value


def _rational(value, location: str) -> Rational:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise JobError(f"expected an integer or a \"p/q\" string, got {value!r}", location)
    try:
        return to_rational(value)
    except (TypeError, ValueError, DomainError, ZeroDivisionError) as e:
        raise JobError(f"not an exact rational: {value!r} ({e})", location)


def _list(value, location: str) -> list:
    if not isinstance(value, list):
        raise JobError(f"expected a list, got {type(value).__name__}", location)
    return value


def _pair(value, location: str) -> Tuple[Rational, Rational]:
    items = _list(value, location)
    if len(items) != 2:
        raise JobError("expected a pair", location)
    return _rational(items[0], f"{location}[0]"), _rational(items[1], f"{location}[1]")


def parse_job(data: Dict) -> Job:
    """
    Validate a decoded job document.

    Raises:
        JobError: with the JSON path of the first violation
    """
    if not isinstance(data, dict):
        raise JobError("job must be an object")
    cone = data.get("cone")
    if not isinstance(cone, dict) or "rays" not in cone:
        raise JobError("missing cone.rays", "$.cone")
    rays = [
        [_int(v, f"$.cone.rays[{r}][{k}]") for k, v in enumerate(_list(ray, f"$.cone.rays[{r}]"))]
        for r, ray in enumerate(_list(cone["rays"], "$.cone.rays"))
    ]
    if not rays:
        raise JobError("a cone needs at least one ray", "$.cone.rays")
    n = len(rays)
    for r, ray in enumerate(rays):
        if len(ray) != n:
            raise JobError(f"ray has length {len(ray)}, expected {n}", f"$.cone.rays[{r}]")

    curves = {}
    raw_curves = data.get("curves", {})
    if not isinstance(raw_curves, dict):
        raise JobError("curves must be an object", "$.curves")
    for name, coords in raw_curves.items():
        loc = f"$.curves.{name}"
        coords = _list(coords, loc)
        if len(coords) != n:
            raise JobError(f"curve has {len(coords)} coordinates, cone has rank {n}", loc)
        curves[name] = [
            [_rational(v, f"{loc}[{j}][{k}]") for k, v in enumerate(_list(coeffs, f"{loc}[{j}]"))]
            for j, coeffs in enumerate(coords)
        ]

    task = data.get("task", "analyze")
    if task not in TASKS:
        raise JobError(f"unknown task {task!r}, expected one of {', '.join(TASKS)}", "$.task")

    raw = data.get("options", {})
    if not isinstance(raw, dict):
        raise JobError("options must be an object", "$.options")
    options = JobOptions()
    for key in ("curve", "target_curve"):
        if key in raw:
            if not isinstance(raw[key], str):
                raise JobError("expected a curve name", f"$.options.{key}")
            if raw[key] not in curves:
                raise JobError(f"unknown curve {raw[key]!r}", f"$.options.{key}")
            setattr(options, key, raw[key])
    for key in ("seed", "root_bound", "ext_bound", "max_retries", "height_bound"):
        if key in raw:
            setattr(options, key, _int(raw[key], f"$.options.{key}"))
    if "reparam" in raw:
        options.reparam = _pair(raw["reparam"], "$.options.reparam")
        if options.reparam[0] == 0:
            raise JobError("reparameterization needs a != 0", "$.options.reparam[0]")
    if "targets" in raw:
        targets = _list(raw["targets"], "$.options.targets")
        if len(targets) != n:
            raise JobError(f"{len(targets)} target pairs, cone has rank {n}", "$.options.targets")
        options.targets = [_pair(t, f"$.options.targets[{i}]") for i, t in enumerate(targets)]
        for i, (c, _) in enumerate(options.targets):
            if c == 0:
                raise JobError("target slope must be nonzero", f"$.options.targets[{i}][0]")

    return Job(rays=rays, curves=curves, task=task, options=options)


def _read_json(path: str, kind: str):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        raise JobError(f"{kind} file not found: {path}")
    except json.JSONDecodeError as e:
        raise JobError(f"invalid JSON: {e.msg} (line {e.lineno})")
    except UnicodeDecodeError as e:
        raise JobError(f"{kind} file is not UTF-8: byte {e.start}")
    except OSError as e:
        raise JobError(f"cannot read {kind} file {path}: {e.strerror or e}")


def load_job(path: str) -> Job:
    return parse_job(_read_json(path, "job"))


def load_transcript_targets(path: str, rank: int) -> List[Tuple[Rational, Rational]]:
    """Line constants a straightening run finally used, read back from its transcript."""
    data = _read_json(path, "transcript")
    if not isinstance(data, dict):
        raise JobError("transcript must be an object")
    targets = _list(data.get("target"), "$.target")
    if len(targets) != rank:
        raise JobError(f"{len(targets)} target pairs, cone has rank {rank}", "$.target")
    return [_pair(t, f"$.target[{i}]") for i, t in enumerate(targets)]


# --- word files ---

def format_rational(value: Rational) -> str:
    """Lowest-terms "p/q", or "p" for integers."""
    return str(Rational(value))


def word_to_dict(word: AutomorphismWord, c: SimplicialCone) -> Dict:
    steps = []
    for step in word.steps:
        steps.append({
            "ray": step.ray_index,
            "root": list(step.field.root.e),
            "coefficient": [
                {"exponents": list(exps), "value": format_rational(value)}
                for exps, value in multi_terms(step.field.kernel_coefficient)
            ],
            "time": format_rational(step.time),
        })
    return {"rank": word.rank, "rays": [list(r) for r in c.rays], "steps": steps}


def dump_word(word: AutomorphismWord, c: SimplicialCone) -> str:
    return json.dumps(word_to_dict(word, c), indent=2) + "\n"


def parse_word(data: Dict, p: QuotientPresentation) -> AutomorphismWord:
    """
    Rebuild a word against a presentation, re-validating every root and
    kernel coefficient.

    Raises:
        JobError: schema violations, or rays that differ from the job's cone
    """
    if not isinstance(data, dict):
        raise JobError("word must be an object")
    rank = _int(data.get("rank"), "$.rank")
    if rank != p.rank:
        raise JobError(f"word of rank {rank} for a cone of rank {p.rank}", "$.rank")
    rays = [[_int(v, "$.rays") for v in _list(r, "$.rays")] for r in _list(data.get("rays"), "$.rays")]
    if [tuple(r) for r in rays] != list(p.cone.rays):
        raise JobError("word was built for a different cone", "$.rays")

    steps = []
    for k, raw in enumerate(_list(data.get("steps"), "$.steps")):
        loc = f"$.steps[{k}]"
        if not isinstance(raw, dict):
            raise JobError("step must be an object", loc)
        ray = _int(raw.get("ray"), f"{loc}.ray")
        e = [_int(v, f"{loc}.root") for v in _list(raw.get("root"), f"{loc}.root")]
        coeff = multi_zero(rank)
        for t, term in enumerate(_list(raw.get("coefficient"), f"{loc}.coefficient")):
            tloc = f"{loc}.coefficient[{t}]"
            if not isinstance(term, dict):
                raise JobError("term must be an object", tloc)
            exps = [_int(v, f"{tloc}.exponents") for v in _list(term.get("exponents"), f"{tloc}.exponents")]
            if len(exps) != rank:
                raise JobError(f"expected {rank} exponents", f"{tloc}.exponents")
            coeff = coeff + monomial(exps, _rational(term.get("value"), f"{tloc}.value"))
        try:
            root = DemazureRoot.from_vector(p.cone, ray, e)
            f = lift_field(p, root, coeff)
        except (DomainError, DimensionError) as err:
            raise JobError(str(err), loc)
        steps.append(FlowStep(field=f, time=_rational(raw.get("time"), f"{loc}.time")))
    return AutomorphismWord(rank=rank, steps=tuple(steps))


def load_word(path: str, p: QuotientPresentation) -> AutomorphismWord:
    return parse_word(_read_json(path, "word"), p)
