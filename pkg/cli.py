"""
Command-line interface for toric-lines.

    python cli.py run --job jobs/a4_straighten.json --emit word.json
    python cli.py verify --word word.json --job jobs/a4_straighten.json
    python cli.py --job jobs/order5.json          (run is implied)

Exit codes: 0 success, 1 failed verification, 2 input error,
3 hypothesis violated, 4 search bound exhausted.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from config import Config, SolverConfig
from cone import build_cone, describe, dual_cone, facet_semigroup, faces, is_face_regular
from curveops import LiftedCurve, full_certificate
from errors import BoundExhaustedError, DimensionError, DomainError, HypothesisError, JobError
from jobfile import Job, dump_word, format_rational, load_job, load_transcript_targets, load_word
from lnd import enumerate_roots, verify_descends, word_apply_curve
from quotient import QuotientPresentation, build_presentation, is_special_linear
from straighten import (
    StraighteningTarget,
    extend_isomorphism,
    straighten_curve,
    transcript_rows,
    verify_extension,
)
from symalg import degree, monomial, uni_coefficients

logger = logging.getLogger("toric-lines")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3
EXIT_BOUND = 4


def _banner(title: str) -> None:
    print(f"\n{'='*60}")
    print(title)
    print(f"{'='*60}")


def _table(rows: List[Dict]) -> None:
    if rows:
        print(pd.DataFrame(rows).to_string(index=False))
    else:
        print("  (none)")


def _curve_text(coords) -> str:
    return ", ".join(str(x.as_expr()) for x in coords)


def _settings(args, config: Config, job: Job) -> SolverConfig:
    """CLI flag > job options > config.json > defaults."""
    opts = job.options
    base = config.override(
        seed=opts.seed, root_bound=opts.root_bound, ext_bound=opts.ext_bound,
        max_retries=opts.max_retries, height_bound=opts.height_bound,
    )
    return config.override(
        base, seed=args.seed, root_bound=args.root_bound,
        ext_bound=args.ext_bound, max_retries=args.max_retries,
    )


def _setup(job: Job):
    c = build_cone(job.rays)
    return c, build_presentation(c)


# --- tasks ---

def cmd_analyze(job: Job, p: QuotientPresentation, settings: SolverConfig, args) -> int:
    c = p.cone
    info = describe(c)
    _banner("Cone analysis")
    print(f"rank:             {c.rank}")
    print(f"det:              {c.det_abs}")
    print(f"group order:      {p.group_order}")
    print(f"cyclic factors:   {list(p.orders)}")
    print(f"weights:          {[list(w) for w in p.characters]}")
    print(f"in SL_n:          {is_special_linear(p)}")
    print(f"smooth in codim:  {info['smooth_in_codim']}")

    data = dual_cone(c)
    _banner("Dual rays")
    _table([{"j": j, "u": list(u), "<u, rho_j>": s} for j, (u, s) in enumerate(zip(data.dual_rays, c.dual_scales))])

    _banner(f"Hilbert basis of the dual cone ({len(data.hilbert_basis)} elements)")
    _table([{"m": list(m), "exponents": list(c.pairings(m))} for m in data.hilbert_basis])

    _banner("Facet semigroups")
    _table([{"ray": i, "generators": " ".join(str(list(m)) for m in facet_semigroup(c, i).hilbert_basis)}
            for i in range(c.rank)])

    if c.rank >= 2:
        _banner("2-faces")
        _table([{"face": list(f), "regular": is_face_regular(c, f)} for f in faces(c, 2)])
    return EXIT_OK


def cmd_roots(job: Job, p: QuotientPresentation, settings: SolverConfig, args) -> int:
    _banner(f"Demazure roots (height <= {settings.height_bound})")
    rows = []
    for i in range(p.rank):
        for root in enumerate_roots(p.cone, i, settings.height_bound):
            rows.append({
                "ray": i,
                "e": list(root.e),
                "field": f"{monomial(root.lifted_exponent).as_expr()} d/dx{i + 1}",
            })
    _table(rows)
    print(f"\nTotal: {len(rows)} roots")
    return EXIT_OK


def _certificate_rows(cert) -> List[Dict]:
    rows = [{"check": "regular locus", "where": "-", "result": cert.in_regular_locus}]
    rows += [{"check": "kappa embedding", "where": l, "result": v.value} for l, v in sorted(cert.embedding_ok.items())]
    rows += [{"check": "psi birational", "where": list(f), "result": ok} for f, ok in sorted(cert.birational_ok.items())]
    rows.append({"check": "e-locus", "where": "-", "result": cert.diagnostics["e_locus"]})
    rows.append({"check": "immersion", "where": "-", "result": cert.diagnostics["immersion"]})
    return rows


def cmd_certify(job: Job, p: QuotientPresentation, settings: SolverConfig, args) -> int:
    curve = LiftedCurve.from_coefficients(p, job.curve(job.options.curve))
    cert = full_certificate(curve, settings.ext_bound)
    _banner(f"Certificate for ({_curve_text(curve.coords)})")
    _table(_certificate_rows(cert))
    print(f"\nResult: {'PASS' if cert.passed else 'FAIL'}")
    if cert.passed:
        return EXIT_OK
    return EXIT_BOUND if cert.undecided else EXIT_HYPOTHESIS


def _target(job: Job, n: int, settings: SolverConfig) -> StraighteningTarget:
    if job.options.targets is not None:
        return StraighteningTarget.from_pairs(job.options.targets, seed=settings.seed)
    return StraighteningTarget.sample(n, settings.seed, settings.sample_range)


def _emit(result, p: QuotientPresentation, args, task: str, settings: SolverConfig, verified: bool) -> None:
    if args.emit:
        Path(args.emit).write_text(dump_word(result.word, p.cone), encoding='utf-8')
        print(f"Word written to {args.emit}")
    if args.transcript:
        record = {
            "task": task,
            "seed": settings.seed,
            "target": [[format_rational(c), format_rational(d)] for c, d in result.target.constants],
            "steps": transcript_rows(result),
            "word_length": len(result.word),
            "image": [[format_rational(a) for a in uni_coefficients(x)] for x in result.straightened.coords],
            "verified": verified,
        }
        Path(args.transcript).write_text(json.dumps(record, indent=2) + "\n", encoding='utf-8')
        print(f"Transcript written to {args.transcript}")


def cmd_straighten(job: Job, p: QuotientPresentation, settings: SolverConfig, args) -> int:
    curve = LiftedCurve.from_coefficients(p, job.curve(job.options.curve))
    result = straighten_curve(
        p, curve, _target(job, p.rank, settings),
        root_bound=settings.root_bound, ext_bound=settings.ext_bound,
        max_retries=settings.max_retries, sample_range=settings.sample_range,
    )
    verified = verify_extension(p, result.word, curve, result.straightened)
    _banner("Straightening transcript")
    _table(transcript_rows(result))
    print(f"\nInput:       ({_curve_text(curve.coords)})")
    print(f"Straightened: ({_curve_text(result.straightened.coords)})")
    print(f"Word length: {len(result.word)}")
    print(f"Verification: {'PASS' if verified else 'FAIL'}")
    _emit(result, p, args, "straighten", settings, verified)
    return EXIT_OK if verified else EXIT_FAIL


def cmd_extend(job: Job, p: QuotientPresentation, settings: SolverConfig, args) -> int:
    if job.options.target_curve is None:
        raise JobError("extend needs options.target_curve", "$.options.target_curve")
    c1 = LiftedCurve.from_coefficients(p, job.curve(job.options.curve))
    c2 = LiftedCurve.from_coefficients(p, job.curve(job.options.target_curve))
    target = StraighteningTarget.from_pairs(job.options.targets, settings.seed) if job.options.targets else None
    result = extend_isomorphism(
        p, c1, c2, reparam=job.options.reparam, target=target, seed=settings.seed,
        root_bound=settings.root_bound, ext_bound=settings.ext_bound,
        max_retries=settings.max_retries, sample_range=settings.sample_range,
    )
    verified = verify_extension(p, result.word, c1, result.straightened)
    _banner("Extension transcript")
    _table(transcript_rows(result))
    print(f"\nSource: ({_curve_text(c1.coords)})")
    print(f"Target: ({_curve_text(result.straightened.coords)})")
    print(f"Word length: {len(result.word)}")
    print(f"Verification: {'PASS' if verified else 'FAIL'}")
    _emit(result, p, args, "extend", settings, verified)
    return EXIT_OK if verified else EXIT_FAIL


TASK_HANDLERS = {
    "analyze": cmd_analyze,
    "roots": cmd_roots,
    "certify": cmd_certify,
    "straighten": cmd_straighten,
    "extend": cmd_extend,
}


def cmd_run(args, config: Config) -> int:
    job = load_job(args.job)
    task = args.task or job.task
    settings = _settings(args, config, job)
    _, p = _setup(job)
    logger.info("running task %s on a rank-%d cone", task, p.rank)
    return TASK_HANDLERS[task](job, p, settings, args)


def cmd_verify(args, config: Config) -> int:
    """
    Replay a word file against a job.

    With options.target_curve the word must map the curve onto it
    (reparameterized); otherwise it must straighten the curve, onto the
    lines recorded in --transcript, or options.targets when given.
    """
    job = load_job(args.job)
    _, p = _setup(job)
    word = load_word(args.word, p)
    c1 = LiftedCurve.from_coefficients(p, job.curve(job.options.curve))

    descends = all(verify_descends(p, step.field) for step in word.steps)
    if job.options.target_curve is not None:
        a, b = job.options.reparam
        c2 = LiftedCurve.from_coefficients(p, job.curve(job.options.target_curve)).reparameterize(a, b)
        ok = verify_extension(p, word, c1, c2)
    else:
        image = word_apply_curve(word, c1.coords)
        ok = all(degree(x) <= 1 for x in image)
        targets = job.options.targets
        if args.transcript:
            targets = load_transcript_targets(args.transcript, p.rank)
        if targets is not None:
            line = StraighteningTarget.from_pairs(targets)
            ok = ok and all(x == line.line(i) for i, x in enumerate(image))
    passed = ok and descends
    print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toric-lines",
        description="Straighten polynomial curves on simplicial affine toric varieties",
    )
    parser.add_argument("--config", "-c", help="Path to config.json")
    parser.add_argument("--log-level", help="Logging level (default: from config.json)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run the task of a job file")
    run.add_argument("--job", "-j", required=True, help="Job file (JSON)")
    run.add_argument("--task", choices=sorted(TASK_HANDLERS), help="Override the job's task")
    run.add_argument("--seed", type=int, help="Seed for sampled line constants")
    run.add_argument("--root-bound", type=int, help="Height bound for Demazure roots")
    run.add_argument("--ext-bound", type=int, help="Word-length cap for extensions")
    run.add_argument("--max-retries", type=int, help="Resamples per coordinate")
    run.add_argument("--emit", help="Write the automorphism word here")
    run.add_argument("--transcript", help="Write the transcript here")

    verify = sub.add_parser("verify", help="Replay a word file against a job")
    verify.add_argument("--word", "-w", required=True, help="Word file (JSON)")
    verify.add_argument("--job", "-j", required=True, help="Job file (JSON)")
    verify.add_argument("--transcript", help="Transcript of the run that emitted the word; pins the exact lines")
    return parser


def _default_to_run(argv: List[str]) -> List[str]:
    """`--job FILE` without a subcommand means `run --job FILE`."""
    if any(a in ("run", "verify") for a in argv):
        return argv
    for k, a in enumerate(argv):
        if a in ("--job", "-j") or a.startswith("--job="):
            return argv[:k] + ["run"] + argv[k:]
    return argv


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(_default_to_run(sys.argv[1:] if argv is None else list(argv)))

    config = Config(args.config) if args.config else Config()
    level = (args.log_level or config.logging.level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    handler = cmd_run if args.command == "run" else cmd_verify
    try:
        return handler(args, config)
    except (JobError, DimensionError, DomainError) as e:
        print(f"Input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except HypothesisError as e:
        print(f"Hypothesis violated ({e.hypothesis}): {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except BoundExhaustedError as e:
        print(f"Undecided, search bound exhausted: {e}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
