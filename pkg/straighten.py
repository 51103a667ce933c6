"""
Straightening of polynomial curves and extension of curve isomorphisms.

build_beta turns coordinate i of a lifted curve into a prescribed h(t) by
replicas of Demazure fields for ray i, leaving the other coordinates alone.
straighten_curve runs it over every coordinate with targets c_i t + d_i,
resampling constants whenever the validity certificate breaks. Two curves
straightened to the same line give an automorphism mapping one to the other.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, Rational
from sympy.polys.domains import QQ

from curveops import LiftedCurve, ValidityCertificate, full_certificate
from errors import (
    BezoutError,
    BoundExhaustedError,
    DomainError,
    ExtensionError,
    HypothesisError,
    ToricError,
)
from lnd import (
    AutomorphismWord,
    FlowStep,
    enumerate_roots,
    lift_field,
    word_apply,
    word_apply_curve,
    word_inverse,
)
from quotient import QuotientPresentation, face_generators, invariant_generators
from symalg import (
    T,
    UniPoly,
    ExtensionSolution,
    WordValues,
    bezout_combination,
    evaluate_on_curve,
    extend_with_retry,
    monomial,
    retry_bounds,
    solve_linear_combination,
    to_rational,
    word_exponents,
)

logger = logging.getLogger(__name__)

ROOT_BOUND = 2
EXT_BOUND = 16
MAX_RETRIES = 8
SAMPLE_RANGE = 97


@dataclass(frozen=True)
class StraighteningTarget:
    """Constants (c_i, d_i) of the line x_i(t) = c_i t + d_i."""
    constants: Tuple[Tuple[Rational, Rational], ...]
    seed: int = 0

    def __post_init__(self):
        for i, (c, _) in enumerate(self.constants):
            if c == 0:
                raise DomainError(f"target slope c_{i} must be nonzero")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence], seed: int = 0) -> "StraighteningTarget":
        return cls(constants=tuple((to_rational(c), to_rational(d)) for c, d in pairs), seed=seed)

    @classmethod
    def sample(cls, n: int, seed: int, sample_range: int = SAMPLE_RANGE) -> "StraighteningTarget":
        sampler = TargetSampler(seed, sample_range, stream=0)
        return cls(constants=tuple(sampler.draw() for _ in range(n)), seed=seed)

    def line(self, i: int) -> UniPoly:
        c, d = self.constants[i]
        return Poly(c * T + d, T, domain=QQ)

    def replace(self, i: int, pair: Tuple[Rational, Rational]) -> "StraighteningTarget":
        constants = list(self.constants)
        constants[i] = pair
        return StraighteningTarget(constants=tuple(constants), seed=self.seed)


class TargetSampler:
    """
    Seeded stream of "general" constants.

    Numerators are uniform in [-N, N] (nonzero for slopes), denominators in [1, N].
    """

    def __init__(self, seed: int, sample_range: int = SAMPLE_RANGE, stream: int = 1):
        if sample_range < 1:
            raise DomainError(f"sample range must be >= 1, got {sample_range}")
        self.sample_range = sample_range
        self._rng = np.random.default_rng([seed, stream])

    def _rational(self, nonzero: bool) -> Rational:
        n = self.sample_range
        while True:
            num = int(self._rng.integers(-n, n + 1))
            if num != 0 or not nonzero:
                break
        den = int(self._rng.integers(1, n + 1))
        return Rational(num, den)

    def draw(self) -> Tuple[Rational, Rational]:
        return self._rational(nonzero=True), self._rational(nonzero=False)


@dataclass(frozen=True)
class BetaConstruction:
    """
    Flow steps for one coordinate together with their provenance.

    Attributes:
        steps: replicas at time 1, in application order
        roots: lifted exponents e' of the roots used
        bezout: Bezout coefficients a_e(t) as strings, per used root
        extensions: extension words and coefficients per used root
        root_bound: height bound that was finally used
        joint: True when the joint solve over roots was needed
    """
    ray_index: int
    steps: Tuple[FlowStep, ...]
    roots: Tuple[Tuple[int, ...], ...] = ()
    bezout: Tuple[str, ...] = ()
    extensions: Tuple[ExtensionSolution, ...] = ()
    root_bound: int = ROOT_BOUND
    joint: bool = False


@dataclass
class StepRecord:
    """Transcript line for one straightened coordinate."""
    ray_index: int
    target: Tuple[Rational, Rational]
    roots: List[Tuple[int, ...]] = field(default_factory=list)
    bezout: List[str] = field(default_factory=list)
    extension_bounds: List[int] = field(default_factory=list)
    steps: int = 0
    resamples: int = 0
    joint: bool = False


@dataclass(frozen=True)
class ExtensionResult:
    """word pushes the input curve forward onto straightened exactly."""
    word: AutomorphismWord
    straightened: LiftedCurve
    transcript: Tuple[StepRecord, ...]
    target: Optional[StraighteningTarget] = None


def build_beta(
    p: QuotientPresentation,
    c: LiftedCurve,
    i: int,
    h: UniPoly,
    root_bound: int = ROOT_BOUND,
    ext_bound: int = EXT_BOUND,
) -> BetaConstruction:
    """
    Flow steps for ray i sending x_i(t) to h(t) along the curve.

    Roots e for ray i give curve values f_e = x^e'(t). Bezout coefficients
    a_e with sum a_e f_e = h - x_i are extended to kernel polynomials g_e in
    the tau_i generators; each (e, g_e) is one replica flowed for time 1.

    Raises:
        BezoutError: the f_e share a zero that h - x_i does not
        ExtensionError: some a_e has no extension up to ext_bound
    """
    if not 0 <= i < c.rank:
        raise DomainError(f"ray index {i} outside [0, {c.rank})")
    delta = h - c.coords[i]
    if delta.is_zero:
        return BetaConstruction(ray_index=i, steps=(), root_bound=root_bound)

    roots, fs, coeffs, used_bound = _bezout_over_roots(p, c, i, delta, root_bound)
    gens = face_generators(p, (i,))
    gen_polys = [monomial(g.exponents) for g in gens]
    values = c.values([g.exponents for g in gens])

    used = [k for k, a in enumerate(coeffs) if not a.is_zero]
    try:
        extensions = [extend_with_retry(values, coeffs[k], ext_bound) for k in used]
        joint = False
    except ExtensionError:
        logger.info("ray %d: per-root extension failed, trying joint solve over %d roots", i, len(roots))
        used, extensions = _joint_extension(roots, fs, values, delta, ext_bound, i)
        joint = True

    steps = []
    for k, ext in zip(used, extensions):
        g_coeff = ext.as_polynomial(gen_polys, p.rank)
        steps.append(FlowStep(field=lift_field(p, roots[k], g_coeff), time=Rational(1)))
    return BetaConstruction(
        ray_index=i,
        steps=tuple(steps),
        roots=tuple(roots[k].lifted_exponent for k in used),
        bezout=tuple(str(coeffs[k].as_expr()) for k in used) if not joint else (),
        extensions=tuple(extensions),
        root_bound=used_bound,
        joint=joint,
    )


def _bezout_over_roots(p, c, i, delta, root_bound):
    last_error = None
    for bound in (root_bound, 2 * root_bound):
        roots = enumerate_roots(p.cone, i, bound)
        fs = c.values([r.lifted_exponent for r in roots])
        if not roots or all(f.is_zero for f in fs):
            last_error = HypothesisError(f"no root for ray {i} is nonzero along the curve",
                                         hypothesis="non-vanishing",
                                         diagnostics={"root_bound": bound})
            continue
        try:
            return roots, fs, bezout_combination(fs, delta), bound
        except BezoutError as e:
            logger.info("ray %d: root values share factor %s at root bound %d",
                        i, e.gcd.as_expr(), bound)
            last_error = e
    raise last_error


def _joint_extension(roots, fs, values, delta, ext_bound, i):
    """Solve sum_e sum_w c_{e,w} f_e w(t) = delta over all roots at once."""
    table = WordValues(values)
    live = [k for k, f in enumerate(fs) if not f.is_zero]
    for bound in retry_bounds(ext_bound):
        words = word_exponents(len(values), bound)
        columns = [fs[k] * table(w) for k in live for w in words]
        solution = solve_linear_combination(columns, delta)
        if solution is None:
            continue
        used, extensions = [], []
        for pos, k in enumerate(live):
            chunk = solution[pos * len(words):(pos + 1) * len(words)]
            kept = [(w, x) for w, x in zip(words, chunk) if x != 0]
            if kept:
                used.append(k)
                extensions.append(ExtensionSolution(
                    bound=bound,
                    words=tuple(w for w, _ in kept),
                    coefficients=tuple(x for _, x in kept),
                ))
        return used, extensions
    raise ExtensionError(ext_bound, {"ray": i, "roots": len(roots), "target": str(delta.as_expr())})


def _certificate_error(cert: ValidityCertificate, context: str) -> ToricError:
    try:
        cert.raise_for_failure(context)
    except ToricError as e:
        return e
    return HypothesisError(context, hypothesis="curve validity")


def straighten_curve(
    p: QuotientPresentation,
    c: LiftedCurve,
    target: StraighteningTarget,
    root_bound: int = ROOT_BOUND,
    ext_bound: int = EXT_BOUND,
    max_retries: int = MAX_RETRIES,
    sample_range: int = SAMPLE_RANGE,
) -> ExtensionResult:
    """
    Compose flows until every coordinate is c_i t + d_i.

    Coordinates are handled in order. After each coordinate the certificate
    is re-run; on failure (c_i, d_i) is resampled, up to max_retries times.

    Returns:
        ExtensionResult whose target holds the constants actually used

    Raises:
        HypothesisError: the input fails its certificate, or retries ran out
            on decided failures
        BoundExhaustedError: retries ran out and the last failure was a bound
    """
    if len(target.constants) != c.rank:
        raise DomainError(f"{len(target.constants)} target pairs for a curve of rank {c.rank}")
    if c.rank < 4:
        logger.warning("rank %d < 4: straightening runs, but is only guaranteed from rank 4 on", c.rank)
    start = time.time()

    cert = full_certificate(c, ext_bound)
    if not cert.passed:
        raise _certificate_error(cert, "input curve")

    sampler = TargetSampler(target.seed, sample_range, stream=1)
    word = AutomorphismWord(rank=c.rank)
    current = c
    transcript = []
    for i in range(c.rank):
        record = StepRecord(ray_index=i, target=target.constants[i])
        last_error: Optional[ToricError] = None
        for attempt in range(max_retries + 1):
            if attempt:
                target = target.replace(i, sampler.draw())
                record.target = target.constants[i]
                record.resamples = attempt
                logger.info("ray %d: resampled target to %s t + %s", i, *target.constants[i])
            try:
                beta = build_beta(p, current, i, target.line(i), root_bound, ext_bound)
            except (HypothesisError, BoundExhaustedError) as e:
                last_error = e
                continue
            step_word = AutomorphismWord(rank=c.rank, steps=beta.steps)
            moved = current.with_coords(word_apply_curve(step_word, current.coords))
            cert = full_certificate(moved, ext_bound)
            if cert.passed:
                current = moved
                word = word.then(step_word)
                record.roots = list(beta.roots)
                record.bezout = list(beta.bezout)
                record.extension_bounds = [ext.bound for ext in beta.extensions]
                record.steps = len(beta.steps)
                record.joint = beta.joint
                last_error = None
                break
            last_error = _certificate_error(cert, f"after straightening coordinate {i}")
        if last_error is not None:
            logger.error("ray %d: giving up after %d resamples", i, max_retries)
            raise last_error
        transcript.append(record)
        logger.info("ray %d straightened with %d steps", i, record.steps)

    logger.info("straightened rank-%d curve in %.2fs, word length %d",
                c.rank, time.time() - start, len(word))
    return ExtensionResult(word=word, straightened=current, transcript=tuple(transcript), target=target)


def extend_isomorphism(
    p: QuotientPresentation,
    c1: LiftedCurve,
    c2: LiftedCurve,
    reparam: Tuple = (1, 0),
    target: Optional[StraighteningTarget] = None,
    seed: int = 42,
    root_bound: int = ROOT_BOUND,
    ext_bound: int = EXT_BOUND,
    max_retries: int = MAX_RETRIES,
    sample_range: int = SAMPLE_RANGE,
) -> ExtensionResult:
    """
    Automorphism word mapping c1 onto c2 reparameterized by t -> a t + b.

    Both curves are straightened to one common line; the word is the first
    straightening followed by the inverse of the second.

    Returns:
        ExtensionResult with straightened = c2 o (a t + b) and the combined transcript
    """
    a, b = reparam
    c2r = c2.reparameterize(a, b)
    if target is None:
        target = StraighteningTarget.sample(c1.rank, seed, sample_range)
    bounds = dict(root_bound=root_bound, ext_bound=ext_bound,
                  max_retries=max_retries, sample_range=sample_range)

    for attempt in range(max_retries + 1):
        s1 = straighten_curve(p, c1, target, **bounds)
        s2 = straighten_curve(p, c2r, s1.target, **bounds)
        if s2.target.constants == s1.target.constants:
            break
        logger.info("targets disagree after resampling, retrying with the second curve's constants")
        target = s2.target
    else:
        raise BoundExhaustedError("straightenings never agreed on a common line",
                                  {"attempts": max_retries + 1})

    word = s1.word.then(word_inverse(s2.word))
    return ExtensionResult(
        word=word,
        straightened=c2r,
        transcript=s1.transcript + s2.transcript,
        target=s1.target,
    )


def verify_extension(
    p: QuotientPresentation,
    word: AutomorphismWord,
    c1: LiftedCurve,
    c2: LiftedCurve,
    symbolic: bool = False,
) -> bool:
    """
    True iff every invariant generator agrees on word(c1) and c2.

    With symbolic=True the generator is pulled back through the word as a
    polynomial before evaluation along c1.
    """
    if not symbolic:
        pushed = word_apply_curve(word, c1.coords)
    for gen in invariant_generators(p):
        m = monomial(gen.exponents)
        if symbolic:
            lhs = evaluate_on_curve(word_apply(word, m), list(c1.coords))
        else:
            lhs = evaluate_on_curve(m, pushed)
        if lhs != evaluate_on_curve(m, list(c2.coords)):
            return False
    return True


def transcript_rows(result: ExtensionResult) -> List[Dict]:
    """Flat records of a transcript, one per coordinate."""
    return [
        {
            "ray": r.ray_index,
            "c": str(r.target[0]),
            "d": str(r.target[1]),
            "steps": r.steps,
            "resamples": r.resamples,
            "roots": " ".join(str(list(e)) for e in r.roots),
            "ext_bounds": ",".join(str(b) for b in r.extension_bounds),
            "joint": r.joint,
        }
        for r in result.transcript
    ]
