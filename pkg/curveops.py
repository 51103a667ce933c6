"""
Lifted polynomial curves and their validity certificate.

A curve in X_sigma is given by a lift t -> (x_1(t), ..., x_n(t)) in A^n.
The certificate holds the checks the straightening loop relies on:

- the curve meets only smooth torus orbits
- each divisor projection kappa_l restricts to a closed embedding
- each 2-face projection psi restricts to a birational map
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Dict, List, Sequence, Tuple

from sympy import Poly, Symbol
from sympy.polys.domains import QQ

from cone import faces, is_face_regular, smooth_in_codim
from errors import DimensionError, DomainError, ExtensionError, HypothesisError
from quotient import QuotientPresentation, face_generators, regular_vanishing
from symalg import (
    T,
    UniPoly,
    RationalLike,
    degree,
    evaluate_on_curve,
    extend_with_retry,
    monomial,
    uni_poly,
    uni_constant,
)

logger = logging.getLogger(__name__)

S = Symbol("s")


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"

    def __bool__(self) -> bool:
        return self is Verdict.YES


@dataclass(frozen=True)
class LiftedCurve:
    coords: Tuple[UniPoly, ...]
    presentation: QuotientPresentation

    @classmethod
    def from_coefficients(
        cls,
        p: QuotientPresentation,
        coefficients: Sequence[Sequence[RationalLike]],
    ) -> "LiftedCurve":
        return make_curve(p, [uni_poly(cs) for cs in coefficients])

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(degree(x) for x in self.coords)

    def with_coords(self, coords: Sequence[UniPoly]) -> "LiftedCurve":
        return make_curve(self.presentation, coords)

    def reparameterize(self, a: RationalLike, b: RationalLike) -> "LiftedCurve":
        """The curve t -> x(a t + b)."""
        a_poly = uni_constant(a)
        if a_poly.is_zero:
            raise DomainError("reparameterization needs a != 0")
        inner = Poly(a_poly.as_expr() * T + uni_constant(b).as_expr(), T, domain=QQ)
        return self.with_coords([x.compose(inner) for x in self.coords])

    def values(self, exponent_vectors: Sequence[Sequence[int]]) -> List[UniPoly]:
        """Monomials x^a evaluated along the curve."""
        return [evaluate_on_curve(monomial(a), list(self.coords)) for a in exponent_vectors]


def make_curve(p: QuotientPresentation, coords: Sequence[UniPoly]) -> LiftedCurve:
    if len(coords) != p.rank:
        raise DimensionError(f"curve has {len(coords)} coordinates, cone has rank {p.rank}")
    if all(x.is_ground for x in coords):
        raise DomainError("degenerate curve: every coordinate is constant")
    return LiftedCurve(coords=tuple(coords), presentation=p)


@dataclass
class ValidityCertificate:
    in_regular_locus: bool
    embedding_ok: Dict[int, Verdict]
    birational_ok: Dict[Tuple[int, int], bool]
    diagnostics: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (self.in_regular_locus
                and all(v is Verdict.YES for v in self.embedding_ok.values())
                and all(self.birational_ok.values()))

    @property
    def refuted(self) -> bool:
        """Some check failed for certain."""
        return (not self.in_regular_locus
                or any(v is Verdict.NO for v in self.embedding_ok.values())
                or not all(self.birational_ok.values()))

    @property
    def undecided(self) -> bool:
        """Every failure is an embedding check that ran out of word length."""
        return not self.refuted and any(v is Verdict.UNDECIDED for v in self.embedding_ok.values())

    def failures(self) -> List[str]:
        notes = []
        if not self.in_regular_locus:
            notes.append("curve meets a singular torus orbit")
        for l, v in sorted(self.embedding_ok.items()):
            if v is not Verdict.YES:
                notes.append(f"kappa_{l} embedding: {v.value}")
        for face, ok in sorted(self.birational_ok.items()):
            if not ok:
                notes.append(f"psi_{face} not birational")
        return notes

    def raise_for_failure(self, context: str) -> None:
        """
        Raises:
            BoundExhaustedError subclass when only undecided embedding checks
            failed, HypothesisError when any check failed for certain
        """
        if self.passed:
            return
        notes = self.failures()
        if self.undecided:
            raise ExtensionError(self.diagnostics.get("ext_bound", 0),
                                 {"context": context, "failures": notes})
        raise HypothesisError(f"{context}: {'; '.join(notes)}", hypothesis="curve validity",
                              diagnostics={"failures": notes})


def _has_common_zero(g: UniPoly) -> bool:
    return g.is_zero or g.degree() >= 1


def common_zero_sets(c: LiftedCurve) -> List[Tuple[int, ...]]:
    """Coordinate subsets of size >= 2 that vanish together at some parameter."""
    found = []
    frontier = []
    for pair in itertools.combinations(range(c.rank), 2):
        g = c.coords[pair[0]].gcd(c.coords[pair[1]])
        if _has_common_zero(g):
            frontier.append((pair, g))
    while frontier:
        found.extend(s for s, _ in frontier)
        grown = {}
        for subset, g in frontier:
            for j in range(subset[-1] + 1, c.rank):
                h = g.gcd(c.coords[j])
                if _has_common_zero(h):
                    grown[subset + (j,)] = h
        frontier = sorted(grown.items())
    return found


def check_regular_locus(c: LiftedCurve) -> bool:
    """
    Every set of coordinates with a common zero spans a regular face.

    The points where exactly those coordinates vanish lie over the torus
    orbit of that face.
    """
    return all(regular_vanishing(c.presentation, s) for s in common_zero_sets(c))


def check_e_locus(c: LiftedCurve) -> bool:
    """No parameter value zeroes two coordinates."""
    return not common_zero_sets(c)


def check_immersion(c: LiftedCurve) -> bool:
    """The derivatives x_j'(t) have no common zero."""
    g = reduce(lambda a, b: a.gcd(b), (x.diff(T) for x in c.coords))
    return not _has_common_zero(g)


def check_kappa_embedding(c: LiftedCurve, l: int, degree_bound: int) -> Verdict:
    """
    Whether t is a polynomial in the curve values of the tau_l generators.

    NO is returned only when it is certain: all values constant, or all
    monomials in t with none of degree 1.
    """
    if not 0 <= l < c.rank:
        raise DomainError(f"ray index {l} outside [0, {c.rank})")
    gens = face_generators(c.presentation, (l,))
    values = c.values([g.exponents for g in gens])
    if all(v.is_ground for v in values):
        return Verdict.NO
    if all(len(v.terms()) == 1 for v in values if not v.is_zero) and not any(degree(v) == 1 for v in values):
        return Verdict.NO
    try:
        extend_with_retry(values, Poly(T, T, domain=QQ), degree_bound)
    except ExtensionError:
        logger.debug("kappa_%d: t not reached up to word length %d", l, degree_bound)
        return Verdict.UNDECIDED
    return Verdict.YES


def _proportional(f: UniPoly, g: UniPoly) -> bool:
    return f * uni_constant(g.LC()) == g * uni_constant(f.LC())


def check_psi_birational(c: LiftedCurve, face: Sequence[int]) -> bool:
    """
    Whether psi restricted to the curve is birational onto its image.

    Requires two nonproportional nonconstant values among the face
    generators, and that those values generate QQ(t): the gcd over all
    v(t) - v(s) has degree 1 in t.

    Raises:
        HypothesisError: the face is irregular
    """
    face = tuple(sorted(face))
    if len(face) != 2:
        raise DomainError(f"expected a 2-face, got {face}")
    if not is_face_regular(c.presentation.cone, face):
        raise HypothesisError(f"face {face} is not regular", hypothesis="regular 2-face")
    gens = face_generators(c.presentation, face)
    values = [v for v in c.values([g.exponents for g in gens]) if not v.is_ground]
    if not any(not _proportional(f, g) for f, g in itertools.combinations(values, 2)):
        return False
    differences = [Poly(v.as_expr() - v.as_expr().subs(T, S), T, S, domain=QQ) for v in values]
    g = reduce(lambda a, b: a.gcd(b), differences)
    return g.degree(T) == 1


def full_certificate(c: LiftedCurve, degree_bound: int = 16) -> ValidityCertificate:
    """
    Run every check over all rays and all 2-faces.

    Raises:
        HypothesisError: the cone is not smooth in codimension 2
    """
    cone = c.presentation.cone
    if smooth_in_codim(cone) < 2:
        raise HypothesisError("cone is not smooth in codimension 2",
                              hypothesis="smooth in codimension 2",
                              diagnostics={"smooth_in_codim": smooth_in_codim(cone)})
    cert = ValidityCertificate(
        in_regular_locus=check_regular_locus(c),
        embedding_ok={l: check_kappa_embedding(c, l, degree_bound) for l in range(c.rank)},
        birational_ok={face: check_psi_birational(c, face) for face in faces(cone, 2)},
    )
    cert.diagnostics = {
        "e_locus": check_e_locus(c),
        "immersion": check_immersion(c),
        "common_zero_sets": [list(s) for s in common_zero_sets(c)],
        "ext_bound": degree_bound,
    }
    logger.debug("certificate for degrees %s: passed=%s", c.degrees, cert.passed)
    return cert
