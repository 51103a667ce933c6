"""
Demazure roots and the locally nilpotent derivations they define.

A root e for ray rho_i gives the derivation chi^m -> <m, rho_i> chi^(m+e) on
k[X_sigma]. On A^n it lifts to x^e' * d/dx_i where e' is pairings(e) with
slot i set to 0. Multiplying by a kernel element g (a polynomial free of x_i
built from invariant monomials) gives a replica, whose flow is
x_i -> x_i + time * g * x^e'.

Words compose flows: steps s_1 .. s_k act on points in that order.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from sympy import Rational

from cone import SimplicialCone
from errors import DimensionError, DomainError
from lattice import LatticeVector, pair
from quotient import QuotientPresentation, invariant_generators, is_invariant
from symalg import (
    MultiPoly,
    UniPoly,
    coordinate,
    coordinate_symbols,
    evaluate_on_curve,
    jacobian_determinant,
    monomial,
    multi_terms,
    substitute_coordinate,
    uni_constant,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DemazureRoot:
    """
    Attributes:
        ray_index: i
        ray: rho_i
        e: the root in M
        lifted_exponent: pairings(e) with slot i replaced by 0
    """
    ray_index: int
    ray: LatticeVector
    e: LatticeVector
    lifted_exponent: Tuple[int, ...]

    @classmethod
    def from_vector(cls, c: SimplicialCone, i: int, e: Sequence[int]) -> "DemazureRoot":
        if not 0 <= i < c.rank:
            raise DomainError(f"ray index {i} outside [0, {c.rank})")
        a = c.pairings(e)
        if a[i] != -1:
            raise DomainError(f"<e, rho_{i}> = {a[i]}, expected -1")
        if any(a[j] < 0 for j in range(c.rank) if j != i):
            raise DomainError(f"e = {tuple(e)} pairs negatively with a ray other than {i}")
        return cls(
            ray_index=i,
            ray=c.rays[i],
            e=tuple(int(x) for x in e),
            lifted_exponent=tuple(0 if j == i else a[j] for j in range(c.rank)),
        )

    @property
    def rank(self) -> int:
        return len(self.e)


@dataclass(frozen=True)
class LiftedField:
    """The vector field kernel_coefficient * x^e' * d/dx_i on A^n."""
    root: DemazureRoot
    kernel_coefficient: MultiPoly

    @property
    def ray_index(self) -> int:
        return self.root.ray_index

    @property
    def multiplier(self) -> MultiPoly:
        """Coefficient F of d/dx_i."""
        return self.kernel_coefficient * monomial(self.root.lifted_exponent)


@dataclass(frozen=True)
class FlowStep:
    field: LiftedField
    time: Rational

    @property
    def ray_index(self) -> int:
        return self.field.ray_index

    @property
    def image(self) -> MultiPoly:
        """Image of x_i: x_i + time * F."""
        n = self.field.root.rank
        return coordinate(self.ray_index, n) + self.field.multiplier * monomial((0,) * n, self.time)

    def inverse(self) -> "FlowStep":
        return FlowStep(field=self.field, time=-self.time)


@dataclass(frozen=True)
class AutomorphismWord:
    rank: int
    steps: Tuple[FlowStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def then(self, other: "AutomorphismWord") -> "AutomorphismWord":
        """Apply self first, other after."""
        if other.rank != self.rank:
            raise DimensionError(f"cannot compose words of rank {self.rank} and {other.rank}")
        return AutomorphismWord(rank=self.rank, steps=self.steps + other.steps)


def enumerate_roots(c: SimplicialCone, i: int, height_bound: int) -> List[DemazureRoot]:
    """
    All roots e for ray i with 0 <= <e, rho_j> <= height_bound for j != i.

    Sorted by (height of e', e'), so a root with e' = 0 comes first when it
    exists.
    """
    if not 0 <= i < c.rank:
        raise DomainError(f"ray index {i} outside [0, {c.rank})")
    if height_bound < 1:
        raise DomainError(f"height bound must be >= 1, got {height_bound}")
    others = [j for j in range(c.rank) if j != i]
    found = []
    for values in itertools.product(range(height_bound + 1), repeat=len(others)):
        a = [0] * c.rank
        a[i] = -1
        for j, v in zip(others, values):
            a[j] = v
        if c.in_lattice(a):
            found.append(DemazureRoot.from_vector(c, i, c.from_pairings(a)))
    found.sort(key=lambda r: (sum(r.lifted_exponent), r.lifted_exponent))
    logger.debug("ray %d: %d roots within height %d", i, len(found), height_bound)
    return found


def apply_derivation(root: DemazureRoot, m: Sequence[int]) -> Tuple[int, LatticeVector]:
    """chi^m -> scale * chi^(m + e); scale 0 means m lies in the kernel."""
    if len(m) != root.rank:
        raise DimensionError(f"expected a vector of length {root.rank}, got {len(m)}")
    return pair(m, root.ray), tuple(int(a) + b for a, b in zip(m, root.e))


def lift_field(
    p: QuotientPresentation,
    root: DemazureRoot,
    g_coeff: Optional[MultiPoly] = None,
) -> LiftedField:
    """
    Lift of the root's derivation, optionally multiplied by a kernel element.

    Raises:
        DomainError: g_coeff involves x_i or has a non-invariant monomial
    """
    n = p.rank
    if g_coeff is None:
        g_coeff = monomial((0,) * n)
    if len(g_coeff.gens) != n:
        raise DimensionError(f"coefficient in {len(g_coeff.gens)} variables, expected {n}")
    i = root.ray_index
    for exps, _ in multi_terms(g_coeff):
        if exps[i] != 0:
            raise DomainError(f"kernel coefficient involves x{i + 1}")
        if not is_invariant(p, exps):
            raise DomainError(f"kernel coefficient has non-invariant monomial {exps}")
    return LiftedField(root=root, kernel_coefficient=g_coeff)


def apply_field(f: LiftedField, p: MultiPoly) -> MultiPoly:
    x_i = coordinate_symbols(len(p.gens))[f.ray_index]
    return f.multiplier * p.diff(x_i)


def nilpotency_index(f: LiftedField, p: MultiPoly) -> int:
    """Number of applications of the field until p becomes 0."""
    count = 0
    while not p.is_zero:
        p = apply_field(f, p)
        count += 1
    return count


def flow_on_polynomial(step: FlowStep, p: MultiPoly) -> MultiPoly:
    """p composed with the flow: x_i -> x_i + time * F."""
    return substitute_coordinate(p, step.ray_index, step.image)


def word_apply(word: AutomorphismWord, p: MultiPoly) -> MultiPoly:
    """Pullback p o phi_k o ... o phi_1; substitutions run last step first."""
    for step in reversed(word.steps):
        p = flow_on_polynomial(step, p)
    return p


def word_inverse(word: AutomorphismWord) -> AutomorphismWord:
    return AutomorphismWord(rank=word.rank, steps=tuple(s.inverse() for s in reversed(word.steps)))


def word_apply_curve(word: AutomorphismWord, coords: Sequence[UniPoly]) -> List[UniPoly]:
    """Push a parameterised curve forward through the steps, in order."""
    if len(coords) != word.rank:
        raise DimensionError(f"curve of length {len(coords)} for a rank {word.rank} word")
    coords = list(coords)
    for step in word.steps:
        i = step.ray_index
        increment = evaluate_on_curve(step.field.multiplier, coords)
        coords[i] = coords[i] + increment * uni_constant(step.time)
    return coords


def composed_images(word: AutomorphismWord) -> List[MultiPoly]:
    """Pullbacks of x_1 .. x_n through the whole word."""
    return [word_apply(word, coordinate(j, word.rank)) for j in range(word.rank)]


def step_jacobian(step: FlowStep) -> MultiPoly:
    n = step.field.root.rank
    images = [step.image if j == step.ray_index else coordinate(j, n) for j in range(n)]
    return jacobian_determinant(images)


def word_jacobian(word: AutomorphismWord) -> MultiPoly:
    """
    Jacobian determinant of the composed substitution.

    Chain rule: det J(phi_k o ... o phi_1) is the product over k of
    det J(phi_k) pulled back through phi_{k-1} o ... o phi_1.
    """
    total = monomial((0,) * word.rank)
    for k, step in enumerate(word.steps):
        det = step_jacobian(step)
        if not det.is_ground:
            det = word_apply(AutomorphismWord(rank=word.rank, steps=word.steps[:k]), det)
        total = total * det
    return total


def step_is_unimodular(step: FlowStep) -> bool:
    """d(image of x_i)/dx_i == 1 and the coefficient is free of x_i."""
    n = step.field.root.rank
    x_i = coordinate_symbols(n)[step.ray_index]
    one = monomial((0,) * n)
    return step.image.diff(x_i) == one and step.field.multiplier.diff(x_i).is_zero


def verify_descends(p: QuotientPresentation, f: LiftedField) -> bool:
    """
    True iff the field maps every invariant generator to a sum of invariant
    monomials.
    """
    for gen in invariant_generators(p):
        image = apply_field(f, monomial(gen.exponents))
        if any(not is_invariant(p, exps) for exps, _ in multi_terms(image)):
            return False
    return True


def is_pi_related(p: QuotientPresentation, root: DemazureRoot) -> bool:
    """
    Lifted field applied to pi^*(chi^m) equals pi^* of the derivation of chi^m
    for every dual Hilbert basis element m.
    """
    f = lift_field(p, root)
    for gen in invariant_generators(p):
        scale, shifted = apply_derivation(root, gen.m)
        downstairs = monomial(p.exponent(shifted), scale) if scale else monomial((0,) * p.rank, 0)
        if apply_field(f, monomial(gen.exponents)) != downstairs:
            return False
    return True
