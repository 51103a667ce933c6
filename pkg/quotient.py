"""
Quotient presentation X_sigma = A^n / G for a simplicial cone.

G = N / (Z rho_1 + ... + Z rho_n) acts diagonally on A^n. It is stored as
character weights: generator k multiplies x_j by zeta_{d_k}^{w_j}. The
quotient map pulls chi^m back to the monomial with exponents pairings(m).
"""

import itertools
import logging
from dataclasses import dataclass
from math import lcm
from typing import List, Sequence, Tuple

from cone import SimplicialCone, face_semigroup, is_face_regular
from errors import DimensionError, DomainError
from lattice import LatticeVector, smith_normal_form

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuotientPresentation:
    """
    Attributes:
        cone: the simplicial cone
        group_order: |G| (equals cone.det_abs)
        orders: cyclic factor orders d_k > 1 from the Smith diagonal
        characters: one weight vector per cyclic factor, entries reduced mod d_k
    """
    cone: SimplicialCone
    group_order: int
    orders: Tuple[int, ...]
    characters: Tuple[Tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return self.cone.rank

    def exponent(self, m: Sequence[int]) -> LatticeVector:
        """Exponent vector of the pullback of chi^m."""
        return self.cone.pairings(m)


@dataclass(frozen=True)
class InvariantMonomial:
    m: LatticeVector
    exponents: Tuple[int, ...]


def build_presentation(c: SimplicialCone) -> QuotientPresentation:
    """
    Compute G from the Smith normal form L . R . V = D of the ray matrix R.

    An exponent vector a is G-invariant iff a lies in R . Z^n, iff
    (L . a)_k = 0 mod d_k for every k; the rows of L are therefore the
    character weights.
    """
    snf = smith_normal_form(c.rays)
    orders = []
    characters = []
    for k, d in enumerate(snf.diag):
        if d > 1:
            orders.append(d)
            characters.append(tuple(w % d for w in snf.left[k]))

    group_order = 1
    for d in snf.diag:
        group_order *= d
    if group_order != c.det_abs:
        raise DomainError(f"Smith diagonal product {group_order} != det {c.det_abs}")

    p = QuotientPresentation(
        cone=c,
        group_order=group_order,
        orders=tuple(orders),
        characters=tuple(characters),
    )
    if not is_special_linear(p):
        logger.warning("G is not contained in SL_%d; weights %s", c.rank, p.characters)
    return p


def weight(p: QuotientPresentation, exponents: Sequence[int]) -> Tuple[int, ...]:
    """Character weight of x^exponents under each generator (residues mod d_k)."""
    if len(exponents) != p.rank:
        raise DimensionError(f"expected {p.rank} exponents, got {len(exponents)}")
    return tuple(
        sum(w * int(a) for w, a in zip(chi, exponents)) % d
        for chi, d in zip(p.characters, p.orders)
    )


def is_invariant(p: QuotientPresentation, exponents: Sequence[int]) -> bool:
    return not any(weight(p, exponents))


def is_special_linear(p: QuotientPresentation) -> bool:
    """Every generator has weight sum 0 mod its order."""
    return all(sum(chi) % d == 0 for chi, d in zip(p.characters, p.orders))


def group_elements(p: QuotientPresentation) -> List[Tuple[int, ...]]:
    """
    All elements of G as weight vectors modulo the exponent of G.

    The identity comes first; the list has group_order entries.
    """
    if not p.orders:
        return [tuple(0 for _ in range(p.rank))]
    exp = lcm(*p.orders)
    elements = []
    for powers in itertools.product(*(range(d) for d in p.orders)):
        elements.append(tuple(
            sum(c * chi[j] * (exp // d) for c, chi, d in zip(powers, p.characters, p.orders)) % exp
            for j in range(p.rank)
        ))
    return elements


def pullback_monomial(p: QuotientPresentation, m: Sequence[int]) -> InvariantMonomial:
    """
    Exponents of pi^*(chi^m) = prod_l x_l^<m, rho_l>.

    Raises:
        DimensionError: m of the wrong length
        DomainError: m outside sigma-dual (negative exponent)
    """
    if len(m) != p.rank:
        raise DimensionError(f"expected a vector of length {p.rank}, got {len(m)}")
    exponents = p.exponent(m)
    if any(a < 0 for a in exponents):
        raise DomainError(f"m = {tuple(m)} lies outside the dual cone: negative exponent in {exponents}")
    return InvariantMonomial(m=tuple(int(x) for x in m), exponents=exponents)


def invariant_generators(p: QuotientPresentation) -> List[InvariantMonomial]:
    """Pullbacks of the dual Hilbert basis; they generate k[x]^G."""
    return [InvariantMonomial(m=p.cone.from_pairings(a), exponents=a)
            for a in p.cone.hilbert_pairings]


def face_generators(p: QuotientPresentation, face: Sequence[int]) -> List[InvariantMonomial]:
    """Pullbacks of the Hilbert basis of sigma-dual cap M cap face-perp."""
    return [pullback_monomial(p, m) for m in face_semigroup(p.cone, face)]


def in_E_locus(p: QuotientPresentation, vanishing: Sequence[bool]) -> bool:
    """At most one coordinate vanishes: the image lies in the regular locus."""
    if len(vanishing) != p.rank:
        raise DimensionError(f"expected {p.rank} flags, got {len(vanishing)}")
    return sum(1 for v in vanishing if v) <= 1


def regular_vanishing(p: QuotientPresentation, zero_set: Sequence[int]) -> bool:
    """
    True iff points whose vanishing coordinates are exactly zero_set map to
    the regular locus.

    Such a point lies over the torus orbit of the face spanned by those rays,
    and the orbit is smooth iff the face is regular.
    """
    zero_set = tuple(sorted(set(zero_set)))
    if len(zero_set) <= 1:
        return True
    return is_face_regular(p.cone, zero_set)
