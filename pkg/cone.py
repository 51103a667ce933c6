"""
Simplicial cones, their faces, dual cones and affine semigroups.

A full-dimensional simplicial cone sigma in N_R is stored through its
primitive ray generators. Semigroup computations happen in pairing
coordinates a = (<m, rho_1>, ..., <m, rho_n>): there sigma-dual becomes the
nonnegative orthant and M becomes a sublattice of index det_abs.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Sequence, Tuple

from errors import DimensionError, DomainError, NotSimplicialError
from lattice import (
    IntMatrix,
    LatticeVector,
    adjugate,
    content,
    determinant,
    extends_to_basis,
    pair,
    primitive,
    vector,
)

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]


@dataclass(frozen=True)
class DualConeData:
    """Generators of sigma-dual and the Hilbert basis of sigma-dual cap M."""
    dual_rays: Tuple[LatticeVector, ...]
    hilbert_basis: Tuple[LatticeVector, ...]


@dataclass(frozen=True)
class FacetSemigroup:
    """Hilbert basis of tau_i = rho_i-perp cap sigma-dual cap M."""
    ray_index: int
    hilbert_basis: Tuple[LatticeVector, ...]


@dataclass(frozen=True)
class SimplicialCone:
    """
    Full-dimensional simplicial cone given by n primitive rays in Z^n.

    Build through build_cone(); direct construction skips validation.
    """
    rank: int
    rays: Tuple[LatticeVector, ...]
    det_abs: int

    @cached_property
    def _adjugate(self) -> IntMatrix:
        return adjugate(self.rays)

    @cached_property
    def _det(self) -> int:
        return determinant(self.rays)

    def pairings(self, m: Sequence[int]) -> LatticeVector:
        """(<m, rho_1>, ..., <m, rho_n>)"""
        return tuple(pair(m, rho) for rho in self.rays)

    def in_lattice(self, a: Sequence[int]) -> bool:
        """True iff a = pairings(m) for some m in M."""
        det = self._det
        return all(sum(row[j] * a[j] for j in range(self.rank)) % det == 0
                   for row in self._adjugate)

    def from_pairings(self, a: Sequence[int]) -> LatticeVector:
        """The unique m in M with pairings(m) == a."""
        if len(a) != self.rank:
            raise DimensionError(f"expected {self.rank} pairings, got {len(a)}")
        det = self._det
        m = []
        for row in self._adjugate:
            num = sum(row[j] * int(a[j]) for j in range(self.rank))
            if num % det != 0:
                raise DomainError(f"pairing vector {tuple(a)} is not attained by any m in M")
            m.append(num // det)
        return tuple(m)

    @cached_property
    def dual_scales(self) -> Tuple[int, ...]:
        """s_j = <u_j, rho_j> for the primitive dual rays u_j."""
        return tuple(pair(u, rho) for u, rho in zip(self.dual_rays, self.rays))

    @cached_property
    def dual_rays(self) -> Tuple[LatticeVector, ...]:
        # column j of adj(R) pairs to zero with every ray except rho_j
        sign = 1 if self._det > 0 else -1
        cols = [[sign * self._adjugate[i][j] for i in range(self.rank)]
                for j in range(self.rank)]
        return tuple(primitive(col) for col in cols)

    @cached_property
    def hilbert_pairings(self) -> Tuple[LatticeVector, ...]:
        """Hilbert basis of sigma-dual cap M in pairing coordinates, sorted by (height, a)."""
        return _hilbert_basis_in_pairings(self)

    @cached_property
    def hilbert_height(self) -> int:
        return max(sum(a) for a in self.hilbert_pairings)


def build_cone(rays: Sequence[Sequence[int]]) -> SimplicialCone:
    """
    Validate ray generators and normalize them to primitive vectors.

    Raises:
        DimensionError: not n vectors of length n
        DomainError: a zero ray
        NotSimplicialError: linearly dependent rays
    """
    if len(rays) == 0:
        raise DimensionError("a cone needs at least one ray")
    n = len(rays)
    if any(len(r) != n for r in rays):
        raise DimensionError(f"expected {n} rays of length {n}")
    normalized = []
    for idx, r in enumerate(rays):
        if content(r) == 0:
            raise DomainError(f"ray {idx} is the zero vector")
        normalized.append(primitive(vector(r)))
    det = determinant(normalized)
    if det == 0:
        raise NotSimplicialError("rays dependent")
    return SimplicialCone(rank=n, rays=tuple(normalized), det_abs=abs(det))


def faces(c: SimplicialCone, k: int) -> List[Face]:
    """All k-dimensional faces, as sorted tuples of ray indices."""
    if not 0 <= k <= c.rank:
        raise DomainError(f"face dimension {k} outside [0, {c.rank}]")
    return list(itertools.combinations(range(c.rank), k))


def is_face_regular(c: SimplicialCone, face: Sequence[int]) -> bool:
    face = tuple(sorted(face))
    if any(not 0 <= i < c.rank for i in face) or len(set(face)) != len(face):
        raise DomainError(f"invalid face {face}")
    return extends_to_basis([c.rays[i] for i in face], rank=c.rank)


def smooth_in_codim(c: SimplicialCone) -> int:
    """
    Largest k such that every face of dimension <= k is regular.

    Returns n for a smooth cone; the variety is smooth in codimension 2
    iff the result is at least 2.
    """
    for k in range(1, c.rank + 1):
        if not all(is_face_regular(c, f) for f in faces(c, k)):
            return k - 1
    return c.rank


def dual_cone(c: SimplicialCone) -> DualConeData:
    return DualConeData(
        dual_rays=c.dual_rays,
        hilbert_basis=tuple(c.from_pairings(a) for a in c.hilbert_pairings),
    )


def face_semigroup(c: SimplicialCone, face: Sequence[int]) -> Tuple[LatticeVector, ...]:
    """
    Hilbert basis of sigma-dual cap M cap (rho_j-perp for j in face).

    A face of a pointed semigroup inherits its Hilbert basis, so this is a
    filter of the full basis.
    """
    face = tuple(face)
    return tuple(c.from_pairings(a) for a in c.hilbert_pairings
                 if all(a[j] == 0 for j in face))


def facet_semigroup(c: SimplicialCone, i: int) -> FacetSemigroup:
    if not 0 <= i < c.rank:
        raise DomainError(f"ray index {i} outside [0, {c.rank})")
    return FacetSemigroup(ray_index=i, hilbert_basis=face_semigroup(c, (i,)))


def _hilbert_basis_in_pairings(c: SimplicialCone) -> Tuple[LatticeVector, ...]:
    # Parallelepiped of the dual rays is the box 0 <= a_j < s_j in pairing coordinates.
    scales = c.dual_scales
    candidates = set()
    for a in itertools.product(*(range(s) for s in scales)):
        if any(a) and c.in_lattice(a):
            candidates.add(tuple(a))
    for j, s in enumerate(scales):
        candidates.add(tuple(s if k == j else 0 for k in range(c.rank)))

    ordered = sorted(candidates, key=lambda a: (sum(a), a))
    basis = []
    for a in ordered:
        # reducible iff some other candidate fits under it
        reducible = any(
            b != a and all(bj <= aj for bj, aj in zip(b, a))
            for b in ordered if sum(b) < sum(a)
        )
        if not reducible:
            basis.append(a)
    logger.debug("Hilbert basis of cone with det %d: %d elements from %d candidates",
                  c.det_abs, len(basis), len(candidates))
    return tuple(basis)


def decomposes(c: SimplicialCone, a: Sequence[int]) -> bool:
    """
    True iff the pairing vector a is an N-combination of the Hilbert basis.

    Memoised search; the height strictly drops with each subtracted element.
    """
    basis = c.hilbert_pairings

    @lru_cache(maxsize=None)
    def _search(point: Tuple[int, ...]) -> bool:
        if not any(point):
            return True
        for b in basis:
            if all(bj <= pj for bj, pj in zip(b, point)):
                rest = tuple(pj - bj for bj, pj in zip(b, point))
                if _search(rest):
                    return True
        return False

    return _search(tuple(int(x) for x in a))


def semigroup_points(c: SimplicialCone, max_height: int) -> List[LatticeVector]:
    """All pairing vectors of sigma-dual cap M with height <= max_height."""
    points = []
    for total in range(max_height + 1):
        for combo in itertools.combinations_with_replacement(range(c.rank), total):
            a = [0] * c.rank
            for j in combo:
                a[j] += 1
            if c.in_lattice(a):
                points.append(tuple(a))
    return points


def describe(c: SimplicialCone) -> Dict:
    """Summary record used by reports."""
    return {
        "rank": c.rank,
        "rays": [list(r) for r in c.rays],
        "det_abs": c.det_abs,
        "smooth_in_codim": smooth_in_codim(c),
    }
