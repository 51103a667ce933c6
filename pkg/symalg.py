"""
Exact polynomial arithmetic over QQ.

MultiPoly is a sympy Poly in x1..xn, UniPoly a sympy Poly in the curve
parameter t, both over QQ. Besides constructors and substitution this
module holds the two solvers used by the straightening loop:

- bezout_combination: sum a_j f_j = target in QQ[t] via extended gcd
- extend_from_curve: write a univariate polynomial as a rational
  combination of products ("words") of given curve values
"""

import itertools
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, Poly, Rational, Symbol, expand, symbols
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from errors import BezoutError, DimensionError, DomainError, ExtensionError

logger = logging.getLogger(__name__)

MultiPoly = Poly
UniPoly = Poly
RationalLike = Union[int, str, Rational]

T = Symbol("t")

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


@lru_cache(maxsize=None)
def coordinate_symbols(n: int) -> Tuple[Symbol, ...]:
    if n < 1:
        raise DimensionError("need at least one coordinate")
    return tuple(symbols(f"x1:{n + 1}"))


def to_rational(value: RationalLike) -> Rational:
    """Exact rational from an int, a Rational or a "p/q" string."""
    if isinstance(value, float):
        raise DomainError(f"floating point value {value!r} is not exact")
    if isinstance(value, str) and not _RATIONAL_RE.match(value.strip()):
        raise DomainError(f"{value!r} is not of the form p or p/q")
    result = Rational(value)
    if not result.is_Rational:
        raise DomainError(f"{value!r} is not a finite rational")
    return result


def uni_poly(coeffs: Sequence[RationalLike]) -> UniPoly:
    """Polynomial in t from ascending coefficients."""
    values = [to_rational(c) for c in coeffs]
    if not values:
        return Poly(0, T, domain=QQ)
    return Poly(list(reversed(values)), T, domain=QQ)


def uni_constant(value: RationalLike) -> UniPoly:
    return Poly(to_rational(value), T, domain=QQ)


def uni_coefficients(p: UniPoly) -> List[Rational]:
    """Ascending coefficients without trailing zeros (empty for 0)."""
    if p.is_zero:
        return []
    return list(reversed(p.all_coeffs()))


def multi_zero(n: int) -> MultiPoly:
    return Poly(0, *coordinate_symbols(n), domain=QQ)


def monomial(exponents: Sequence[int], coeff: RationalLike = 1) -> MultiPoly:
    exps = tuple(int(e) for e in exponents)
    if any(e < 0 for e in exps):
        raise DomainError(f"negative exponent in {exps}")
    gens = coordinate_symbols(len(exps))
    coeff = to_rational(coeff)
    if coeff == 0:
        return Poly(0, *gens, domain=QQ)
    return Poly.from_dict({exps: coeff}, *gens, domain=QQ)


def coordinate(i: int, n: int) -> MultiPoly:
    """The coordinate function x_i (0-based)."""
    if not 0 <= i < n:
        raise DomainError(f"coordinate index {i} outside [0, {n})")
    return monomial(tuple(1 if k == i else 0 for k in range(n)))


def degree(p: Poly) -> int:
    """Total degree, -1 for the zero polynomial."""
    return -1 if p.is_zero else p.total_degree()


def multi_terms(p: MultiPoly) -> List[Tuple[Tuple[int, ...], Rational]]:
    """Nonzero terms sorted by exponent tuple."""
    if p.is_zero:
        return []
    return sorted(p.terms(), key=lambda term: term[0])


def evaluate_on_curve(p: MultiPoly, curve: Sequence[UniPoly]) -> UniPoly:
    """Substitute x_j -> curve[j] and expand."""
    if len(curve) != len(p.gens):
        raise DimensionError(f"polynomial in {len(p.gens)} variables, curve of length {len(curve)}")
    result = Poly(0, T, domain=QQ)
    powers: Dict[Tuple[int, int], UniPoly] = {}
    for monom, coeff in multi_terms(p):
        term = Poly(coeff, T, domain=QQ)
        for j, e in enumerate(monom):
            if e:
                if (j, e) not in powers:
                    powers[(j, e)] = curve[j] ** e
                term = term * powers[(j, e)]
        result = result + term
    return result


def substitute_coordinate(p: MultiPoly, i: int, replacement: MultiPoly) -> MultiPoly:
    """p with x_i replaced by replacement, expanded."""
    n = len(p.gens)
    if not 0 <= i < n:
        raise DomainError(f"coordinate index {i} outside [0, {n})")
    result = multi_zero(n)
    powers: Dict[int, MultiPoly] = {}
    for monom, coeff in multi_terms(p):
        rest = list(monom)
        e = rest[i]
        rest[i] = 0
        term = monomial(rest, coeff)
        if e:
            if e not in powers:
                powers[e] = replacement ** e
            term = term * powers[e]
        result = result + term
    return result


def jacobian_determinant(images: Sequence[MultiPoly]) -> MultiPoly:
    """det(d images_j / d x_k), computed division free."""
    if not images:
        raise DimensionError("empty map")
    gens = images[0].gens
    if len(images) != len(gens):
        raise DimensionError(f"{len(images)} images for {len(gens)} variables")
    jac = Matrix([[img.diff(g).as_expr() for g in gens] for img in images])
    det = jac.det(method="berkowitz")
    return Poly(expand(det), *gens, domain=QQ)


# --- Bezout ---

def bezout_combination(fs: Sequence[UniPoly], target: UniPoly) -> List[UniPoly]:
    """
    Coefficients a_j with sum a_j * fs[j] == target.

    Iterated extended gcd gives one solution; each non-pivot coefficient is
    then reduced modulo pivot/gcd, where the pivot is the first nonzero f of
    minimal degree, and the quotient is moved onto the pivot.

    Raises:
        DomainError: fs empty or all zero
        BezoutError: gcd(fs) does not divide target
    """
    nonzero = [j for j, f in enumerate(fs) if not f.is_zero]
    if not nonzero:
        raise DomainError("bezout_combination needs at least one nonzero polynomial")

    zero = Poly(0, T, domain=QQ)
    coeffs = [zero for _ in fs]
    first = nonzero[0]
    g = fs[first].monic()
    coeffs[first] = Poly(1 / fs[first].LC(), T, domain=QQ)
    for j in nonzero[1:]:
        s, u, h = g.gcdex(fs[j])
        coeffs = [s * a for a in coeffs]
        coeffs[j] = u
        g = h

    q, r = target.div(g)
    if not r.is_zero:
        raise BezoutError(g, {"target": str(target.as_expr())})
    coeffs = [q * a for a in coeffs]

    pivot = min(nonzero, key=lambda j: (fs[j].degree(), j))
    modulus = fs[pivot].exquo(g)
    if modulus.degree() > 0:
        for j in nonzero:
            if j == pivot:
                continue
            quo, rem = coeffs[j].div(modulus)
            coeffs[j] = rem
            coeffs[pivot] = coeffs[pivot] + quo * fs[j].exquo(g)
    return coeffs


# --- curve-to-divisor extension ---

@dataclass(frozen=True)
class ExtensionSolution:
    """
    target == sum_k coefficients[k] * prod_j values[j] ** words[k][j]

    Only words with nonzero coefficient are kept.
    """
    bound: int
    words: Tuple[Tuple[int, ...], ...]
    coefficients: Tuple[Rational, ...]

    def as_polynomial(self, generators: Sequence[MultiPoly], n: int) -> MultiPoly:
        """The same combination taken over generator polynomials in x1..xn."""
        result = multi_zero(n)
        for word, coeff in zip(self.words, self.coefficients):
            term = monomial((0,) * n, coeff)
            for j, e in enumerate(word):
                if e:
                    term = term * generators[j] ** e
            result = result + term
        return result

    def evaluate(self, values: Sequence[UniPoly]) -> UniPoly:
        table = WordValues(values)
        result = Poly(0, T, domain=QQ)
        for word, coeff in zip(self.words, self.coefficients):
            result = result + table(word) * Poly(coeff, T, domain=QQ)
        return result


class WordValues:
    """Cached products of curve values indexed by exponent vectors."""

    def __init__(self, values: Sequence[UniPoly]):
        self.values = list(values)
        self._cache: Dict[Tuple[int, ...], UniPoly] = {
            tuple(0 for _ in self.values): Poly(1, T, domain=QQ)
        }

    def __call__(self, word: Tuple[int, ...]) -> UniPoly:
        if word in self._cache:
            return self._cache[word]
        j = max(k for k, e in enumerate(word) if e)
        prev = tuple(e - 1 if k == j else e for k, e in enumerate(word))
        value = self(prev) * self.values[j]
        self._cache[word] = value
        return value


def word_exponents(k: int, bound: int) -> List[Tuple[int, ...]]:
    """All exponent vectors of length k and total <= bound, graded then lexicographic."""
    words = []
    for total in range(bound + 1):
        for combo in itertools.combinations_with_replacement(range(k), total):
            alpha = [0] * k
            for j in combo:
                alpha[j] += 1
            words.append(tuple(alpha))
    return words


def solve_linear_combination(columns: Sequence[UniPoly], target: UniPoly) -> Optional[List[Rational]]:
    """
    Rational x with sum x_j columns[j] == target, or None.

    Coefficient comparison gives a dense system over QQ; free variables are 0.
    """
    if not columns:
        return [] if target.is_zero else None
    width = len(columns)
    rows = max([degree(col) for col in columns] + [degree(target), 0]) + 1
    dense = [[QQ.zero] * (width + 1) for _ in range(rows)]
    for j, col in enumerate(columns):
        for (k,), coeff in col.terms():
            dense[k][j] = QQ.convert(coeff)
    for (k,), coeff in target.terms():
        dense[k][width] = QQ.convert(coeff)

    reduced, pivots = DomainMatrix(dense, (rows, width + 1), QQ).rref()
    if width in pivots:
        return None
    reduced = reduced.to_Matrix()
    solution = [Rational(0)] * width
    for row, col in enumerate(pivots):
        solution[col] = Rational(reduced[row, width])
    return solution


def extend_from_curve(
    values: Sequence[UniPoly],
    target: UniPoly,
    degree_bound: int,
    table: Optional[WordValues] = None,
) -> Optional[ExtensionSolution]:
    """
    Express target through words of word length <= degree_bound in values.

    Args:
        values: curve values of the semigroup generators
        target: polynomial to reach
        degree_bound: maximal word length (>= 1)
        table: shared product cache, reused across bounds

    Returns:
        ExtensionSolution, or None when the system has no solution at this bound
    """
    if degree_bound < 1:
        raise DomainError(f"degree bound must be >= 1, got {degree_bound}")
    table = table or WordValues(values)
    words = word_exponents(len(values), degree_bound)
    solution = solve_linear_combination([table(w) for w in words], target)
    if solution is None:
        return None
    kept = [(w, c) for w, c in zip(words, solution) if c != 0]
    return ExtensionSolution(
        bound=degree_bound,
        words=tuple(w for w, _ in kept),
        coefficients=tuple(c for _, c in kept),
    )


def retry_bounds(max_bound: int) -> List[int]:
    """1, 2, 4, ... capped at max_bound, max_bound always included."""
    if max_bound < 1:
        raise DomainError(f"bound must be >= 1, got {max_bound}")
    bounds = []
    b = 1
    while b < max_bound:
        bounds.append(b)
        b *= 2
    bounds.append(max_bound)
    return bounds


def extend_with_retry(values: Sequence[UniPoly], target: UniPoly, max_bound: int) -> ExtensionSolution:
    """
    extend_from_curve at bounds 1, 2, 4, ..., max_bound.

    Raises:
        ExtensionError: unsolvable at every bound
    """
    table = WordValues(values)
    for bound in retry_bounds(max_bound):
        solution = extend_from_curve(values, target, bound, table)
        if solution is not None:
            logger.debug("extension of degree-%d target found at bound %d", degree(target), bound)
            return solution
    raise ExtensionError(max_bound, {"target": str(target.as_expr()), "generators": len(values)})
