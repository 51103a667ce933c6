"""
Integer lattice utilities for N = Z^n and its dual M.

Pairings, Smith normal form with transformation tracking, primitivity and
basis-extension tests. Matrices are numpy object arrays of Python ints, so
no entry ever overflows.
"""

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Sequence, Tuple

import numpy as np
from sympy import Matrix

from errors import DimensionError, DomainError

LatticeVector = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class SmithDecomposition:
    """
    left . original . right == diag(diag), padded with zeros to the original shape.

    left and right are unimodular; each diag entry divides the next.
    """
    left: IntMatrix
    diag: Tuple[int, ...]
    right: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)


def vector(coords: Sequence[int]) -> LatticeVector:
    """Normalize any integer sequence to an immutable lattice vector."""
    return tuple(int(c) for c in coords)


def pair(m: Sequence[int], u: Sequence[int]) -> int:
    """Pairing <m, u> of m in M with u in N."""
    if len(m) != len(u):
        raise DimensionError(f"cannot pair vectors of lengths {len(m)} and {len(u)}")
    return sum(int(a) * int(b) for a, b in zip(m, u))


def content(u: Sequence[int]) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    return reduce(gcd, (abs(int(c)) for c in u), 0)


def is_primitive(u: Sequence[int]) -> bool:
    g = content(u)
    if g == 0:
        raise DomainError("the zero vector has no primitive representative")
    return g == 1


def primitive(u: Sequence[int]) -> LatticeVector:
    """Primitive lattice vector on the ray through u."""
    g = content(u)
    if g == 0:
        raise DomainError("the zero vector has no primitive representative")
    return tuple(int(c) // g for c in u)


def _as_object_array(rows: Sequence[Sequence[int]]) -> np.ndarray:
    if len(rows) == 0 or len(rows[0]) == 0:
        raise DimensionError("matrix must be nonempty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionError("ragged matrix")
    out = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = int(v)
    return out


def _freeze(a: np.ndarray) -> IntMatrix:
    return tuple(tuple(int(v) for v in row) for row in a)


def _identity(size: int) -> np.ndarray:
    out = np.zeros((size, size), dtype=object)
    for i in range(size):
        out[i, i] = 1
    return out


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithDecomposition:
    """
    Smith normal form with explicit unimodular transforms.

    Each stage pivots on a nonzero entry of minimal absolute value in the
    remaining block, clears its row and column by integer division, and
    folds a non-divisible row back into the pivot row until the pivot
    divides the whole block.

    Args:
        matrix: nonempty integer matrix (any shape)

    Returns:
        SmithDecomposition with left . matrix . right == diag
    """
    a = _as_object_array(matrix)
    rows, cols = a.shape
    left = _identity(rows)
    right = _identity(cols)
    size = min(rows, cols)

    for k in range(size):
        while True:
            block = [(abs(a[r, c]), r, c)
                     for r in range(k, rows) for c in range(k, cols) if a[r, c] != 0]
            if not block:
                break
            _, r, c = min(block)
            if r != k:
                a[[k, r]] = a[[r, k]]
                left[[k, r]] = left[[r, k]]
            if c != k:
                a[:, [k, c]] = a[:, [c, k]]
                right[:, [k, c]] = right[:, [c, k]]

            pivot = a[k, k]
            clean = True
            for r in range(k + 1, rows):
                q = a[r, k] // pivot
                if q:
                    a[r] -= q * a[k]
                    left[r] -= q * left[k]
                if a[r, k] != 0:
                    clean = False
            for c in range(k + 1, cols):
                q = a[k, c] // pivot
                if q:
                    a[:, c] -= q * a[:, k]
                    right[:, c] -= q * right[:, k]
                if a[k, c] != 0:
                    clean = False
            if not clean:
                continue

            offender = next(
                (r for r in range(k + 1, rows)
                 for c in range(k + 1, cols) if a[r, c] % pivot != 0),
                None,
            )
            if offender is None:
                break
            a[k] += a[offender]
            left[k] += left[offender]

        if a[k, k] < 0:
            a[k] = -a[k]
            left[k] = -left[k]

    diag = tuple(int(a[k, k]) for k in range(size))
    return SmithDecomposition(left=_freeze(left), diag=diag, right=_freeze(right))


def matmul(x: Sequence[Sequence[int]], y: Sequence[Sequence[int]]) -> IntMatrix:
    """Exact integer matrix product."""
    return _freeze(np.dot(_as_object_array(x), _as_object_array(y)))


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    a = Matrix(matrix)
    if a.rows != a.cols:
        raise DimensionError("determinant of a non-square matrix")
    return int(a.det())


def adjugate(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    a = Matrix(matrix)
    if a.rows != a.cols:
        raise DimensionError("adjugate of a non-square matrix")
    adj = a.adjugate()
    return tuple(tuple(int(adj[i, j]) for j in range(adj.cols)) for i in range(adj.rows))


def extends_to_basis(vs: Sequence[Sequence[int]], rank: int = None) -> bool:
    """
    True iff the vectors can be completed to a basis of N.

    Equivalent to the Smith diagonal of the k x n matrix being all ones.
    An empty family always extends.
    """
    if len(vs) == 0:
        return True
    n = rank if rank is not None else len(vs[0])
    if any(len(v) != n for v in vs):
        raise DimensionError("vectors of mixed length")
    if len(vs) > n:
        raise DomainError(f"{len(vs)} vectors cannot extend to a basis of Z^{n}")
    snf = smith_normal_form(vs)
    return all(d == 1 for d in snf.diag)
