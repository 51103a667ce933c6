"""Shared cones, presentations and curves."""

import itertools
from functools import reduce
from math import gcd

import numpy as np
import pytest
from sympy import Matrix

from cone import build_cone
from curveops import LiftedCurve
from quotient import build_presentation
from straighten import StraighteningTarget, straighten_curve

ORTHANT4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
ORDER5 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [-1, -1, -2, 5]]
PLANE2 = [[1, 0], [1, 2]]
IRREGULAR4 = [[1, 0, 0, 0], [1, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]

# (t, t^2 + t, t^3, t + 2)
A4_CURVE = [[0, 1], [0, 1, 1], [0, 0, 0, 1], [2, 1]]
# (t, t + 1, 1, t + 2)
ORDER5_CURVE = [[0, 1], [1, 1], [1], [2, 1]]


def minor_gcd(vectors):
    """gcd of the maximal minors: 1 iff the vectors extend to a lattice basis."""
    k, n = len(vectors), len(vectors[0])
    m = Matrix(vectors)
    return reduce(gcd, (abs(int(m[:, list(cols)].det())) for cols in itertools.combinations(range(n), k)), 0)


def random_unimodular(rng: np.random.Generator, n: int, steps: int = 8):
    """Product of elementary integer row operations, so the determinant is +-1."""
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
        k = int(rng.integers(-2, 3))
        u[i] = [a + k * b for a, b in zip(u[i], u[j])]
    if rng.integers(2):
        u[0] = [-a for a in u[0]]
    return u


@pytest.fixture(scope="session")
def orthant():
    return build_cone(ORTHANT4)


@pytest.fixture(scope="session")
def order5():
    return build_cone(ORDER5)


@pytest.fixture(scope="session")
def plane2():
    return build_cone(PLANE2)


@pytest.fixture(scope="session")
def irregular4():
    return build_cone(IRREGULAR4)


@pytest.fixture(scope="session")
def orthant_p(orthant):
    return build_presentation(orthant)


@pytest.fixture(scope="session")
def order5_p(order5):
    return build_presentation(order5)


@pytest.fixture(scope="session")
def a4_curve(orthant_p):
    return LiftedCurve.from_coefficients(orthant_p, A4_CURVE)


@pytest.fixture(scope="session")
def order5_curve(order5_p):
    return LiftedCurve.from_coefficients(order5_p, ORDER5_CURVE)


@pytest.fixture(scope="session")
def a4_straightened(orthant_p, a4_curve):
    target = StraighteningTarget.sample(4, seed=42)
    return straighten_curve(orthant_p, a4_curve, target, root_bound=2, ext_bound=16)


@pytest.fixture(scope="session")
def order5_straightened(order5_p, order5_curve):
    target = StraighteningTarget.sample(4, seed=42)
    return straighten_curve(order5_p, order5_curve, target, root_bound=2, ext_bound=4)
