import itertools

import pytest
from sympy import Poly, Rational
from sympy.polys.domains import QQ

from errors import DimensionError, DomainError
from lnd import (
    AutomorphismWord,
    DemazureRoot,
    FlowStep,
    LiftedField,
    apply_derivation,
    apply_field,
    composed_images,
    enumerate_roots,
    flow_on_polynomial,
    is_pi_related,
    lift_field,
    nilpotency_index,
    step_is_unimodular,
    verify_descends,
    word_apply,
    word_apply_curve,
    word_inverse,
    word_jacobian,
)
from symalg import T, coordinate, evaluate_on_curve, jacobian_determinant, monomial


def _step(p, i, e, coeff=None, time=1):
    root = DemazureRoot.from_vector(p.cone, i, e)
    return FlowStep(field=lift_field(p, root, coeff), time=Rational(time))


@pytest.fixture
def orthant_word(orthant_p):
    return AutomorphismWord(rank=4, steps=(
        _step(orthant_p, 0, (-1, 1, 0, 0)),
        _step(orthant_p, 3, (1, 0, 0, -1), time=2),
        _step(orthant_p, 1, (0, -1, 0, 0), time=-1),
    ))


class TestEnumerateRoots:
    def test_orthant(self, orthant):
        roots = enumerate_roots(orthant, 0, 1)
        assert len(roots) == 8
        assert roots[0].e == (-1, 0, 0, 0)
        assert roots[0].lifted_exponent == (0, 0, 0, 0)

    def test_order5_ray0(self, order5):
        exps = {r.lifted_exponent for r in enumerate_roots(order5, 0, 2)}
        assert exps == {(0, 0, 0, 1), (0, 1, 0, 0), (0, 0, 2, 2), (0, 1, 2, 1), (0, 2, 1, 2), (0, 2, 2, 0)}

    def test_matches_box_scan(self, order5):
        i = 3
        expected = set()
        for m in itertools.product(range(-3, 4), repeat=4):
            a = order5.pairings(m)
            if a[i] == -1 and all(0 <= a[j] <= 2 for j in range(4) if j != i):
                expected.add(m)
        found = {r.e for r in enumerate_roots(order5, i, 2)}
        assert found == expected
        assert found

    def test_sorted_by_height(self, order5):
        heights = [sum(r.lifted_exponent) for r in enumerate_roots(order5, 2, 2)]
        assert heights == sorted(heights)

    def test_invalid_arguments(self, order5):
        with pytest.raises(DomainError):
            enumerate_roots(order5, 4, 2)
        with pytest.raises(DomainError):
            enumerate_roots(order5, 0, 0)


def test_root_validation(order5):
    with pytest.raises(DomainError):
        DemazureRoot.from_vector(order5, 0, (1, 0, 0, 0))
    with pytest.raises(DomainError):
        DemazureRoot.from_vector(order5, 0, (-1, -1, 0, 0))
    with pytest.raises(DomainError):
        DemazureRoot.from_vector(order5, 5, (-1, 0, 0, 0))


def test_apply_derivation(orthant):
    root = DemazureRoot.from_vector(orthant, 0, (-1, 0, 0, 0))
    assert apply_derivation(root, (1, 0, 0, 0)) == (1, (0, 0, 0, 0))
    assert apply_derivation(root, (0, 2, 0, 0))[0] == 0
    with pytest.raises(DimensionError):
        apply_derivation(root, (1, 0))


def test_single_root(orthant_p):
    root = DemazureRoot.from_vector(orthant_p.cone, 0, (-1, 1, 0, 0))
    assert is_pi_related(orthant_p, root)
    assert nilpotency_index(lift_field(orthant_p, root), monomial((3, 0, 0, 0))) == 4


def test_corrupted_field_does_not_descend(order5_p, order5):
    root = DemazureRoot.from_vector(order5, 0, order5.from_pairings((-1, 0, 0, 1)))
    assert verify_descends(order5_p, lift_field(order5_p, root))
    broken = DemazureRoot(ray_index=0, ray=root.ray, e=root.e, lifted_exponent=(0, 0, 0, 2))
    assert not verify_descends(order5_p, LiftedField(root=broken, kernel_coefficient=monomial((0, 0, 0, 0))))


class TestLiftField:
    def test_coefficient_must_avoid_x_i(self, orthant_p):
        root = DemazureRoot.from_vector(orthant_p.cone, 0, (-1, 0, 0, 0))
        with pytest.raises(DomainError):
            lift_field(orthant_p, root, monomial((1, 0, 0, 0)))

    def test_coefficient_must_be_invariant(self, order5_p, order5):
        root = DemazureRoot.from_vector(order5, 0, order5.from_pairings((-1, 0, 0, 1)))
        with pytest.raises(DomainError):
            lift_field(order5_p, root, monomial((0, 1, 0, 0)))
        f = lift_field(order5_p, root, monomial((0, 1, 2, 0), 3))
        assert f.multiplier == monomial((0, 1, 2, 1), 3)

    def test_apply_field(self, orthant_p):
        root = DemazureRoot.from_vector(orthant_p.cone, 0, (-1, 1, 0, 0))
        f = lift_field(orthant_p, root)
        assert apply_field(f, monomial((2, 0, 0, 0))) == monomial((1, 1, 0, 0), 2)


class TestFlows:
    def test_flow_moves_only_x_i(self, orthant_p):
        step = _step(orthant_p, 0, (-1, 0, 1, 0), time=3)
        assert flow_on_polynomial(step, coordinate(0, 4)) == coordinate(0, 4) + monomial((0, 0, 1, 0), 3)
        assert flow_on_polynomial(step, coordinate(2, 4)) == coordinate(2, 4)

    def test_group_law(self, orthant_p):
        p = monomial((2, 1, 0, 0))
        s1 = _step(orthant_p, 0, (-1, 0, 1, 0), time=2)
        s2 = FlowStep(field=s1.field, time=Rational(5))
        s3 = FlowStep(field=s1.field, time=Rational(7))
        assert word_apply(AutomorphismWord(rank=4, steps=(s1, s2)), p) == flow_on_polynomial(s3, p)

    def test_inverse_restores(self, orthant_word):
        back = orthant_word.then(word_inverse(orthant_word))
        for j in range(4):
            assert word_apply(back, coordinate(j, 4)) == coordinate(j, 4)
        assert len(word_inverse(orthant_word)) == 3

    def test_empty_word_is_identity(self):
        p = monomial((1, 2, 3, 0))
        assert word_apply(AutomorphismWord(rank=4), p) == p

    def test_hand_built_word_on_curve(self, orthant_word):
        curve = [Poly(e, T, domain=QQ) for e in (T, T**2, T**3, T + 1)]
        image = word_apply_curve(orthant_word, curve)
        expected = [T + T**2, T**2 - 1, T**3, 2 * T**2 + 3 * T + 1]
        assert image == [Poly(e, T, domain=QQ) for e in expected]

    def test_pullback_agrees_with_pushforward(self, orthant_word):
        curve = [Poly(e, T, domain=QQ) for e in (T, T**2, T**3, T + 1)]
        pushed = word_apply_curve(orthant_word, curve)
        for exps in [(1, 0, 0, 0), (0, 1, 0, 1), (2, 0, 1, 1)]:
            m = monomial(exps)
            assert evaluate_on_curve(word_apply(orthant_word, m), curve) == evaluate_on_curve(m, pushed)

    def test_word_rank_mismatch(self, orthant_word):
        with pytest.raises(DimensionError):
            orthant_word.then(AutomorphismWord(rank=3))
        with pytest.raises(DimensionError):
            word_apply_curve(orthant_word, [Poly(T, T, domain=QQ)])


class TestJacobian:
    def test_steps_are_unimodular(self, orthant_word):
        assert all(step_is_unimodular(s) for s in orthant_word.steps)

    def test_word_jacobian_is_one(self, orthant_word):
        one = monomial((0, 0, 0, 0))
        assert word_jacobian(orthant_word) == one
        assert jacobian_determinant(composed_images(orthant_word)) == one

    def test_order5_replica(self, order5_p, order5):
        root = DemazureRoot.from_vector(order5, 2, order5.from_pairings((1, 1, -1, 0)))
        step = FlowStep(field=lift_field(order5_p, root, monomial((0, 0, 0, 5), 2)), time=Rational(-3))
        word = AutomorphismWord(rank=4, steps=(step, step.inverse(), step))
        assert step_is_unimodular(step)
        assert word_jacobian(word) == monomial((0, 0, 0, 0))
