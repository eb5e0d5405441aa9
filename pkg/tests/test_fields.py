from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ramify.algebra.fields import (FieldTower, ModP, ReducibleError, TowerElement, embed,
                                   flatten, is_irreducible, minimal_polynomial, tower_extend,
                                   unflatten)

QQ = FieldTower.rationals()
QI = tower_extend(QQ, [1, 0, 1], "i")
QI3 = tower_extend(QI, [-3, 0, 1], "r")
SYMBOLS = {"i": sympy.I, "r": sympy.sqrt(3)}

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def elements(node):
    return st.lists(small, min_size=node.degree, max_size=node.degree).map(
        lambda v: unflatten([QQ(x) for x in v], node, QQ))


def to_sympy(e):
    if isinstance(e, TowerElement):
        g = SYMBOLS[e.tower.name]
        return sum((to_sympy(c) * g ** k for k, c in enumerate(e.coeffs)), sympy.Integer(0))
    return sympy.Rational(e.numerator, e.denominator)


@settings(max_examples=60, deadline=None)
@given(elements(QI3), elements(QI3), elements(QI3))
def test_field_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == QI3.zero
    if a != QI3.zero:
        assert a * a.inverse() == QI3.one
        assert (b / a) * a == b


@settings(max_examples=15, deadline=None)
@given(elements(QI3))
def test_minimal_polynomial_matches_sympy(a):
    mp = minimal_polynomial(a, QQ)
    x = sympy.Symbol("x")
    ours = [sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in reversed(mp)]
    ref = sympy.Poly(sympy.minimal_polynomial(to_sympy(a), x), x, domain="QQ").monic()
    assert ours == ref.all_coeffs()


@settings(max_examples=30, deadline=None)
@given(elements(QI3), elements(QI3))
def test_products_match_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=3, max_size=5).filter(lambda c: c[-1] != 0))
def test_irreducibility_over_q_matches_sympy(coeffs):
    z = sympy.Symbol("z")
    ref = sympy.Poly(list(reversed(coeffs)), z, domain="QQ").is_irreducible
    assert is_irreducible([Fraction(c) for c in coeffs], QQ) == ref


def test_irreducibility_over_extensions():
    assert not is_irreducible([QI(1), QI(0), QI(1)], QI)       # z^2 + 1 over Q(i)
    assert is_irreducible([QI(-3), QI(0), QI(1)], QI)          # z^2 - 3
    assert not is_irreducible([QI3(3), QI3(0), QI3(1)], QI3)   # -3 = (i r)^2
    assert is_irreducible([QI3(-2), QI3(0), QI3(1)], QI3)


def test_finite_field_irreducibility():
    F7 = FieldTower.prime(7)
    one = F7.one
    assert is_irreducible([one * -3, one * 0, one], F7)
    assert not is_irreducible([one * -2, one * 0, one], F7)   # 3^2 = 2 mod 7
    with pytest.raises(ValueError):
        FieldTower.prime(9)


def test_tower_extend_rejects_reducible():
    with pytest.raises(ReducibleError):
        tower_extend(QQ, [-4, 0, 1], "w")


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_modp_matches_integers(a, b):
    p = 11
    x, y = ModP(a, p), ModP(b, p)
    assert (x * y).v == (a * b) % p
    assert (x - y).v == (a - b) % p
    if b % p:
        assert (x / y) * y == x


def test_flatten_roundtrip_and_embedding():
    a = QI3.gens()["r"] + QI3.gens()["i"] * 2
    vec = flatten(a, QQ, QI3)
    assert len(vec) == 4
    assert unflatten(vec, QI3, QQ) == a
    # the identity embedding by generator names
    assert embed(a, QI3, {}) == a


def test_structural_equality_of_nodes():
    again = tower_extend(tower_extend(QQ, [1, 0, 1], "i"), [-3, 0, 1], "r")
    assert again == QI3 and hash(again) == hash(QI3)
    assert QI.is_ancestor_of(QI3) and not QI3.is_ancestor_of(QI)
    assert QI3.degree_over(QI) == 2
