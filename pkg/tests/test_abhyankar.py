from collections import Counter
from fractions import Fraction as F
from itertools import product

import pytest
import sympy
from conftest import spec
from hypothesis import given, settings
from hypothesis import strategies as st

from ramify.abhyankar import (MonomialExtension, MonomialValuation, integer_independent,
                              leading_monomial, monomial_nu, verify_prop1)
from ramify.algebra.fields import FieldTower
from ramify.algebra.poly import Poly, parse_poly
from ramify.algebra.values import LexOrder, QuadraticWeightOrder, Value

QQ = FieldTower.rationals()
MONO_SPECS = ["prop1_identity", "prop1_lex_21", "prop1_lex_diag", "prop1_quad_diag",
              "prop1_quad_mixed", "prop1_lex3"]


def test_valuation_examples():
    V = MonomialValuation.quadratic(2)
    f = parse_poly("x1^3 + x1*x2^2", V.names, QQ)
    assert monomial_nu(V, f) == Value((3, 0), V.order)
    W = MonomialValuation.lex(2)
    g = parse_poly("x2^5 + x1", W.names, QQ)
    assert monomial_nu(W, g) == Value((0, 5), W.order)
    assert leading_monomial(W, g)[0] == (0, 5)
    with pytest.raises(ValueError, match="valuation of 0"):
        monomial_nu(W, Poly.zero(QQ, W.names))


def test_dependent_values_are_rejected():
    lex = LexOrder(2)
    with pytest.raises(ValueError, match="not Z-linearly independent"):
        MonomialValuation((Value((1, 0), lex), Value((2, 0), lex)), ("x1", "x2"))
    q = QuadraticWeightOrder(2)
    assert integer_independent([Value((1, 0), q), Value((0, 1), q)])
    assert not integer_independent([Value((1, 1), q), Value((2, 2), q)])
    with pytest.raises(ValueError, match="positive"):
        MonomialValuation((Value((1, 0), q), Value((-2, 1), q)), ("x1", "x2"))


def test_matrix_checks():
    W = MonomialValuation.lex(2, ("y1", "y2"))
    with pytest.raises(ValueError, match="Det"):
        MonomialExtension(W, W, ((1, 1), (1, 1)), (1, 1))
    E = MonomialExtension.from_target([[2, 1], [0, 1]], W)
    bad_src = MonomialValuation.lex(2)
    with pytest.raises(ValueError, match="value incompatibility at x1"):
        MonomialExtension(bad_src, W, E.matrix, (1, 1))


@pytest.mark.parametrize("name,e", [("prop1_identity", 1), ("prop1_lex_21", 2),
                                    ("prop1_lex_diag", 6), ("prop1_quad_diag", 6),
                                    ("prop1_quad_mixed", 3), ("prop1_lex3", 2)])
def test_ramification_index_is_the_determinant(name, e):
    E = spec(name).monomial_extension()
    assert E.e == e == abs(sympy.Matrix(E.matrix).det())
    # index of A^T Z^n in Z^n from the Smith normal form
    from sympy.matrices.normalforms import smith_normal_form
    snf = smith_normal_form(sympy.Matrix(E.matrix), domain=sympy.ZZ)
    assert E.lattice_index() == abs(sympy.prod(snf.diagonal()))
    assert E.degree == E.e * E.f


def test_coset_representatives_example():
    E = spec("prop1_lex_21").monomial_extension()
    reps = E.coset_representatives(Value((3, 3), E.target.order))
    assert reps == (Value((0, 0), E.target.order), E.target.values[0])


def _sym(v):
    if isinstance(v.order, QuadraticWeightOrder):
        return sympy.Rational(v.coords[0]) + sympy.Rational(v.coords[1]) * sympy.sqrt(v.order.d)
    return tuple(v.coords)


def test_pieces_against_monomial_count():
    E = spec("prop1_quad_mixed").monomial_extension()
    V = E.target
    counts = Counter(_sym(V.monomial_value(ex)) for ex in product(range(12), repeat=2))
    assert max(counts.values()) == 1
    rep = verify_prop1(E, Value((6, 0), V.order))
    for lam, dim, ok in rep.pieces_s:
        assert ok and dim == counts.get(_sym(lam), 0)


@pytest.mark.parametrize("name", MONO_SPECS)
def test_prop1_on_shipped_examples(name):
    E = spec(name).monomial_extension()
    order = E.target.order
    bound = Value((4,) * order.rank, order) if isinstance(order, LexOrder) else Value((6, 0), order)
    rep = verify_prop1(E, bound)
    assert rep.verdict == "verified"
    assert rep.pieces_ok and rep.relations_ok and rep.lattice_index == rep.e
    assert all(dim in (0, 1) for _, dim, _ in rep.pieces_r + rep.pieces_s)


def test_non_finite_cover_is_reported():
    E = spec("prop1_lex_21").monomial_extension()
    rep = verify_prop1(E, Value((4, 4), E.target.order))
    assert rep.verdict == "verified" and not rep.module_finite
    assert any("did not stabilize" in n for n in rep.notes)
    rep = verify_prop1(spec("prop1_lex_diag").monomial_extension(), Value((8, 8), E.target.order))
    assert rep.module_finite


coeff = st.integers(-3, 3)
monos = st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)), coeff, min_size=1,
                        max_size=4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["lex", "quad2", "quad3"]), monos, monos)
def test_monomial_valuation_axioms(kind, a, b):
    V = {"lex": MonomialValuation.lex(2), "quad2": MonomialValuation.quadratic(2),
         "quad3": MonomialValuation.quadratic(3, coords=((1, 1), (2, 0)))}[kind]
    f = Poly(QQ, V.names, {e: F(c) for e, c in a.items() if c})
    g = Poly(QQ, V.names, {e: F(c) for e, c in b.items() if c})
    if f.is_zero() or g.is_zero():
        return
    vf, vg = monomial_nu(V, f), monomial_nu(V, g)
    assert monomial_nu(V, f * g) == vf + vg
    if not (f + g).is_zero():
        s = monomial_nu(V, f + g)
        assert s >= min(vf, vg)
        if vf != vg:
            assert s == min(vf, vg)
