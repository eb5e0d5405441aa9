import random
from fractions import Fraction as F

import pytest
from conftest import sequence
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import graded_dim_by_arc, graded_dim_by_residues, quadratic_arc

from ramify.abhyankar import MonomialValuation, monomial_nu
from ramify.algebra.fields import FieldTower
from ramify.algebra.poly import Poly
from ramify.algebra.values import QuadraticWeightOrder, SubgroupView, Value
from ramify.keyseq import (Budget, Exactness, LocalRingModel, PrecisionError,
                           ResourceLimitError, SequenceError, StepSpec, build_sequence, expand,
                           graded_piece, initial_form, nu_eval)
from ramify.sampling import random_poly

QQ = FieldTower.rationals()
R = LocalRingModel(QQ)


def test_running_example_steps(e1):
    s1, s2 = e1.steps
    assert (s1.nbar, s1.omega, s1.degree, s1.n) == (1, (1,), 2, 2)
    assert s1.companion == R.poly("u")
    assert e1.keys[2] == R.poly("v^2 - 2*u^2")
    assert (s2.nbar, s2.omega, s2.degree, s2.n) == (1, (5, 0), 1, 1)
    assert s2.companion == R.poly("u^5")
    assert e1.keys[3] == R.poly("v^2 - 2*u^2 - u^5")
    assert e1.values == (1, 1, 5, 11)


def test_value_jump_and_reducibility_errors():
    with pytest.raises(SequenceError, match="inadmissible value jump"):
        build_sequence(R, 1, 1, [StepSpec("z^2-2", 2)])
    with pytest.raises(SequenceError, match="reducible minimal polynomial at step 1"):
        build_sequence(R, 1, 1, [StepSpec("z^2-1", 5)])
    with pytest.raises(ValueError):
        build_sequence(R, 0, 1, [])


@pytest.mark.parametrize("name", ["e1", "e1_deep", "depth5", "cusp", "tower", "cubic", "gf7"])
def test_step_invariants(name):
    seq = sequence(name)
    vals = seq.values
    for st in seq.steps:
        i = st.index
        assert st.nbar == SubgroupView(vals[:i]).index_in(SubgroupView(vals[:i + 1]))
        assert st.nbar * vals[i] == sum(w * b for w, b in zip(st.omega, vals))
        assert all(0 <= w < nb for w, nb in zip(st.omega[1:], seq.nbars))
        assert vals[i + 1] > st.n * vals[i]
        for term in st.terms:
            val = sum(e * b for e, b in zip(term.exponents, vals)) + term.t * st.nbar * vals[i]
            assert val == st.n * vals[i]
        # the root of the minimal polynomial
        acc = st.field.zero
        for k, c in enumerate(st.minpoly):
            acc = acc + st.field(c) * st.alpha ** k
        assert acc == st.field.zero


def test_expansion_examples(e1):
    ex = expand(e1, "v^2")
    terms = {t.exponents: (t.coefficient, t.value) for t in ex.terms}
    # v^2 = P_3 + u^5 + 2u^2 at depth 3
    assert terms == {(0, 0, 0, 1): (1, 11), (5, 0, 0, 0): (1, 5), (2, 0, 0, 0): (2, 2)}
    assert [t.exponents for t in expand(e1, "u^3").terms] == [(3, 0, 0, 0)]
    assert expand(e1, "v^4").reassemble() == R.poly("v^4")
    with pytest.raises(ValueError, match="valuation of zero undefined"):
        nu_eval(e1, "0")


@pytest.mark.parametrize("name", ["e1", "depth5", "tower", "cubic", "gf7"])
def test_expansion_roundtrip_and_bounds(name):
    seq = sequence(name)
    rng = random.Random(7)
    for _ in range(25):
        f = random_poly(seq.ring, rng)
        ex = expand(seq, f)
        assert ex.reassemble() == f
        exps = [t.exponents for t in ex.terms]
        assert len(set(exps)) == len(exps)
        for e in exps:
            assert all(e[k + 1] < b for k, b in enumerate(seq.bounds))


def test_nu_eval_examples(e1):
    assert nu_eval(e1, "v^2 - 2*u^2") == (5, Exactness.EXACT)
    assert nu_eval(e1, "v") == (1, Exactness.EXACT)
    assert nu_eval(e1, "u^3").value == 3
    short = e1.truncate(2)
    assert short.depth == 2
    assert nu_eval(short, "v^2 - 2*u^2") == (5, Exactness.LOWER_BOUND)
    assert nu_eval(e1, e1.keys[3]).flag is Exactness.LOWER_BOUND


def test_initial_forms(e1):
    f = initial_form(e1, "v^2")
    assert f.degree == 2 and f.as_dict() == {(2, 0, 0, 0): 2}
    assert initial_form(e1, "u^3").as_dict() == {(3, 0, 0, 0): 1}
    # v^2 - 2u^2 = P_3 + u^5 and [P_3] sits in degree 11
    assert initial_form(e1, "v^2 - 2*u^2").as_dict() == {(5, 0, 0, 0): 1}
    with pytest.raises(PrecisionError, match="initial form not determined"):
        initial_form(e1.truncate(2), "v^2 - 2*u^2")


def test_graded_piece_examples(e1):
    p = graded_piece(e1, 2)
    assert sorted(p.basis) == [(1, 1, 0, 0), (2, 0, 0, 0)] and p.dim == 2
    assert graded_piece(e1, 0).dim == 1
    assert graded_piece(e1, F(1, 2)).dim == 0


@pytest.mark.parametrize("name,d", [("e1", 2), ("e1_deep", 2), ("cusp", None)])
def test_values_match_generic_branch(name, d):
    seq = sequence(name)
    arc = quadratic_arc(seq, d)
    rng = random.Random(11)
    for _ in range(25):
        f = random_poly(seq.ring, rng, max_degree=6)
        assert nu_eval(seq, f).value == arc.value(f)


@pytest.mark.parametrize("name,d", [("e1", 2), ("cusp", None)])
def test_graded_dimensions_match_brute_force(name, d):
    seq = sequence(name)
    arc = quadratic_arc(seq, d)
    for lam in [F(k, 2) for k in range(0, 17)]:
        ours = graded_piece(seq, lam).dim
        assert ours == graded_dim_by_residues(seq, lam)
        assert ours == graded_dim_by_arc(arc, seq.keys, seq.values, lam)


@pytest.mark.parametrize("name", ["tower", "gf7", "depth5"])
def test_graded_dimensions_by_residues(name):
    seq = sequence(name)
    for lam in [F(k, 3) for k in range(0, 25)]:
        assert graded_piece(seq, lam).dim == graded_dim_by_residues(seq, lam)


coeff = st.integers(-3, 3)
monos = st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)), coeff, min_size=1,
                        max_size=4).filter(lambda d: any(d.values()))


@settings(max_examples=40, deadline=None)
@given(monos, monos)
def test_valuation_axioms_on_e1(a, b):
    seq = sequence("e1")
    f = Poly(QQ, ("u", "v"), {e: F(c) for e, c in a.items() if c})
    g = Poly(QQ, ("u", "v"), {e: F(c) for e, c in b.items() if c})
    if f.is_zero() or g.is_zero():
        return
    vf, vg = nu_eval(seq, f).value, nu_eval(seq, g).value
    assert nu_eval(seq, f * g).value == vf + vg
    if not (f + g).is_zero():
        s = nu_eval(seq, f + g).value
        assert s >= min(vf, vg)
        if vf != vg:
            assert s == min(vf, vg)


def test_rationally_independent_monomial_case():
    order = QuadraticWeightOrder(2)
    b0, b1 = Value((1, 0), order), Value((0, 1), order)
    seq = build_sequence(R, b0, b1, [])
    assert seq.complete
    V = MonomialValuation((b0, b1), ("u", "v"))
    rng = random.Random(3)
    for _ in range(30):
        f = random_poly(seq.ring, rng)
        res = nu_eval(seq, f)
        assert res.flag is Exactness.EXACT
        assert res.value == monomial_nu(V, f)


def test_budget_guard(e1):
    with pytest.raises(ResourceLimitError):
        nu_eval(e1, "u^50*v^3", Budget(max_degree=10))
    with pytest.raises(ResourceLimitError):
        nu_eval(e1, "123456789123456789*u", Budget(max_bits=16))
