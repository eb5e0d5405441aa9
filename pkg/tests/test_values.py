import math
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ramify.algebra.values import (LexOrder, QuadraticWeightOrder, SubgroupView, Value,
                                   hermite_normal_form, module_generators, parse_rational,
                                   semigroup_members, subgroup_index)


def test_parse_rational_is_exact():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational(5) == 5
    for bad in (0.5, "0.5", "1e3", True):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_subgroup_index_examples():
    assert SubgroupView([F(1)]).index_in(SubgroupView([F(1), F(3, 2)])) == 2
    assert subgroup_index([F(1, 2), F(2, 3)], [F(1)]) == 6
    with pytest.raises(ValueError):
        SubgroupView([F(1, 2)]).index_in(SubgroupView([F(1)]))


@given(st.lists(st.fractions(min_value=F(1, 6), max_value=6, max_denominator=6),
                min_size=1, max_size=4))
def test_rank_one_index_is_denominator_ratio(gens):
    # G(gens) = (g/m) Z with g = gcd of numerators, m = lcm of denominators
    big = SubgroupView(gens)
    small = SubgroupView([gens[0]])
    m = math.lcm(*[x.denominator for x in gens])
    g = math.gcd(*[int(x * m) for x in gens])
    step = F(g, m)
    assert small.index_in(big) == gens[0] / step


def test_hnf_matches_sympy():
    from sympy.matrices.normalforms import hermite_normal_form as hnf

    rows = [[4, 6, 2], [2, 3, 5], [0, 3, 1]]
    ours = hermite_normal_form(rows)
    det_ours = abs(sympy.Matrix([r for r in ours if any(r)]).det())
    assert det_ours == abs(sympy.Matrix(hnf(sympy.Matrix(rows).T).T).det())


def test_semigroup_members_and_module_cover():
    assert semigroup_members([F(2), F(3)], 7) == [0, 2, 3, 4, 5, 6, 7]
    assert semigroup_members([F(1), F(1)], 4) == [0, 1, 2, 3, 4]
    cover = module_generators([F(1, 2), F(1)], [F(1)], 6)
    assert cover.generators == (0, F(1, 2)) and cover.stabilized
    cover = module_generators([F(1, 4), F(1)], [F(1)], 6)
    assert cover.generators == (0, F(1, 4), F(1, 2), F(3, 4))


@settings(max_examples=40)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=3), st.integers(0, 25))
def test_semigroup_matches_brute_force(gens, bound):
    from itertools import product

    tops = [bound // g for g in gens]
    brute = {sum(e * g for e, g in zip(es, gens))
             for es in product(*(range(t + 1) for t in tops))}
    assert semigroup_members([F(g) for g in gens], bound) == sorted(x for x in brute if x <= bound)


def test_orders_compare_exactly():
    q = QuadraticWeightOrder(2)
    a, b = Value((3, 0), q), Value((1, 2), q)       # 3 < 1 + 2 sqrt 2
    assert a < b
    assert Value((-3, 2), q) < Value((0, 0), q)      # 2 sqrt 2 < 3
    lex = LexOrder(2)
    assert Value((0, 5), lex) < Value((1, 0), lex)
    with pytest.raises(TypeError):
        a < Value((1, 0), lex)
    with pytest.raises(ValueError):
        QuadraticWeightOrder(4)


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_quadratic_sign_matches_sympy(p, q):
    order = QuadraticWeightOrder(3)
    ref = sympy.sign(p + q * sympy.sqrt(3))
    assert order.sign((F(p), F(q))) == ref
