from fractions import Fraction as F

import pytest
from conftest import pair, sequence
from oracles import graded_dim_by_arc, graded_dim_by_residues, pulled_back_arc

from ramify.algebra.fields import FieldTower, ReducibleError, tower_extend
from ramify.extension import (check_stability, compare_sequences, independent_transfer,
                              make_pair, transfer_sequence, transfer_square, verify_corollary,
                              verify_theorem2)
from ramify.keyseq import graded_piece

STABLE = ["e1_ext", "cusp_ext", "tower_ext", "trivial"]


def test_pair_basics(e1_pair):
    assert e1_pair.t == 2
    assert e1_pair.x_value == F(1, 2) and e1_pair.y_value == 1
    assert e1_pair.ramification_index() == 2
    assert e1_pair.value_stable()


def test_not_a_pair_is_rejected(e1):
    with pytest.raises(ValueError, match="t"):
        make_pair(e1, 0)
    with pytest.raises(ValueError, match="unit"):
        make_pair(e1, 2, "x")


def test_stability_certificate(e1_pair):
    cert = check_stability(e1_pair)
    assert (cert.e, cert.t, cert.f, cert.stable) == (2, 2, 1, "yes")
    assert cert.iterations == ((2, 1),) * 3


def test_non_stable_pair_is_detected():
    cert = check_stability(pair("nonstable"))
    assert (cert.e, cert.t, cert.stable) == (1, 2, "no")
    assert any("value group of R" in w for w in cert.witnesses)


def test_residue_extension_that_splits_a_minimal_polynomial(e1):
    # z^2 - 2 factors once sqrt 2 is in the residue field of S
    k_s = tower_extend(FieldTower.rationals(), [-2, 0, 1], "w")
    p = make_pair(e1, 2, "1", s_field=k_s)
    cert = check_stability(p)
    assert cert.stable == "no"
    assert any("factors over the residue field of S" in w for w in cert.witnesses)
    with pytest.raises(ReducibleError):
        p.s_tower()


@pytest.mark.parametrize("name", STABLE)
def test_transfer_matches_independent_rebuild(name):
    p = pair(name)
    a, b = transfer_sequence(p), independent_transfer(p)
    assert compare_sequences(a, b) == []
    assert a.depth == p.r_seq.depth
    assert a.values[0] * p.t == p.r_seq.values[0]
    assert a.values[1:] == p.r_seq.values[1:]
    for st_s, st_r in zip(a.steps, p.r_seq.steps):
        assert st_s.nbar == st_r.nbar
        assert st_s.omega[0] == p.t * st_r.omega[0]
        assert st_s.omega[1:] == st_r.omega[1:]


def test_trivial_pair_reproduces_r():
    p = pair("trivial")
    s = transfer_sequence(p)
    r = p.r_seq
    assert s.values == r.values
    assert [str(k) for k in s.keys[1:]] == [str(k).replace("u", "x").replace("v", "y")
                                           for k in r.keys[1:]]


@pytest.mark.parametrize("name", STABLE)
def test_transform_square_commutes(name):
    assert all(transfer_square(pair(name)).values())


def test_theorem2_running_example(e1_pair):
    rep = verify_theorem2(e1_pair, 6)
    assert rep.verdict == "verified" and rep.cosets_distinct and rep.relation_ok
    rows = {r.lam: r for r in rep.rows}
    assert (rows[F(2)].dim_s, rows[F(2)].dims_r) == (2, (2, 0))
    assert (rows[F(1, 2)].dim_s, rows[F(1, 2)].dims_r) == (1, (0, 1))
    assert (rows[F(0)].dim_s, rows[F(0)].dims_r) == (1, (1, 0))
    assert rep.presentation.degree == 2
    assert "Z^2" in rep.presentation.relation


def test_theorem2_not_certified_is_undetermined():
    rep = verify_theorem2(pair("nonstable"), 4)
    assert rep.verdict == "undetermined" and rep.rows == ()


@pytest.mark.parametrize("name,gens", [("e1_ext", (0, F(1, 2))),
                                       ("cusp_ext", (0, F(2, 3), F(4, 3))),
                                       ("tower_ext", (0, F(1, 2))),
                                       ("trivial", (0,))])
def test_corollary_generators(name, gens):
    rep = verify_corollary(pair(name), 12)
    assert rep.verdict == "verified"
    assert rep.generators == gens and len(gens) == rep.e


def test_corollary_not_applicable_to_non_stable_pair():
    assert verify_corollary(pair("nonstable"), 12).verdict == "undetermined"


def test_s_dimensions_against_generic_branch(e1):
    p = make_pair(e1, 2, "1+x")
    s_seq = transfer_sequence(p)
    arc = pulled_back_arc(e1, ("x", "y"), 2, "1+x", d=2)
    for lam in [F(k, 2) for k in range(0, 13)]:
        ours = graded_piece(s_seq, lam).dim
        assert ours == graded_dim_by_arc(arc, s_seq.keys, s_seq.values, lam)
        assert ours == graded_dim_by_residues(s_seq, lam)
