import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramify.specfile import (SpecError, ValuationSpec, dumps_json, dumps_toml, load_spec,
                             loads_spec, shipped_specs)


def test_shipped_specs_are_listed():
    names = shipped_specs()
    for n in ("e1", "e1_ext", "cusp", "tower", "prop1_lex_21"):
        assert n in names


@pytest.mark.parametrize("name", shipped_specs())
def test_roundtrip_through_both_formats(name):
    spec = load_spec(name)
    assert loads_spec(dumps_json(spec), "json") == spec
    assert loads_spec(dumps_toml(spec), "toml") == spec


def test_load_from_path(tmp_path):
    spec = load_spec("e1")
    p = tmp_path / "mine.toml"
    p.write_text(dumps_toml(spec))
    again = load_spec(p)
    assert again.sequence().values == spec.sequence().values


def test_floats_are_rejected():
    bad = '{"beta0": 1.5, "beta1": "1"}'
    with pytest.raises(SpecError, match="floating point"):
        loads_spec(bad)
    with pytest.raises(SpecError, match="floating point"):
        loads_spec('beta0 = 0.5\n', "toml")


@pytest.mark.parametrize("data,msg", [
    ({"colour": 1}, "unknown keys"),
    ({"steps": [{"minpoly": "z^2-2"}]}, "beta_next"),
    ({"steps": [{"minpoly": "z^2-2", "beta_next": "5", "extra": 1}]}, "unknown keys"),
    ({"names": ["u"]}, "two strings"),
    ({"field": {"base": "R"}}, "integer"),
    ({"beta0": "1/0"}, "beta0"),
])
def test_malformed_specs(data, msg):
    with pytest.raises(SpecError, match=msg):
        loads_spec(json.dumps(data))


def test_missing_file_and_blocks():
    with pytest.raises(SpecError, match="no such spec"):
        load_spec("does/not/exist.json")
    with pytest.raises(SpecError):
        load_spec("e1").monomial_extension()


def test_depth_truncation():
    spec = load_spec("depth5")
    assert spec.sequence().depth == 5
    assert spec.sequence(3).depth == 3


rats = st.fractions(min_value=1, max_value=20, max_denominator=6).map(str)


@settings(max_examples=40, deadline=None)
@given(rats, rats, st.lists(st.tuples(st.sampled_from(["z^2-2", "z-1", "z^3-5"]), rats),
                            max_size=3))
def test_roundtrip_property(b0, b1, steps):
    spec = ValuationSpec.from_dict({
        "name": "h", "beta0": b0, "beta1": b1,
        "steps": [{"minpoly": m, "beta_next": b} for m, b in steps]})
    assert loads_spec(dumps_json(spec)) == spec
    assert loads_spec(dumps_toml(spec), "toml") == spec
