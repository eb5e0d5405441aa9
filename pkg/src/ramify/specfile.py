"""Valuation spec files (JSON or TOML) and the objects they describe.

All numbers are exact: rationals are strings ``"p/q"`` (integers are
accepted on input) and floats are rejected.

Layout::

    name = "E1"
    names = ["u", "v"]
    beta0 = "1"
    beta1 = "1"

    [field]
    base = "QQ"            # or a prime such as 7
    extensions = []        # [{name = "i", minpoly = "z^2+1"}, ...]

    [[steps]]
    minpoly = "z^2-2"
    beta_next = "5"
    root_label = "a1"      # optional
    tau = "1"              # optional

    [extension]            # optional monomial pair R -> S
    t = 2
    gamma0 = "1+x"
    names = ["x", "y"]
    s_residue_tower = []   # extra roots adjoined to the base of R

    [monomial]             # optional monomial extension in dimension n
    order = "lex"          # or "quadratic"; then d = 2
    target_values = [["1", "0"], ["0", "1"]]
    matrix = [[2, 1], [0, 1]]
    deltas = ["1", "1"]
    f = 1
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

from .algebra.fields import FieldTower, tower_extend
from .algebra.poly import parse_univariate
from .algebra.values import LexOrder, QuadraticWeightOrder, Value, parse_rational
from .keyseq import Budget, KeySequence, LocalRingModel, StepSpec, build_sequence

__all__ = ["SpecError", "ValuationSpec", "load_spec", "loads_spec", "shipped_specs",
           "shipped_spec_path", "dumps_json", "dumps_toml"]


class SpecError(ValueError):
    """Malformed spec file."""


def _rat(x, what) -> str:
    if isinstance(x, float):
        raise SpecError(f"{what}: floating point numbers are not allowed ({x!r})")
    try:
        return str(parse_rational(x))
    except (ValueError, TypeError) as exc:
        raise SpecError(f"{what}: {exc}") from exc


def _str(x, what) -> str:
    if not isinstance(x, str):
        raise SpecError(f"{what} must be a string")
    return x


def _int(x, what) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SpecError(f"{what} must be an integer")
    return x


def _ext_list(items, what) -> list:
    out = []
    for j, e in enumerate(items or []):
        if not isinstance(e, dict) or "minpoly" not in e or "name" not in e:
            raise SpecError(f"{what}[{j}] needs 'name' and 'minpoly'")
        out.append({"name": _str(e["name"], f"{what}[{j}].name"),
                    "minpoly": _str(e["minpoly"], f"{what}[{j}].minpoly")})
    return out


@dataclass
class ValuationSpec:
    name: str = ""
    names: list = dc_field(default_factory=lambda: ["u", "v"])
    beta0: str = "1"
    beta1: str = "1"
    field: dict = dc_field(default_factory=lambda: {"base": "QQ", "extensions": []})
    steps: list = dc_field(default_factory=list)
    extension: dict | None = None
    monomial: dict | None = None

    # -- (de)serialization --------------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict) -> "ValuationSpec":
        if not isinstance(d, dict):
            raise SpecError("a spec is a table/object at top level")
        known = {"name", "names", "beta0", "beta1", "field", "steps", "extension", "monomial"}
        extra = set(d) - known
        if extra:
            raise SpecError(f"unknown keys: {', '.join(sorted(extra))}")
        spec = cls()
        spec.name = _str(d.get("name", ""), "name")
        names = d.get("names", ["u", "v"])
        if not (isinstance(names, list) and len(names) == 2 and all(isinstance(n, str) for n in names)):
            raise SpecError("names must be a list of two strings")
        spec.names = list(names)
        spec.beta0 = _rat(d.get("beta0", "1"), "beta0")
        spec.beta1 = _rat(d.get("beta1", "1"), "beta1")
        fd = d.get("field", {"base": "QQ"})
        if not isinstance(fd, dict):
            raise SpecError("field must be a table")
        base = fd.get("base", "QQ")
        if base != "QQ":
            base = _int(base, "field.base")
        spec.field = {"base": base, "extensions": _ext_list(fd.get("extensions"), "field.extensions")}
        steps = []
        for j, s in enumerate(d.get("steps", [])):
            if not isinstance(s, dict) or "minpoly" not in s or "beta_next" not in s:
                raise SpecError(f"steps[{j}] needs 'minpoly' and 'beta_next'")
            extra = set(s) - {"minpoly", "beta_next", "root_label", "tau"}
            if extra:
                raise SpecError(f"steps[{j}]: unknown keys {sorted(extra)}")
            st = {"minpoly": _str(s["minpoly"], f"steps[{j}].minpoly"),
                  "beta_next": _rat(s["beta_next"], f"steps[{j}].beta_next")}
            if s.get("root_label") is not None:
                st["root_label"] = _str(s["root_label"], f"steps[{j}].root_label")
            if s.get("tau") is not None:
                st["tau"] = _str(s["tau"], f"steps[{j}].tau")
            steps.append(st)
        spec.steps = steps
        ext = d.get("extension")
        if ext is not None:
            if not isinstance(ext, dict) or "t" not in ext:
                raise SpecError("extension needs 't'")
            snames = ext.get("names", ["x", "y"])
            if not (isinstance(snames, list) and len(snames) == 2):
                raise SpecError("extension.names must be a list of two strings")
            spec.extension = {"t": _int(ext["t"], "extension.t"),
                              "gamma0": _str(ext.get("gamma0", "1"), "extension.gamma0"),
                              "names": [_str(n, "extension.names") for n in snames],
                              "s_residue_tower": _ext_list(ext.get("s_residue_tower"),
                                                           "extension.s_residue_tower")}
        mono = d.get("monomial")
        if mono is not None:
            if not isinstance(mono, dict) or "matrix" not in mono or "target_values" not in mono:
                raise SpecError("monomial needs 'matrix' and 'target_values'")
            order = mono.get("order", "lex")
            if order not in ("lex", "quadratic"):
                raise SpecError("monomial.order must be 'lex' or 'quadratic'")
            m = {"order": order,
                 "target_values": [[_rat(c, "monomial.target_values") for c in v]
                                   for v in mono["target_values"]],
                 "matrix": [[_int(a, "monomial.matrix") for a in row] for row in mono["matrix"]],
                 "deltas": [_rat(x, "monomial.deltas") for x in
                            mono.get("deltas", ["1"] * len(mono["matrix"]))],
                 "f": _int(mono.get("f", 1), "monomial.f")}
            if order == "quadratic":
                m["d"] = _int(mono.get("d", 2), "monomial.d")
            spec.monomial = m
        return spec

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"name": self.name, "names": list(self.names), "beta0": self.beta0,
                             "beta1": self.beta1, "field": self.field, "steps": self.steps}
        if self.extension is not None:
            d["extension"] = self.extension
        if self.monomial is not None:
            d["monomial"] = self.monomial
        return json.loads(json.dumps(d))

    # -- objects --------------------------------------------------------------------
    def base_field(self) -> FieldTower:
        base = self.field["base"]
        node = FieldTower.rationals() if base == "QQ" else FieldTower.prime(base)
        return _extend(node, self.field["extensions"])

    def ring(self) -> LocalRingModel:
        return LocalRingModel(self.base_field(), tuple(self.names))

    def sequence(self, depth: int | None = None) -> KeySequence:
        """The key sequence; ``depth`` keeps only the first ``depth - 1`` steps."""
        steps = self.steps
        if depth is not None:
            if depth < 1:
                raise SpecError("depth must be at least 1")
            steps = steps[:max(depth - 1, 0)]
        specs = [StepSpec(minpoly=s["minpoly"], beta_next=Fraction(s["beta_next"]),
                          tau=s.get("tau"), root_label=s.get("root_label")) for s in steps]
        return build_sequence(self.ring(), Fraction(self.beta0), Fraction(self.beta1), specs)

    def pair(self, depth: int | None = None):
        from .extension import make_pair

        if self.extension is None:
            raise SpecError("this spec file has no extension block")
        ext = self.extension
        seq = self.sequence(depth)
        k_s = _extend(seq.ring.field, ext["s_residue_tower"])
        return make_pair(seq, ext["t"], ext["gamma0"], s_field=k_s, s_names=tuple(ext["names"]))

    def monomial_extension(self):
        from .abhyankar import MonomialExtension, MonomialValuation

        m = self.monomial
        if m is None:
            raise SpecError("this spec file has no monomial block")
        n = len(m["matrix"])
        if m["order"] == "lex":
            order = LexOrder(n)
        else:
            if n != 2:
                raise SpecError("the quadratic-weight order needs n = 2")
            order = QuadraticWeightOrder(m["d"])
        target = MonomialValuation(tuple(Value(v, order) for v in m["target_values"]),
                                   tuple(f"y{i + 1}" for i in range(n)))
        deltas = tuple(Fraction(x) for x in m["deltas"])
        return MonomialExtension.from_target(m["matrix"], target, deltas, m["f"])

    def value_order(self):
        m = self.monomial
        if m is None:
            return None
        n = len(m["matrix"])
        return LexOrder(n) if m["order"] == "lex" else QuadraticWeightOrder(m["d"])


def _extend(node: FieldTower, exts: list) -> FieldTower:
    for e in exts:
        node = tower_extend(node, parse_univariate(e["minpoly"], node, "z"), e["name"])
    return node


def loads_spec(text: str, fmt: str = "json") -> ValuationSpec:
    try:
        if fmt == "json":
            data = json.loads(text, parse_float=_reject_float)
        elif fmt == "toml":
            data = tomllib.loads(text, parse_float=_reject_float)
        else:
            raise SpecError(f"unknown format {fmt}")
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise SpecError(f"cannot parse spec: {exc}") from exc
    return ValuationSpec.from_dict(data)


def _reject_float(text):
    raise SpecError(f"floating point numbers are not allowed ({text})")


def load_spec(path) -> ValuationSpec:
    """Load a spec file; the format follows the suffix (``.toml`` or JSON)."""
    p = Path(path)
    if not p.exists():
        builtin = shipped_spec_path(str(path))
        if builtin is None:
            raise SpecError(f"no such spec file: {path}")
        p = builtin
    fmt = "toml" if p.suffix == ".toml" else "json"
    return loads_spec(p.read_text(encoding="utf-8"), fmt)


def shipped_specs() -> list[str]:
    root = resources.files("ramify") / "specs"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".json"))


def shipped_spec_path(name: str):
    """Path of a shipped spec given its short name (``"e1"``), else ``None``."""
    root = resources.files("ramify") / "specs"
    cand = root / f"{name}.json"
    return Path(str(cand)) if cand.is_file() else None


def dumps_json(spec: ValuationSpec) -> str:
    return json.dumps(spec.to_dict(), indent=2, sort_keys=True) + "\n"


def _toml_value(v) -> str:
    if isinstance(v, bool):  # pragma: no cover - no booleans in specs
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, list):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k} = {_toml_value(x)}" for k, x in sorted(v.items())) + "}"
    raise TypeError(f"cannot write {type(v).__name__} to TOML")


def dumps_toml(spec: ValuationSpec) -> str:
    d = spec.to_dict()
    lines = []
    for key in ("name", "names", "beta0", "beta1"):
        lines.append(f"{key} = {_toml_value(d[key])}")
    lines += ["", "[field]"]
    for k, v in sorted(d["field"].items()):
        lines.append(f"{k} = {_toml_value(v)}")
    for s in d["steps"]:
        lines += ["", "[[steps]]"] + [f"{k} = {_toml_value(v)}" for k, v in sorted(s.items())]
    for block in ("extension", "monomial"):
        if block in d:
            lines += ["", f"[{block}]"] + [f"{k} = {_toml_value(v)}"
                                            for k, v in sorted(d[block].items())]
    return "\n".join(lines) + "\n"
