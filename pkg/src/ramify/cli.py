"""Command line interface.

Exit codes: 0 verified / success, 1 refuted, 2 input error, 3 undetermined.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from .algebra.fields import ReducibleError, format_univariate
from .algebra.values import LexOrder, Value, parse_rational
from .keyseq import (Budget, PrecisionError, ResourceLimitError, SequenceError, nu_eval)
from .specfile import SpecError, load_spec

EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_UNDETERMINED = 0, 1, 2, 3


class Report:
    """Command echo, parameters, tables and a verdict; rendered as text, CSV or JSON."""

    def __init__(self, command: str, params: dict):
        self.command = command
        self.params = {k: str(v) for k, v in params.items() if v is not None}
        self.tables: list[tuple[str, list[str], list[list[str]]]] = []
        self.lines: list[tuple[str, str]] = []
        self.verdict: str | None = None

    def add(self, key, value):
        self.lines.append((key, str(value)))

    def table(self, name, header, rows):
        self.tables.append((name, list(header), [[_s(c) for c in r] for r in rows]))

    def to_dict(self):
        d = {"command": self.command, "parameters": self.params,
             "results": {k: v for k, v in self.lines},
             "tables": {n: [dict(zip(h, r)) for r in rows] for n, h, rows in self.tables}}
        if self.verdict is not None:
            d["verdict"] = self.verdict
        return d

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\r\n")
            w.writerow(["section", "key", "value"])
            w.writerow(["command", "command", self.command])
            for k, v in sorted(self.params.items()):
                w.writerow(["parameter", k, v])
            for k, v in self.lines:
                w.writerow(["result", k, v])
            if self.verdict is not None:
                w.writerow(["verdict", "verdict", self.verdict])
            for name, header, rows in self.tables:
                w.writerow([])
                w.writerow(["table", name] + header)
                for r in rows:
                    w.writerow(["row", name] + r)
            return buf.getvalue()
        out = [f"$ ramify {self.command}"]
        if self.params:
            out.append("parameters: " + ", ".join(f"{k}={v}" for k, v in sorted(self.params.items())))
        for k, v in self.lines:
            out.append(f"{k}: {v}")
        for name, header, rows in self.tables:
            out.append("")
            out.append(f"[{name}]")
            widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
                      for i, h in enumerate(header)]
            out.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
            for r in rows:
                out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if self.verdict is not None:
            out.append("")
            out.append(f"verdict: {self.verdict}")
        return "\n".join(out) + "\n"


def _s(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (tuple, list)):
        return " ".join(_s(c) for c in x)
    return str(x)


def _budget(args) -> Budget:
    return Budget(max_degree=args.max_degree, max_bits=args.max_bits)


def _sequence(args, spec):
    return spec.sequence(args.depth)


def _seq_rows(seq):
    return [[r["i"], r["key"], r["beta"], r["nbar"], r["omega"], r["minpoly"], r["d"], r["n"]]
            for r in seq.table()]


SEQ_HEADER = ["i", "P_i", "beta_i", "nbar_i", "omega(i)", "minpoly", "d_i", "n_i"]


# -- commands ------------------------------------------------------------------------

def cmd_genseq(args) -> tuple[Report, int]:
    spec = load_spec(args.spec)
    seq = _sequence(args, spec)
    rep = Report(f"genseq {args.spec}", {"depth": seq.depth})
    rep.add("residue field", seq.tower.describe())
    rep.add("depth", seq.depth)
    rep.table("sequence", SEQ_HEADER, _seq_rows(seq))
    return rep, EXIT_OK


def cmd_eval(args) -> tuple[Report, int]:
    spec = load_spec(args.spec)
    seq = _sequence(args, spec)
    rep = Report(f"eval {args.spec} {args.poly}", {"depth": seq.depth})
    f = seq.ring.poly(args.poly)
    res = nu_eval(seq, f, _budget(args))
    rep.add("polynomial", f)
    rep.add("value", res.value)
    rep.add("flag", res.flag.value)
    return rep, EXIT_OK


def cmd_transform(args) -> tuple[Report, int]:
    from .transform import describe_sigma, iterate_quadratic, iterate_transforms

    spec = load_spec(args.spec)
    seq = _sequence(args, spec)
    rep = Report(f"transform {args.spec}", {"depth": seq.depth, "steps": args.steps})
    if args.steps == 0:
        rep.add("note", "no transform requested; input sequence echoed")
        rep.table("sequence", SEQ_HEADER, _seq_rows(seq))
        return rep, EXIT_OK
    rows = []
    for j, st in enumerate(iterate_quadratic(seq, args.steps), 1):
        rows.append([j, st.nbar, st.omega, st.a, st.b, format_univariate(st.sigma_minpoly),
                     " ".join(map(str, st.values))])
        rep.add(f"step {j}", describe_sigma(st))
    rep.table("quadratic transforms of R",
              ["step", "nbar_1", "omega_0(1)", "a", "b", "sigma minpoly", "values"], rows)
    if spec.extension is not None:
        pair = spec.pair(args.depth)
        it = iterate_transforms(pair, args.steps)
        prow = []
        for st in it:
            prow.append([st.level + 1, st.r_invariants[0], st.r_invariants[1],
                         st.s_invariants[0], st.s_invariants[1], st.t1, st.m,
                         st.identity_holds, st.gamma_str()])
        rep.table("monomial pair transforms",
                  ["step", "nbar_1(R)", "omega_0(1)(R)", "nbar_1(S)", "omega_0(1)(S)", "t_i",
                   "m", "matrix identity", "gamma_i"], prow)
        for n in it.notes:
            rep.add("note", n)
    return rep, EXIT_OK


def _bound(args, default="6"):
    text = args.bound if args.bound is not None else default
    return parse_rational(text)


def _mono_bound(args, E):
    order = E.target.values[0].order
    text = args.bound if args.bound is not None else "6"
    parts = [parse_rational(p) for p in text.split(",")]
    if len(parts) == 1:
        # a single number: a box for lex values, a real bound otherwise
        parts = parts * order.rank if isinstance(order, LexOrder) \
            else parts + [Fraction(0)] * (order.rank - 1)
    if len(parts) != order.rank:
        raise ValueError(f"bound needs {order.rank} coordinates")
    return Value(parts, order)


def cmd_verify(args) -> tuple[Report, int]:
    from .extension import check_stability, verify_corollary, verify_theorem2

    spec = load_spec(args.spec)
    which = args.which
    if which == "prop1":
        from .abhyankar import verify_prop1

        E = spec.monomial_extension()
        bound = _mono_bound(args, E)
        r = verify_prop1(E, bound)
        rep = Report(f"verify prop1 {args.spec}", {"bound": bound})
        rep.add("matrix", E.matrix)
        rep.add("relations", "; ".join(E.relations()))
        rep.add("e", r.e)
        rep.add("|det A|", abs(r.det))
        rep.add("lattice index", r.lattice_index)
        rep.add("f", r.f)
        rep.add("degree e*f", r.degree)
        rep.add("coset representatives", ", ".join(map(str, r.coset_representatives)))
        rep.add("module generators (truncated)", ", ".join(map(str, r.module_generators)))
        rep.add("module finite at bound", _s(r.module_finite))
        for n in r.notes:
            rep.add("note", n)
        rep.table("graded pieces of R", ["lambda", "dim", "matches semigroup"], r.pieces_r)
        rep.table("graded pieces of S", ["lambda", "dim", "matches semigroup"], r.pieces_s)
        rep.verdict = f"{r.verdict} (bound {bound})"
        return rep, EXIT_OK if r.verdict == "verified" else EXIT_REFUTED

    pair = spec.pair(args.depth)
    depth = pair.r_seq.depth
    if which == "stability":
        c = check_stability(pair)
        rep = Report(f"verify stability {args.spec}", {"depth": depth})
        rep.add("e", c.e)
        rep.add("t", c.t)
        rep.add("f", c.f)
        rep.add("[k_S:k_R]", c.residue_degree)
        for w in c.witnesses:
            rep.add("witness", w)
        if c.iterations:
            rep.table("transform iterations", ["step", "t_i", "m"],
                      [[j + 1, t1, m] for j, (t1, m) in enumerate(c.iterations)])
        rep.verdict = f"stable = {c.stable} (depth {depth})"
        code = {"yes": EXIT_OK, "no": EXIT_REFUTED}.get(c.stable, EXIT_UNDETERMINED)
        return rep, code
    bound = _bound(args)
    if which == "theorem2":
        r = verify_theorem2(pair, bound)
        rep = Report(f"verify theorem2 {args.spec}", {"depth": depth, "bound": bound})
        rep.add("e", r.e)
        rep.add("f", r.f)
        rep.add("stability", r.certificate.stable)
        if r.presentation is not None:
            rep.add("presentation", r.presentation)
            rep.add("cosets j*nu(x) distinct", _s(r.cosets_distinct))
            rep.add("relation Z^e = [u]/[gamma0]", _s(r.relation_ok))
        for n in r.notes:
            rep.add("note", n)
        rep.table("hilbert identity",
                  ["lambda", "dim S", "dims R (j<e)", "sum", "ok"],
                  [[row.lam, row.dim_s, row.dims_r, sum(row.dims_r), row.ok] for row in r.rows])
        rep.verdict = f"{r.verdict} (depth {depth}, bound {bound})"
        code = {"verified": EXIT_OK, "refuted": EXIT_REFUTED}.get(r.verdict, EXIT_UNDETERMINED)
        return rep, code
    if which == "corollary":
        r = verify_corollary(pair, bound)
        rep = Report(f"verify corollary {args.spec}", {"depth": depth, "bound": bound})
        rep.add("e", r.e)
        rep.add("module generators", ", ".join(map(str, r.generators)))
        rep.add("expected", ", ".join(map(str, r.expected)))
        rep.add("stabilized", _s(r.stabilized))
        rep.verdict = f"{r.verdict} (depth {depth}, bound {bound})"
        code = {"verified": EXIT_OK, "refuted": EXIT_REFUTED}.get(r.verdict, EXIT_UNDETERMINED)
        return rep, code
    raise ValueError(f"unknown check {which}")  # pragma: no cover - argparse restricts choices


def cmd_check(args) -> tuple[Report, int]:
    """Random valuation-axiom checks (multiplicativity, ultrametric inequality)."""
    from .sampling import random_poly

    spec = load_spec(args.spec)
    seq = _sequence(args, spec)
    rng = random.Random(args.seed)
    budget = _budget(args)
    failures = []
    for k in range(args.samples):
        f = random_poly(seq.ring, rng, max_degree=args.poly_degree)
        g = random_poly(seq.ring, rng, max_degree=args.poly_degree)
        vf, vg = nu_eval(seq, f, budget).value, nu_eval(seq, g, budget).value
        if nu_eval(seq, f * g, budget).value != vf + vg:
            failures.append([k, "multiplicativity", f, g])
        s = f + g
        if not s.is_zero() and nu_eval(seq, s, budget).value < min(vf, vg):
            failures.append([k, "ultrametric", f, g])
    rep = Report(f"check {args.spec}", {"depth": seq.depth, "seed": args.seed,
                                        "samples": args.samples})
    rep.add("pairs checked", args.samples)
    rep.add("failures", len(failures))
    if failures:
        rep.table("failures", ["sample", "property", "f", "g"], failures)
    rep.verdict = "verified" if not failures else "refuted"
    return rep, EXIT_OK if not failures else EXIT_REFUTED


# -- entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=None, help="truncation depth N")
    common.add_argument("--bound", default=None, help="value bound, exact rational p/q")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-degree", type=int, default=4096)
    common.add_argument("--max-bits", type=int, default=200_000)

    p = argparse.ArgumentParser(prog="ramify", description="Key polynomials, transforms and "
                                "monomial extensions of plane valuations, with exact arithmetic.")
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("genseq", parents=[common], help="build and print a key sequence")
    g.add_argument("spec")
    g.set_defaults(func=cmd_genseq)
    e = sub.add_parser("eval", parents=[common], help="value of a polynomial")
    e.add_argument("spec")
    e.add_argument("poly")
    e.set_defaults(func=cmd_eval)
    t = sub.add_parser("transform", parents=[common], help="iterated quadratic transforms")
    t.add_argument("spec")
    t.add_argument("--steps", type=int, default=1)
    t.set_defaults(func=cmd_transform)
    v = sub.add_parser("verify", parents=[common], help="run a verification")
    v.add_argument("which", choices=("theorem2", "corollary", "prop1", "stability"))
    v.add_argument("spec")
    v.set_defaults(func=cmd_verify)
    c = sub.add_parser("check", parents=[common], help="random valuation-axiom checks")
    c.add_argument("spec")
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--poly-degree", type=int, default=5)
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep, code = args.func(args)
    except (ResourceLimitError, PrecisionError) as exc:
        print(f"ramify: undetermined: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except NotImplementedError as exc:
        print(f"ramify: undetermined: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except (SpecError, SequenceError, ReducibleError, ValueError, TypeError, OSError) as exc:
        print(f"ramify: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RuntimeError as exc:
        # a transfer contradiction or similar internal inconsistency
        print(f"ramify: refuted: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    sys.stdout.write(rep.render(args.format))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
