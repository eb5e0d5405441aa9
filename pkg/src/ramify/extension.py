"""Strongly monomial extensions ``R -> S`` and the transfer of key sequences.

A pair is given by a key sequence of ``R`` (parameters ``u, v``), a second
ring ``S = k_S[x, y]`` with ``k_S`` extending the coefficient field of ``R``,
an exponent ``t`` and a unit ``gamma0`` of ``S`` such that

    u = gamma0 * x^t,    v = y.

For a stable pair the keys of ``R`` remain keys of ``S``: ``P_i(S)`` is
``P_i(R)`` rewritten in ``x, y``, the step data transfer by explicit
formulas, and the graded ring of ``S`` is obtained from that of ``R`` by
adjoining an ``e``-th root of ``[u]/[gamma0]``.  Every statement here is
certified only at the truncation depth of the given sequence and up to the
value bound handed to the verifiers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .algebra.fields import (FieldTower, ReducibleError, embed, format_element,
                             format_univariate, tower_extend)
from .algebra.poly import Poly
from .algebra.values import SubgroupView, module_generators, semigroup_members
from .keyseq import (KeySequence, KeyStep, LocalRingModel, PrecisionError, RelationTerm,
                     SequenceError, StepSpec, _check_monic, _companion_exponents, _verify_residues,
                     build_sequence, graded_piece, initial_form)
from .transform import PairState, iterate_transforms, quadratic_transform

log = logging.getLogger(__name__)

__all__ = [
    "TransferError",
    "MonomialPair",
    "make_pair",
    "StabilityCertificate",
    "check_stability",
    "transfer_sequence",
    "independent_transfer",
    "compare_sequences",
    "GradedPresentation",
    "HilbertRow",
    "Theorem2Report",
    "verify_theorem2",
    "CorollaryReport",
    "verify_corollary",
    "transfer_square",
]


class TransferError(RuntimeError):
    """A transferred step failed re-verification inside ``S``."""


@dataclass(frozen=True)
class MonomialPair:
    r_seq: KeySequence
    s_ring: LocalRingModel
    t: int
    gamma0: Poly
    x_value: Fraction
    y_value: Fraction
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    # substitution -----------------------------------------------------------
    def to_s(self, f) -> Poly:
        """Rewrite a polynomial of ``R`` in the parameters of ``S``."""
        f = self.r_seq.ring.poly(f)
        field = self.s_ring.field
        u_img = self.gamma0 * self.s_ring.x ** self.t
        return f.change_field(field).subs([u_img, self.s_ring.y], field)

    def state(self) -> PairState:
        try:
            tower, images = self.s_tower()
            res = tower(self.gamma0.constant_term())

            def emb(e, _tower=tower, _images=images):
                return embed(e, _tower, _images)
        except ReducibleError:
            res, emb = None, None
        return PairState(self.r_seq, self.t, self.x_value, self.y_value, (("gamma0", 1),),
                         res, emb)

    def ramification_index(self) -> int:
        vals = self.r_seq.values
        big = SubgroupView((self.x_value, self.y_value) + tuple(vals[2:]))
        return SubgroupView(vals).index_in(big)

    def value_stable(self) -> bool:
        return self.ramification_index() == self.t

    def s_tower(self):
        """Residue tower of ``S``: the roots of ``R`` adjoined to ``k_S``.

        Returns ``(top node, images)`` where ``images`` maps the generator
        names of the ``R`` tower to the corresponding generators over
        ``k_S``.  Raises :class:`ReducibleError` (with the step recorded in
        the message) when a minimal polynomial factors over ``k_S``.
        """
        if "tower" in self._cache:
            cached = self._cache["tower"]
            if isinstance(cached, Exception):
                raise cached
            return cached
        node = self.s_ring.field
        images: dict = {}
        try:
            for st in self.r_seq.steps:
                coeffs = [embed(c, node, images) for c in st.minpoly]
                name = st.field.name
                try:
                    node = tower_extend(node, coeffs, name)
                except ReducibleError as exc:
                    raise ReducibleError(
                        f"minimal polynomial of step {st.index} ({st.minpoly_str()}) "
                        f"factors over the residue field of S") from exc
                images[name] = node.gen
        except ReducibleError as exc:
            self._cache["tower"] = exc
            raise
        self._cache["tower"] = (node, images)
        return node, images


def make_pair(r_seq: KeySequence, t: int, gamma0="1", *, s_field: FieldTower | None = None,
              s_names: Sequence[str] = ("x", "y"), x_value=None, y_value=None) -> MonomialPair:
    """Build and validate a monomial pair.

    ``x_value``/``y_value`` default to ``nu(u)/t`` and ``nu(v)``; when given
    they must agree with those.
    """
    if not isinstance(t, int) or t < 1:
        raise ValueError("the exponent t must be a positive integer")
    k_r = r_seq.ring.field
    k_s = s_field or k_r
    if not k_r.is_ancestor_of(k_s):
        raise ValueError("the residue field of S must extend that of R")
    s_ring = LocalRingModel(k_s, tuple(s_names))
    g = s_ring.poly(gamma0)
    if not g.is_unit():
        raise ValueError("gamma0 must be a unit of S")
    b0, b1 = r_seq.values[0], r_seq.values[1]
    xv = b0 / t if x_value is None else Fraction(x_value)
    yv = b1 if y_value is None else Fraction(y_value)
    if xv * t != b0 or yv != b1:
        raise ValueError("not a monomial pair: need nu(u) = t*nu(x) and nu(v) = nu(y)")
    return MonomialPair(r_seq, s_ring, t, g, xv, yv)


# -- stability ---------------------------------------------------------------------

@dataclass(frozen=True)
class StabilityCertificate:
    """Stability evidence at truncation depth ``depth``.

    ``stable`` is ``"yes"``, ``"no"`` or ``"undetermined"``.
    """

    e: int
    t: int
    f: int | None
    residue_degree: int
    stable: str
    witnesses: tuple
    depth: int
    iterations: tuple = ()

    def summary(self) -> str:
        return (f"e = {self.e}, t = {self.t}, f = {self.f}, [k_S:k_R] = {self.residue_degree}, "
                f"stable = {self.stable} (depth {self.depth})")


def check_stability(pair: MonomialPair, iterations: int = 3) -> StabilityCertificate:
    seq = pair.r_seq
    depth = seq.depth
    e = pair.ramification_index()
    t = pair.t
    k_r, k_s = seq.ring.field, pair.s_ring.field
    rdeg = k_s.degree_over(k_r)
    witnesses = []
    if t % e:  # pragma: no cover - e always divides t for this shape
        witnesses.append(f"e = {e} does not divide t = {t}")
    gamma_r = SubgroupView(seq.values)
    if e != t:
        for j in range(1, t):
            if pair.x_value * j in gamma_r:
                witnesses.append(f"{j}*nu(x) = {pair.x_value * j} lies in the value group of R")
                break
    f = None
    undetermined = False
    try:
        top, _ = pair.s_tower()
        f = top.degree // seq.tower.degree
    except ReducibleError as exc:
        witnesses.append(str(exc))
    except NotImplementedError as exc:
        witnesses.append(f"irreducibility check out of budget: {exc}")
        undetermined = True
    iter_data: tuple = ()
    if e == t and f is not None and f == rdeg:
        steps = min(iterations, depth)
        try:
            it = iterate_transforms(pair, steps)
            iter_data = tuple((s.t1, s.m) for s in it)
            for s in it:
                if not s.stable or not s.identity_holds:
                    witnesses.append(f"transform {s.level + 1}: t_1 = {s.t1}, m = {s.m}")
        except Exception as exc:  # noqa: BLE001 - any failure here is evidence, not a crash
            witnesses.append(f"transform iteration failed: {exc}")
    if undetermined:
        verdict = "undetermined"
    elif e == t and f == rdeg and not witnesses:
        verdict = "yes"
    else:
        verdict = "no"
    if verdict == "yes" and depth < 2:
        verdict = "undetermined"
        witnesses.append("depth 1 only fixes the first two values")
    return StabilityCertificate(e, t, f, rdeg, verdict, tuple(witnesses), depth, iter_data)


# -- transfer ---------------------------------------------------------------------

def transfer_sequence(pair: MonomialPair) -> KeySequence:
    """Key sequence of ``S`` obtained from that of ``R`` by the transfer formulas.

    Every transferred step is re-verified in ``S``; a failure raises
    :class:`TransferError` ("transfer contradiction").
    """
    if "transfer" in pair._cache:
        return pair._cache["transfer"]
    seq = pair.r_seq
    ring = pair.s_ring
    t, g0 = pair.t, pair.gamma0
    try:
        _, images = pair.s_tower()
    except ReducibleError as exc:
        raise TransferError(f"transfer contradiction: {exc}") from exc
    node = ring.field
    keys = [ring.x, ring.y] + [pair.to_s(p) for p in seq.keys[2:]]
    values = [pair.x_value, pair.y_value] + list(seq.values[2:])
    steps: list[KeyStep] = []
    for st in seq.steps:
        i = st.index
        before = node
        node = _node_named(pair, st.field.name)
        coeffs = tuple(embed(c, before, images) for c in st.minpoly)
        omega = (t * st.omega[0],) + tuple(st.omega[1:])
        tau = g0 ** st.omega[0] * pair.to_s(st.tau)
        companion = pair.to_s(st.companion)
        terms = tuple(RelationTerm(tm.t, (t * tm.exponents[0],) + tuple(tm.exponents[1:]),
                                   pair.to_s(tm.unit) * g0 ** tm.exponents[0],
                                   tm.scalar, tm.lattice) for tm in st.terms)
        alpha = embed(st.alpha, node, images)
        new = KeyStep(i, keys[i], values[i], st.nbar, omega, tau, companion, alpha, coeffs,
                      before, node, terms, keys[i + 1], values[i + 1], st.spec)
        steps.append(new)
        _reverify(new, steps, keys, values, ring)
    out = KeySequence(ring, tuple(keys), tuple(values), tuple(steps), node)
    pair._cache["transfer"] = out
    return out


def _node_named(pair: MonomialPair, name: str) -> FieldTower:
    top, _ = pair.s_tower()
    for n in top.ancestors():
        if n.name == name:
            return n
    raise TransferError(f"transfer contradiction: no residue node named {name}")  # pragma: no cover


def _reverify(step: KeyStep, steps, keys, values, ring):
    i = step.index
    bad = []
    nb = SubgroupView(values[:i]).index_in(SubgroupView(values[:i + 1]))
    if nb != step.nbar:
        bad.append(f"nbar_{i}(S) = {nb} differs from nbar_{i}(R) = {step.nbar}")
    om = _companion_exponents(values[:i + 1], nb, [s.nbar for s in steps[:-1]])
    if om != step.omega:
        bad.append(f"omega({i}) in S is {om}, transfer gives {step.omega}")
    comp = step.tau
    for k, w in enumerate(step.omega):
        if w:
            comp = comp * keys[k] ** w
    if comp != step.companion:
        bad.append(f"U_{i}(S) is not the transferred companion monomial")
    rhs = keys[i] ** step.n
    for tm in step.terms:
        mono = tm.unit
        for k, e in enumerate(tm.exponents):
            if e:
                mono = mono * keys[k] ** e
        rhs = rhs + mono * keys[i] ** (tm.t * step.nbar)
        if sum((values[k] * e for k, e in enumerate(tm.exponents)), Fraction(0)) != \
                values[i] * ((step.degree - tm.t) * step.nbar):
            bad.append(f"a recurrence term of step {i} has the wrong value in S")
    if rhs != step.next_key:
        bad.append(f"recurrence for P_{i + 1} fails in S")
    try:
        _check_monic(step.next_key, step.n * step.key.degree(1), f"P_{i + 1}(S)")
    except SequenceError as exc:
        bad.append(str(exc))
    try:
        _verify_residues(step, steps, ring.field)
    except SequenceError as exc:
        bad.append(str(exc))
    if bad:
        raise TransferError("transfer contradiction: " + "; ".join(bad))


def independent_transfer(pair: MonomialPair) -> KeySequence:
    """Run the key construction directly in ``S``, seeded with the transferred data."""
    seq = pair.r_seq
    specs = []
    for st in seq.steps:
        tau = pair.gamma0 ** st.omega[0] * pair.to_s(st.tau)
        specs.append(StepSpec(minpoly=format_univariate(st.minpoly, "z"),
                              beta_next=st.next_value, tau=tau, root_label=st.field.name))
    return build_sequence(pair.s_ring, pair.x_value, pair.y_value, specs)


def compare_sequences(a: KeySequence, b: KeySequence) -> list[str]:
    """Differences between two sequences, step data included (empty if identical)."""
    diffs = []
    if a.keys != b.keys:
        diffs.append("keys differ")
    if tuple(a.values) != tuple(b.values):
        diffs.append("values differ")
    if len(a.steps) != len(b.steps):
        return diffs + ["depths differ"]
    for sa, sb in zip(a.steps, b.steps):
        i = sa.index
        for attr in ("nbar", "omega", "tau", "companion", "minpoly", "alpha"):
            if getattr(sa, attr) != getattr(sb, attr):
                diffs.append(f"step {i}: {attr} differs")
        ta = sorted((tm.t, tm.exponents, str(tm.unit), str(tm.scalar)) for tm in sa.terms)
        tb = sorted((tm.t, tm.exponents, str(tm.unit), str(tm.scalar)) for tm in sb.terms)
        if ta != tb:
            diffs.append(f"step {i}: recurrence terms differ")
    return diffs


# -- graded ring -------------------------------------------------------------------

@dataclass(frozen=True)
class GradedPresentation:
    generators: tuple
    relation: str
    e: int
    f: int
    field: str

    @property
    def degree(self) -> int:
        return self.e * self.f

    def __str__(self):
        gens = ", ".join(f"{n} (deg {d})" for n, d in self.generators)
        return f"generators {gens}; relation {self.relation}; over {self.field}; degree e*f = {self.degree}"


@dataclass(frozen=True)
class HilbertRow:
    lam: Fraction
    dim_s: int
    dims_r: tuple
    ok: bool


@dataclass(frozen=True)
class Theorem2Report:
    verdict: str
    rows: tuple
    e: int
    f: int | None
    cosets_distinct: bool
    relation_ok: bool
    presentation: GradedPresentation | None
    certificate: StabilityCertificate
    depth: int
    bound: Fraction
    notes: tuple = ()

    @property
    def counterexamples(self) -> list[HilbertRow]:
        return [r for r in self.rows if not r.ok]


def verify_theorem2(pair: MonomialPair, bound) -> Theorem2Report:
    bound = Fraction(bound)
    cert = check_stability(pair)
    depth = pair.r_seq.depth
    if cert.stable != "yes":
        return Theorem2Report("undetermined", (), cert.e, cert.f, False, False, None, cert,
                              depth, bound, ("pair not certified stable",) + cert.witnesses)
    s_seq = transfer_sequence(pair)
    r_seq = pair.r_seq
    e = cert.e
    rows = []
    for lam in semigroup_members(s_seq.values, bound):
        dim_s = graded_piece(s_seq, lam).dim
        dims_r = tuple(graded_piece(r_seq, lam - pair.x_value * j).dim
                       if lam - pair.x_value * j >= 0 else 0 for j in range(e))
        rows.append(HilbertRow(lam, dim_s, dims_r, dim_s == sum(dims_r)))
    gamma_r = SubgroupView(r_seq.values)
    cosets = all(pair.x_value * j not in gamma_r for j in range(1, e))
    relation_ok = True
    notes = []
    try:
        form = initial_form(s_seq, pair.to_s(r_seq.keys[0]))
        expected = {(pair.t,) + (0,) * depth: pair.s_ring.field(pair.gamma0.constant_term())}
        relation_ok = form.as_dict() == expected and form.degree == r_seq.values[0] \
            and pair.x_value * e == r_seq.values[0]
    except PrecisionError:
        relation_ok = False
        notes.append("initial form of u not determined at this depth")
    gens = [("[x]", pair.x_value)] + [(f"[P{i}]", b) for i, b in enumerate(r_seq.values) if i]
    g0 = format_element(pair.gamma0.constant_term())
    pres = GradedPresentation(tuple(gens), f"Z^{e} = ({g0})^-1 * [u]", e, cert.f,
                              repr(pair.s_ring.field))
    ok = all(r.ok for r in rows) and cosets and relation_ok
    return Theorem2Report("verified" if ok else "refuted", tuple(rows), e, cert.f, cosets,
                          relation_ok, pres, cert, depth, bound, tuple(notes))


@dataclass(frozen=True)
class CorollaryReport:
    verdict: str
    generators: tuple
    expected: tuple
    stabilized: bool
    e: int
    bound: Fraction
    depth: int


def verify_corollary(pair: MonomialPair, bound) -> CorollaryReport:
    bound = Fraction(bound)
    r_vals = tuple(pair.r_seq.values)
    s_vals = (pair.x_value, pair.y_value) + r_vals[2:]
    cover = module_generators(s_vals, r_vals, bound)
    e = pair.ramification_index()
    expected = tuple(pair.x_value * j for j in range(e))
    if not cover.stabilized or e != pair.t:
        # the formula only concerns value-stable pairs
        verdict = "undetermined"
    elif tuple(cover.generators) == expected:
        verdict = "verified"
    else:
        verdict = "refuted"
    return CorollaryReport(verdict, tuple(cover.generators), expected, cover.stabilized, e,
                           bound, pair.r_seq.depth)


# -- the commuting square with quadratic transforms --------------------------------

def _laurent_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = (e1[0] + e2[0], e1[1] + e2[1])
            v = out.get(e)
            out[e] = c1 * c2 if v is None else v + c1 * c2
    return {e: c for e, c in out.items() if c}


def _laurent_pow(a: dict, k: int, one) -> dict:
    out = {(0, 0): one}
    for _ in range(k):
        out = _laurent_mul(out, a)
    return out


def transfer_square(pair: MonomialPair) -> dict:
    """Check that transforming the transferred sequence matches transferring the transform.

    Path one transforms the key sequence of ``S``.  Path two transforms ``R``
    and rewrites ``Q_j(R)`` through ``u1 = gamma1 * x1^t1``, ``v1 = y1 *
    gamma0'^(-omega)``.  The two must agree as Laurent polynomials after
    clearing the powers of ``gamma0'``; the step data must agree exactly.
    """
    s_seq = transfer_sequence(pair)
    ts = quadratic_transform(s_seq, names=("x1", "y1"))
    tr = quadratic_transform(pair.r_seq, names=("u1", "v1"))
    nR, wR, aR, bR = tr.nbar, tr.omega, tr.a, tr.b
    nS, wS, aS, bS = ts.nbar, ts.omega, ts.a, ts.b
    t = pair.t
    result = {
        "nbar": nS == nR,
        "omega": wS == t * wR,
        "values": tuple(ts.values[1:]) == tuple(tr.values[1:])
        and ts.values[0] * t == tr.values[0],
        "nbars": ts.nbars == tr.nbars,
        "degrees": ts.degrees == tr.degrees,
    }
    field = pair.s_ring.field
    one = field.one
    # gamma0 in the transformed coordinates of S
    g = {(nS * i + wS * j, aS * i + bS * j): c for (i, j), c in pair.gamma0.terms.items()}
    e_exp = t * bR * aS - aR * bS
    polys_ok = True
    for j in range(1, len(tr.keys)):
        qr, qs = tr.keys[j], ts.keys[j]
        qdeg = qr.degree(1)
        deg = 1
        for k in range(j):
            deg *= pair.r_seq.steps[k].n
        # rhs = gamma0'^(omega*qdeg) * Q_j(R)(gamma1 x1^t, y1/gamma0'^omega) * gamma1^(omega*deg)
        rhs: dict = {}
        for (p, q), c in qr.terms.items():
            term = {(t * p, e_exp * p + q): field(c)}
            term = _laurent_mul(term, _laurent_pow(g, bR * p + wR * (qdeg - q), one))
            for ex, cc in term.items():
                v = rhs.get(ex)
                rhs[ex] = cc if v is None else v + cc
        rhs = {ex: c for ex, c in rhs.items() if c}
        rhs = _laurent_mul(rhs, _laurent_pow(g, bR * wR * deg, one))
        rhs = _laurent_mul(rhs, {(0, e_exp * wR * deg): one})
        lhs = _laurent_mul({ex: field(c) for ex, c in qs.terms.items()},
                           _laurent_pow(g, wR * qdeg, one))
        if lhs != rhs:
            polys_ok = False
    result["keys"] = polys_ok
    return result
