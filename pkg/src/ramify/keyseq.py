"""Key polynomial sequences of a valuation on a two-dimensional regular local ring.

The ring is modelled as ``k[u, v]`` localized at the origin, where ``k`` is a
:class:`~ramify.algebra.fields.FieldTower`.  A :class:`KeySequence` of depth
``N`` holds ``P_0 = u, P_1 = v, ..., P_N`` and their values.  Each key
``P_{i+1}`` is produced from the residue data of step ``i``: the minimal
polynomial of ``alpha_i`` over the residue field built so far, and the value
``beta_{i+1}``.

Evaluation uses the ``(P_1, ..., P_N)``-adic expansion.  Its minimum is the
value of the truncated valuation ``nu_N``, which agrees with ``nu`` unless a
cancellation among terms of minimal value is possible, in which case the
result is flagged as a lower bound.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from .algebra.fields import (FieldTower, ReducibleError, descend, flatten, format_element,
                             format_univariate, is_irreducible, solve_linear, tower_extend)
from .algebra.poly import NotDivisibleError, Poly, parse_poly, parse_univariate
from .algebra.values import SubgroupView, Value, as_value, parse_rational, zero_like

log = logging.getLogger(__name__)

__all__ = [
    "Exactness",
    "LocalRingModel",
    "StepSpec",
    "RelationTerm",
    "KeyStep",
    "KeySequence",
    "SequenceError",
    "PrecisionError",
    "ResourceLimitError",
    "Budget",
    "Expansion",
    "ExpansionTerm",
    "NuValue",
    "InitialForm",
    "GradedPiece",
    "build_sequence",
    "expand",
    "nu_eval",
    "initial_form",
    "graded_piece",
    "bounded_tuples",
]


class SequenceError(ValueError):
    """Invalid step data handed to :func:`build_sequence`."""


class PrecisionError(ValueError):
    """The truncation depth cannot certify the requested quantity."""


class ResourceLimitError(RuntimeError):
    pass


class Exactness(enum.Enum):
    EXACT = "EXACT"
    LOWER_BOUND = "LOWER-BOUND"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Budget:
    """Guards against runaway expansions."""

    max_degree: int = 4096
    max_bits: int = 200_000

    def check(self, f: Poly, what: str = "polynomial"):
        if f.total_degree() > self.max_degree:
            raise ResourceLimitError(f"{what} exceeds the degree budget {self.max_degree}")
        if f.max_coefficient_bits() > self.max_bits:
            raise ResourceLimitError(f"{what} exceeds the coefficient budget of {self.max_bits} bits")


@dataclass(frozen=True)
class LocalRingModel:
    """``k[u, v]`` localized at the origin, ``k`` a field tower."""

    field: FieldTower
    names: tuple = ("u", "v")

    def __post_init__(self):
        if len(self.names) != 2 or self.names[0] == self.names[1]:
            raise ValueError("a two-dimensional ring needs two distinct parameter names")
        clash = set(self.names) & set(self.field.names())
        if clash:
            raise ValueError(f"parameter names {sorted(clash)} collide with field generators")

    def poly(self, f) -> Poly:
        if isinstance(f, Poly):
            if f.names != self.names:
                raise ValueError(f"polynomial in {f.names}, expected {self.names}")
            if f.field != self.field:
                return f.change_field(self.field)
            return f
        return parse_poly(f, self.names, self.field)

    @property
    def x(self) -> Poly:
        return Poly.var(0, self.field, self.names)

    @property
    def y(self) -> Poly:
        return Poly.var(1, self.field, self.names)

    def one(self) -> Poly:
        return Poly.constant(1, self.field, self.names)

    def residue(self, unit: Poly):
        c = self.poly(unit).constant_term()
        if not c:
            raise ValueError("not a unit of the local ring")
        return c


@dataclass(frozen=True)
class StepSpec:
    """Input data for one step of the construction.

    ``minpoly`` is the minimal polynomial of ``alpha_i`` in the variable
    ``z``, either as a string in the names of the residue tower or as a
    coefficient sequence (low degree first).  ``tau`` is an optional unit
    multiplying the companion monomial.  When ``alpha`` is given the root
    already lives in the node ``field`` of a known tower, and no new node is
    created.
    """

    minpoly: object
    beta_next: object
    tau: object = None
    root_label: str | None = None
    alpha: object = None
    field: FieldTower | None = None


@dataclass(frozen=True)
class RelationTerm:
    """One summand ``unit * P_0^j_0 ... P_{i-1}^j_{i-1} * P_i^(t*nbar)`` of the recurrence."""

    t: int
    exponents: tuple
    unit: Poly
    scalar: object
    lattice: tuple


@dataclass(frozen=True)
class KeyStep:
    """Everything derived at step ``i`` (it turns ``P_i`` into ``P_{i+1}``)."""

    index: int
    key: Poly
    value: object
    nbar: int
    omega: tuple
    tau: Poly
    companion: Poly
    alpha: object
    minpoly: tuple
    field_before: FieldTower
    field: FieldTower
    terms: tuple
    next_key: Poly
    next_value: object
    spec: StepSpec = dc_field(repr=False, compare=False, default=None)

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def n(self) -> int:
        return self.nbar * self.degree

    @property
    def tau_residue(self):
        return self.tau.constant_term()

    def minpoly_str(self, var: str = "z") -> str:
        return format_univariate(self.minpoly, var)


def _int_quotient(rem, b):
    """``rem / b`` when it is a nonnegative integer, else None."""
    if isinstance(b, Value):
        i = next(k for k, c in enumerate(b.coords) if c)
        q = rem.coords[i] / b.coords[i]
        if q.denominator != 1 or q < 0 or rem != b * q:
            return None
        return int(q)
    q = Fraction(rem) / b
    if q.denominator != 1 or q < 0:
        return None
    return int(q)


def bounded_tuples(values: Sequence, bounds: Sequence[int], lam,
                   unbounded_last: bool = False) -> Iterator[tuple]:
    """Exponent tuples ``(j_0, ..., j_m)`` of value ``lam``.

    ``j_k < bounds[k-1]`` for ``k >= 1``; ``j_0`` is free, and so is the last
    exponent when ``unbounded_last`` is set.  All values must be positive.
    """
    m = len(values) - 1
    zero = zero_like(values[0])

    def rec(k, rem, tail):
        if k == 0:
            q = _int_quotient(rem, values[0])
            if q is not None:
                yield (q,) + tail
            return
        b = values[k]
        j = 0
        limit = None if (unbounded_last and k == m) else bounds[k - 1]
        while limit is None or j < limit:
            r = rem - b * j
            if r < zero:
                break
            yield from rec(k - 1, r, (j,) + tail)
            j += 1

    yield from rec(m, lam, ())


def _companion_exponents(values, nbar, nbars):
    """Bounded exponents ``omega`` with ``sum omega_k beta_k = nbar * beta_i``."""
    i = len(values) - 1
    r = values[i] * nbar
    omega = [0] * i
    for k in range(i - 1, 0, -1):
        sub = SubgroupView(values[:k])
        for w in range(nbars[k - 1]):
            if (r - values[k] * w) in sub:
                omega[k] = w
                break
        else:
            return None
        r = r - values[k] * omega[k]
    q = _int_quotient(r, values[0])
    if q is None:
        return None
    omega[0] = q
    return tuple(omega)


def _lattice_decomposition(m: Sequence[int], steps: Sequence[KeyStep]):
    """Write a value-zero exponent vector as ``sum c_k (nbar_k e_k - omega(k))``.

    ``m`` ranges over ``P_0 .. P_r`` with ``r <= len(steps)``.  Returns the
    list ``c`` (``c[0]`` unused) or raises ``ValueError``.
    """
    m = list(m)
    c = [0] * len(m)
    for k in range(len(m) - 1, 0, -1):
        if not m[k]:
            continue
        if k > len(steps):
            raise ValueError("residue involves the last key, whose residue data is unknown")
        st = steps[k - 1]
        if m[k] % st.nbar:
            raise ValueError("exponent vector does not have value zero")
        c[k] = m[k] // st.nbar
        m[k] = 0
        for j, w in enumerate(st.omega):
            m[j] += c[k] * w
    if m[0]:
        raise ValueError("exponent vector does not have value zero")
    return c


def _residue_from_lattice(c, steps, tower, with_tau=True):
    res = tower.one
    for k in range(1, len(c)):
        if c[k]:
            st = steps[k - 1]
            a = st.alpha * st.tau_residue if with_tau else st.alpha
            res = res * tower(a) ** c[k]
    return res


def _check_monic(p: Poly, deg: int, what: str):
    if p.degree(1) != deg:
        raise SequenceError(f"{what} is not monic in the second parameter")
    lead = {e: c for e, c in p.terms.items() if e[1] == deg}
    if lead != {(0, deg): p.field.one}:
        raise SequenceError(f"{what} is not monic in the second parameter")


def _build_step(ring: LocalRingModel, keys, values, built, field, i, spec: StepSpec,
                power_cache):
    beta_i = values[i]
    beta_next = parse_rational(spec.beta_next)
    nbar = SubgroupView(values[:i]).index_in(SubgroupView(values[:i + 1]))
    nbars = [st.nbar for st in built]
    omega = _companion_exponents(values[:i + 1], nbar, nbars)
    if omega is None:
        raise SequenceError(f"no companion monomial U_{i}")
    tau = ring.one() if spec.tau is None else ring.poly(spec.tau)
    if not tau.is_unit():
        raise SequenceError(f"tau_{i} is not a unit")

    def kpow(k, e):
        key = (k, e)
        if key not in power_cache:
            power_cache[key] = keys[k] ** e
        return power_cache[key]

    companion = tau
    for k, w in enumerate(omega):
        if w:
            companion = companion * kpow(k, w)

    # residue field step
    if spec.alpha is None:
        coeffs = parse_univariate(spec.minpoly, field, "z")
        name = spec.root_label or f"a{i}"
        try:
            new_field = tower_extend(field, coeffs, name)
        except ReducibleError as exc:
            raise SequenceError(f"reducible minimal polynomial at step {i}") from exc
        except ValueError as exc:
            raise SequenceError(f"bad minimal polynomial at step {i}: {exc}") from exc
        alpha = new_field.gen
    else:
        new_field = spec.field
        coeffs = [field(c) for c in spec.minpoly]
        if new_field is None or not field.is_ancestor_of(new_field):
            raise SequenceError("the node of a given root must extend the current residue field")
        if not coeffs or coeffs[-1] != field.one:
            raise SequenceError(f"minimal polynomial at step {i} must be monic")
        if new_field.degree_over(field) != len(coeffs) - 1:
            raise SequenceError(f"minimal polynomial at step {i} does not match the field degree")
        alpha = new_field(spec.alpha)
        val = new_field.zero
        for c in reversed(coeffs):
            val = val * alpha + c
        if val:
            raise SequenceError(f"given root does not satisfy its minimal polynomial at step {i}")
        if not is_irreducible(coeffs, field):
            raise SequenceError(f"reducible minimal polynomial at step {i}")
    coeffs = tuple(coeffs)
    d = len(coeffs) - 1
    if not coeffs[0]:
        raise SequenceError(f"alpha_{i} must be nonzero")
    n = nbar * d
    if not beta_next > beta_i * n:
        raise SequenceError(
            f"inadmissible value jump: beta_{i + 1} = {beta_next} must exceed "
            f"n_{i} * beta_{i} = {beta_i * n}")

    base = ring.field
    dim = field.degree_over(base)
    bounds = [st.n for st in built]
    terms = []
    for t in range(d):
        b = coeffs[t]
        if not b:
            continue
        lam = beta_i * ((d - t) * nbar)
        monos = list(bounded_tuples(values[:i], bounds, lam))
        if len(monos) != dim:
            raise SequenceError(f"inconsistent residue data at step {i} (monomial count)")
        lats, cols = [], []
        for j in monos:
            m = [jk - (d - t) * w for jk, w in zip(j, omega)]
            c = _lattice_decomposition(m, built)
            lats.append(tuple(c))
            cols.append(flatten(_residue_from_lattice(c, built, field, with_tau=False),
                                base, field))
        rows = [[cols[s][r] for s in range(dim)] for r in range(dim)]
        try:
            sol = solve_linear(rows, flatten(b, base, field))
        except ValueError:
            sol = None
        if sol is None:
            raise SequenceError(f"inconsistent residue data at step {i}")
        for j, c, cs in zip(monos, lats, sol):
            if not cs:
                continue
            num, den = tau ** (d - t), ring.one()
            for k in range(1, i):
                if c[k] > 0:
                    den = den * built[k - 1].tau ** c[k]
                elif c[k] < 0:
                    num = num * built[k - 1].tau ** (-c[k])
            try:
                unit = num.exact_div(den) * cs
            except NotDivisibleError as exc:
                raise SequenceError(f"tau data at step {i} does not divide exactly") from exc
            terms.append(RelationTerm(t, tuple(j), unit, base(cs), c))

    key = keys[i]
    nxt = kpow(i, n)
    for term in terms:
        mono = term.unit
        for k, e in enumerate(term.exponents):
            if e:
                mono = mono * kpow(k, e)
        if term.t:
            mono = mono * kpow(i, term.t * nbar)
        nxt = nxt + mono
    _check_monic(nxt, n * key.degree(1), f"P_{i + 1}")

    step = KeyStep(i, key, beta_i, nbar, omega, tau, companion, alpha, coeffs, field,
                   new_field, tuple(terms), nxt, beta_next, spec)
    _verify_residues(step, built + [step], base)
    return step


def _verify_residues(step: KeyStep, steps, base):
    """Residue identity of the recurrence, recomputed from the units."""
    i, d = step.index, step.degree
    field = step.field_before
    for t in range(d):
        acc = field.zero
        for term in step.terms:
            if term.t != t:
                continue
            m = [jk - (d - t) * w for jk, w in zip(term.exponents, step.omega)]
            c = _lattice_decomposition(m, steps[:i - 1])
            r = _residue_from_lattice(c, steps[:i - 1], field)
            acc = acc + r * term.unit.constant_term() / step.tau_residue ** (d - t)
        if acc != step.minpoly[t]:
            raise SequenceError(f"inconsistent residue data at step {i} (coefficient {t})")


@dataclass(frozen=True)
class KeySequence:
    """Keys ``P_0 .. P_N`` with values and per-step data."""

    ring: LocalRingModel
    keys: tuple
    values: tuple
    steps: tuple
    tower: FieldTower

    @property
    def depth(self) -> int:
        return len(self.keys) - 1

    @property
    def bounds(self) -> tuple:
        """``n_1, ..., n_{N-1}``."""
        return tuple(st.n for st in self.steps)

    @property
    def nbars(self) -> tuple:
        return tuple(st.nbar for st in self.steps)

    @property
    def degrees(self) -> tuple:
        return tuple(st.degree for st in self.steps)

    @property
    def complete(self) -> bool:
        """True when the monomial valuation of the first two keys is the whole story.

        This happens at depth one when the two values are rationally
        independent; no later key can exist.
        """
        if self.depth != 1 or not isinstance(self.values[0], Value):
            return False
        sub = SubgroupView(self.values)
        return sub.lattice_rank == 2

    def step(self, i: int) -> KeyStep:
        if not 1 <= i <= len(self.steps):
            raise IndexError(f"no step {i} in a sequence of depth {self.depth}")
        return self.steps[i - 1]

    def truncate(self, depth: int) -> "KeySequence":
        if not 1 <= depth <= self.depth:
            raise ValueError(f"depth must be between 1 and {self.depth}")
        steps = self.steps[:depth - 1]
        tower = steps[-1].field if steps else self.ring.field
        return KeySequence(self.ring, self.keys[:depth + 1], self.values[:depth + 1],
                           steps, tower)

    def value_of(self, exps: Sequence[int]):
        acc = zero_like(self.values[0])
        for e, b in zip(exps, self.values):
            if e:
                acc = acc + b * e
        return acc

    def residue_of_exponents(self, m: Sequence[int]):
        """Residue in the top tower of ``prod P_k^m_k`` (value zero, ``m_k`` may be negative)."""
        c = _lattice_decomposition(m, self.steps)
        return _residue_from_lattice(c, self.steps, self.tower)

    def monomial(self, exps: Sequence[int]) -> Poly:
        out = self.ring.one()
        for k, e in enumerate(exps):
            if e:
                out = out * self.keys[k] ** e
        return out

    def table(self) -> list[dict]:
        """One row per key, as plain strings (used for reports)."""
        rows = []
        for i, (p, b) in enumerate(zip(self.keys, self.values)):
            row = {"i": i, "beta": str(b), "key": str(p), "nbar": "", "omega": "",
                   "minpoly": "", "d": "", "n": ""}
            if 1 <= i <= len(self.steps):
                st = self.steps[i - 1]
                row.update(nbar=str(st.nbar), omega=" ".join(map(str, st.omega)),
                           minpoly=st.minpoly_str(), d=str(st.degree), n=str(st.n))
            rows.append(row)
        return rows


def build_sequence(ring: LocalRingModel, beta0, beta1, steps: Sequence[StepSpec] = ()) -> KeySequence:
    """Construct keys ``P_0 .. P_N`` with ``N = len(steps) + 1``.

    Raises :class:`SequenceError` on inadmissible data.
    """
    b0, b1 = as_value(beta0), as_value(beta1)
    zero = zero_like(b0)
    if not (b0 > zero and b1 > zero):
        raise SequenceError("values of the parameters must be positive")
    if steps and (isinstance(b0, Value) or isinstance(b1, Value)):
        raise SequenceError("steps beyond the first two keys need rational values")
    keys = [ring.x, ring.y]
    values = [b0, b1]
    built: list[KeyStep] = []
    field = ring.field
    cache: dict = {}
    for i, spec in enumerate(steps, start=1):
        st = _build_step(ring, keys, values, built, field, i, spec, cache)
        built.append(st)
        keys.append(st.next_key)
        values.append(st.next_value)
        field = st.field
        log.debug("built P_%d of value %s", i + 1, st.next_value)
    return KeySequence(ring, tuple(keys), tuple(values), tuple(built), field)


# -- expansion and evaluation ------------------------------------------------------

class ExpansionTerm(NamedTuple):
    coefficient: object
    exponents: tuple
    value: object


@dataclass(frozen=True)
class Expansion:
    """``f = sum c * P_0^i_0 ... P_N^i_N`` with constant ``c`` and bounded exponents."""

    sequence: KeySequence
    poly: Poly
    terms: tuple

    def reassemble(self) -> Poly:
        seq = self.sequence
        cache: dict = {}
        out = Poly.zero(seq.ring.field, seq.ring.names)
        for c, exps, _ in self.terms:
            mono = Poly.constant(c, seq.ring.field, seq.ring.names)
            for k, e in enumerate(exps):
                if e:
                    if (k, e) not in cache:
                        cache[(k, e)] = seq.keys[k] ** e
                    mono = mono * cache[(k, e)]
            out = out + mono
        return out

    @property
    def min_value(self):
        return min(t.value for t in self.terms)

    def minimal_terms(self) -> list[ExpansionTerm]:
        m = self.min_value
        return [t for t in self.terms if t.value == m]


def _adic_digits(f: Poly, key: Poly) -> list[Poly]:
    return f.adic_digits(key, 1)


def _value_function(seq: KeySequence):
    if isinstance(seq.values[0], Value):
        return seq.value_of
    den = 1
    for b in seq.values:
        den = den * b.denominator // math.gcd(den, b.denominator)
    scaled = [int(b * den) for b in seq.values]

    def value_of(exps):
        return Fraction(sum(e * s for e, s in zip(exps, scaled)), den)
    return value_of


def expand(seq: KeySequence, f, budget: Budget | None = None) -> Expansion:
    """Bounded adic expansion of ``f`` (``f != 0``)."""
    f = seq.ring.poly(f)
    if f.is_zero():
        raise ValueError("valuation of zero undefined")
    if budget is not None:
        budget.check(f, "input polynomial")
    N = seq.depth
    out = []
    value_of = _value_function(seq)

    def rec(g: Poly, level: int, tail: tuple):
        if g.is_zero():
            return
        if level == 1:
            for (i, j), c in g.terms.items():
                exps = (i, j) + tail
                out.append(ExpansionTerm(c, exps, value_of(exps)))
            return
        key = seq.keys[level]
        if g.degree(1) < key.degree(1):
            rec(g, level - 1, (0,) + tail)
            return
        for e, digit in enumerate(_adic_digits(g, key)):
            rec(digit, level - 1, (e,) + tail)

    rec(f, N, ())
    terms = tuple(sorted(out, key=lambda t: t.exponents))
    return Expansion(seq, f, terms)


class NuValue(NamedTuple):
    value: object
    flag: Exactness


def _flag(seq: KeySequence, minimal: list[ExpansionTerm]) -> Exactness:
    if seq.complete:
        return Exactness.EXACT
    N = seq.depth
    tops = {t.exponents[N] for t in minimal}
    if len(tops) >= 2:
        # the top key's residue is unknown, so distinct powers may cancel
        return Exactness.LOWER_BOUND
    if all(t.exponents[N] > 0 and not any(t.exponents[:N]) for t in minimal):
        return Exactness.LOWER_BOUND
    return Exactness.EXACT


def nu_eval(seq: KeySequence, f, budget: Budget | None = None) -> NuValue:
    """Value of ``f`` under the truncated valuation, with an exactness flag."""
    ex = expand(seq, f, budget)
    minimal = ex.minimal_terms()
    return NuValue(ex.min_value, _flag(seq, minimal))


@dataclass(frozen=True)
class InitialForm:
    """Image of ``f`` in the graded piece of degree ``degree``.

    ``terms`` maps bounded exponent tuples to coefficients in the residue
    field of the ring.
    """

    degree: object
    terms: tuple

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __str__(self):
        parts = []
        for exps, c in self.terms:
            mono = "*".join(f"[P{k}]" if e == 1 else f"[P{k}]^{e}"
                            for k, e in enumerate(exps) if e) or "1"
            cs = format_element(c)
            parts.append(mono if cs == "1" else f"({cs})*{mono}")
        return " + ".join(parts) if parts else "0"


def initial_form(seq: KeySequence, f, budget: Budget | None = None) -> InitialForm:
    ex = expand(seq, f, budget)
    minimal = ex.minimal_terms()
    if _flag(seq, minimal) is not Exactness.EXACT:
        raise PrecisionError("initial form not determined at this truncation")
    return InitialForm(ex.min_value, tuple((t.exponents, t.coefficient) for t in minimal))


@dataclass(frozen=True)
class GradedPiece:
    """Basis of the degree ``degree`` piece of the associated graded ring.

    The basis is given by bounded exponent tuples over the keys; it is a
    vector space over the residue field of the ring.
    """

    degree: object
    basis: tuple
    field: FieldTower

    @property
    def dim(self) -> int:
        return len(self.basis)


def graded_piece(seq: KeySequence, lam) -> GradedPiece:
    lam = as_value(lam)
    if lam < zero_like(seq.values[0]):
        return GradedPiece(lam, (), seq.ring.field)
    basis = tuple(sorted(bounded_tuples(seq.values, seq.bounds, lam, unbounded_last=True)))
    return GradedPiece(lam, basis, seq.ring.field)
