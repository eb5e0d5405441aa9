"""Monomial valuations with rationally independent values and monomial extensions.

Here ``R = k[x_1..x_n]`` (localized at the origin) carries the valuation
``nu(x^i) = sum i_k nu(x_k)`` where the ``nu(x_k)`` are a Z-basis of the
value group.  Two exact orders are supported: lexicographic of rank ``n``
and the rank one order ``p + q*sqrt(d)`` for ``n = 2``.

A monomial extension ``R -> S = k_S[y_1..y_n]`` is
``x_i = delta_i * prod_j y_j^a_ij`` with ``det A != 0`` and units
``delta_i``.  Both graded rings are polynomial rings over the residue
fields, ``e = |det A|`` and the degree of the extension is ``e*f``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra.fields import FieldTower, format_element
from .algebra.poly import Poly
from .algebra.values import (LexOrder, QuadraticWeightOrder, SubgroupView, Value, as_value,
                             coordinates, module_generators, semigroup_members, zero_like)

__all__ = [
    "MonomialValuation",
    "MonomialExtension",
    "monomial_nu",
    "leading_monomial",
    "integer_independent",
    "Prop1Report",
    "verify_prop1",
    "monomial_count",
]


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def integer_independent(values: Sequence) -> bool:
    """True when the values satisfy no nontrivial integer relation.

    For both supported orders the coordinates are rationally independent
    exactly when the values are (``1`` and ``sqrt(d)`` are independent).
    """
    vecs = [list(coordinates(as_value(v))) for v in values]
    return _rank(vecs) == len(vecs)


@dataclass(frozen=True)
class MonomialValuation:
    values: tuple
    names: tuple

    def __post_init__(self):
        vals = tuple(as_value(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "names", tuple(self.names))
        if len(vals) != len(self.names):
            raise ValueError("one value per parameter is required")
        orders = {v.order for v in vals if isinstance(v, Value)}
        if len(orders) > 1 or (orders and len(vals) != next(iter(orders)).rank):
            raise ValueError("values must lie in one ordered group of rank n")
        if not integer_independent(vals):
            raise ValueError("values are not Z-linearly independent")
        for v in vals:
            if isinstance(v, Value) and isinstance(v.order, LexOrder):
                if any(c < 0 for c in v.coords):
                    raise ValueError("lexicographic values need nonnegative coordinates")
            if not v > zero_like(v):
                raise ValueError("values of parameters must be positive")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def order(self):
        return self.values[0].order if isinstance(self.values[0], Value) else None

    @classmethod
    def lex(cls, n: int, names=None):
        order = LexOrder(n)
        vals = [Value([1 if j == i else 0 for j in range(n)], order) for i in range(n)]
        return cls(tuple(vals), tuple(names or (f"x{i + 1}" for i in range(n))))

    @classmethod
    def quadratic(cls, d: int, coords=((1, 0), (0, 1)), names=("x1", "x2")):
        order = QuadraticWeightOrder(d)
        return cls(tuple(Value(c, order) for c in coords), tuple(names))

    def monomial_value(self, exps: Sequence[int]):
        total = zero_like(self.values[0])
        for e, v in zip(exps, self.values):
            if e:
                total = total + v * e
        return total

    def ring(self, field: FieldTower):
        return Poly.zero(field, self.names)


def leading_monomial(V: MonomialValuation, f: Poly):
    """``(exponents, coefficient, value)`` of the monomial of least value."""
    if f.is_zero():
        raise ValueError("the valuation of 0 is not defined")
    best = None
    for exps, c in f.terms.items():
        val = V.monomial_value(exps)
        if best is None or val < best[2]:
            best = (exps, c, val)
        elif val == best[2]:  # pragma: no cover - excluded by independence
            raise ArithmeticError("two monomials share a value")
    return best


def monomial_nu(V: MonomialValuation, f) -> object:
    """``nu(f)``: minimum of the monomial values over the support of ``f``."""
    if not isinstance(f, Poly):
        raise TypeError("expected a Poly")
    if tuple(f.names) != V.names:
        raise ValueError("polynomial variables do not match the valuation")
    return leading_monomial(V, f)[2]


def monomial_count(V: MonomialValuation, lam, box: Sequence[int]) -> int:
    """Number of monomials with exponents inside ``box`` whose value is ``lam``."""
    lam = as_value(lam)
    return sum(1 for exps in product(*(range(b + 1) for b in box))
               if V.monomial_value(exps) == lam)


def _exponent_box(V: MonomialValuation, bound) -> list[int]:
    box = []
    for v in V.values:
        k = 0
        while _within(v * (k + 1), bound):
            k += 1
        box.append(k)
    return box


def _within(v, bound) -> bool:
    if isinstance(v, Value) and isinstance(v.order, LexOrder):
        return all(a <= b for a, b in zip(v.coords, bound.coords))
    return v <= bound


def _det(a: Sequence[Sequence[int]]) -> int:
    n = len(a)
    if n == 1:
        return a[0][0]
    total = 0
    for j in range(n):
        if a[0][j]:
            minor = [row[:j] + row[j + 1:] for row in a[1:]]
            total += (-1) ** j * a[0][j] * _det(minor)
    return total


@dataclass(frozen=True)
class MonomialExtension:
    """``x_i = delta_i * prod_j y_j^a_ij`` between two monomial valuations."""

    source: MonomialValuation
    target: MonomialValuation
    matrix: tuple
    deltas: tuple
    f: int = 1

    def __post_init__(self):
        a = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", a)
        n = self.source.n
        if self.target.n != n or len(a) != n or any(len(r) != n for r in a):
            raise ValueError("A must be n x n for n-dimensional rings")
        if any(x < 0 for r in a for x in r):
            raise ValueError("A must have natural entries")
        if _det(a) == 0:
            raise ValueError("Det(A) = 0: not a monomial extension")
        if len(self.deltas) != n or any(d == 0 for d in self.deltas):
            raise ValueError("each delta_i must be a unit (nonzero residue)")
        for i in range(n):
            img = self.target.monomial_value(a[i])
            if img != self.source.values[i]:
                raise ValueError(f"value incompatibility at x{i + 1}: "
                                 f"{self.source.values[i]} != {img}")

    @classmethod
    def from_target(cls, matrix, target: MonomialValuation, deltas=None, f: int = 1,
                    names=None):
        n = target.n
        vals = tuple(target.monomial_value(row) for row in matrix)
        src = MonomialValuation(vals, tuple(names or (f"x{i + 1}" for i in range(n))))
        return cls(src, target, tuple(map(tuple, matrix)), tuple(deltas or (1,) * n), f)

    @property
    def det(self) -> int:
        return _det(self.matrix)

    @property
    def e(self) -> int:
        return abs(self.det)

    @property
    def degree(self) -> int:
        return self.e * self.f

    def lattice_index(self) -> int:
        return SubgroupView(self.source.values).index_in(SubgroupView(self.target.values))

    def coset_representatives(self, bound) -> tuple:
        """Least semigroup element of ``S`` in each coset of the value group of ``R``."""
        small = SubgroupView(self.source.values)
        reps: list = []
        for v in semigroup_members(self.target.values, bound):
            if all((v - r) not in small for r in reps):
                reps.append(v)
        return tuple(reps)

    def relations(self) -> list[str]:
        out = []
        for i, row in enumerate(self.matrix):
            mono = "*".join(f"{y}^{k}" if k > 1 else y
                            for y, k in zip(self.target.names, row) if k)
            d = self.deltas[i]
            dstr = format_element(d) if not isinstance(d, int) else str(d)
            out.append(f"[{self.source.names[i]}] = ({dstr})*{mono}")
        return out


@dataclass(frozen=True)
class Prop1Report:
    verdict: str
    e: int
    det: int
    lattice_index: int
    f: int
    degree: int
    pieces_r: tuple
    pieces_s: tuple
    relations_ok: bool
    coset_representatives: tuple
    module_generators: tuple
    module_finite: bool
    bound: object
    notes: tuple = ()

    @property
    def pieces_ok(self) -> bool:
        return all(ok for _, _, ok in self.pieces_r + self.pieces_s)


def _piece_table(V: MonomialValuation, bound) -> tuple:
    box = _exponent_box(V, bound)
    values = {}
    for exps in product(*(range(b + 1) for b in box)):
        val = V.monomial_value(exps)
        if _within(val, bound):
            values[val] = values.get(val, 0) + 1
    members = set(semigroup_members(V.values, bound))
    rows = []
    for lam in sorted(set(values) | members):
        dim = values.get(lam, 0)
        rows.append((lam, dim, dim == (1 if lam in members else 0)))
    return tuple(rows)


def verify_prop1(E: MonomialExtension, bound) -> Prop1Report:
    """Check the graded-ring consequences of a monomial extension up to ``bound``.

    The module generation check (v) is informative: when ``S`` is not finite
    over ``R`` the truncated cover keeps growing and the note says so.
    """
    bound = as_value(bound)
    pr = _piece_table(E.source, bound)
    ps = _piece_table(E.target, bound)
    relations_ok = all(E.target.monomial_value(row) == v
                       for row, v in zip(E.matrix, E.source.values))
    idx = E.lattice_index()
    reps = E.coset_representatives(bound)
    cover = module_generators(E.target.values, E.source.values, bound)
    finite = cover.stabilized and len(cover.generators) == E.e
    notes = []
    if not finite:
        notes.append("module cover did not stabilize within the bound: S^S is not finite "
                     "over S^R for this matrix (or the bound is too small)")
    if len(reps) != E.e:
        notes.append(f"found {len(reps)} of {E.e} cosets below the bound")
    ok = (all(r[2] for r in pr + ps) and relations_ok and idx == E.e)
    return Prop1Report("verified" if ok else "refuted", E.e, E.det, idx, E.f, E.degree, pr, ps,
                       relations_ok, reps, tuple(cover.generators), finite, bound, tuple(notes))
