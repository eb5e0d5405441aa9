"""Ordered value groups, finitely generated subgroups and semigroups.

Rank one values are plain :class:`~fractions.Fraction` objects.  Higher
rank values are :class:`Value` instances: a coordinate vector in ``Q^r``
together with an order that embeds ``Q^r`` into an ordered group.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

__all__ = [
    "RationalOrder",
    "LexOrder",
    "QuadraticWeightOrder",
    "Value",
    "as_value",
    "coordinates",
    "SubgroupView",
    "subgroup_index",
    "hermite_normal_form",
    "semigroup_members",
    "ModuleCover",
    "module_generators",
    "parse_rational",
]


def parse_rational(text) -> Fraction:
    """Parse an exact rational given as ``"p/q"``, an int, or a Fraction.

    Floats are rejected on purpose: values must be exact.
    """
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(f"inexact value {text!r}: write rationals as 'p/q' strings")
    if isinstance(text, str):
        s = text.strip()
        if any(ch in s for ch in ".eE") and "/" not in s:
            raise ValueError(f"inexact value {text!r}: write rationals as 'p/q' strings")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {text!r}") from exc
    raise ValueError(f"cannot parse rational {text!r}")


class RationalOrder:
    rank = 1

    def sign(self, coords: Sequence[Fraction]) -> int:
        c = coords[0]
        return (c > 0) - (c < 0)

    def __eq__(self, other):
        return isinstance(other, RationalOrder)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "RationalOrder()"


@dataclass(frozen=True)
class LexOrder:
    """Lexicographic order on ``Q^rank`` (a rank ``rank`` valuation)."""

    rank: int

    def sign(self, coords):
        for c in coords:
            if c:
                return 1 if c > 0 else -1
        return 0


@dataclass(frozen=True)
class QuadraticWeightOrder:
    """``(p, q)`` ordered as the real number ``p + q*sqrt(d)``, ``d`` not a square."""

    d: int
    rank: int = field(default=2, init=False)

    def __post_init__(self):
        r = math.isqrt(self.d) if self.d >= 0 else -1
        if self.d < 2 or r * r == self.d:
            raise ValueError("d must be a positive non-square integer")

    def sign(self, coords):
        p, q = coords
        sp = (p > 0) - (p < 0)
        sq = (q > 0) - (q < 0)
        if sp == 0 or sp == sq:
            return sq if sp == 0 else sp
        if sq == 0:
            return sp
        # opposite signs: compare p^2 with d q^2
        lhs, rhs = p * p, self.d * q * q
        if lhs == rhs:  # pragma: no cover - impossible for non-square d
            return 0
        return sp if lhs > rhs else sq


@total_ordering
class Value:
    """Element of an ordered group ``Q^r``."""

    __slots__ = ("coords", "order")

    def __init__(self, coords: Iterable, order):
        self.coords = tuple(parse_rational(c) for c in coords)
        self.order = order
        if len(self.coords) != order.rank:
            raise ValueError("coordinate vector does not match the order's rank")

    def _check(self, other):
        if not isinstance(other, Value) or other.order != self.order:
            raise TypeError("values belong to different ordered groups")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        return Value((a + b for a, b in zip(self.coords, other.coords)), self.order)

    __radd__ = __add__

    def __sub__(self, other):
        self._check(other)
        return Value((a - b for a, b in zip(self.coords, other.coords)), self.order)

    def __neg__(self):
        return Value((-a for a in self.coords), self.order)

    def __mul__(self, k):
        if isinstance(k, Value):
            return NotImplemented
        k = Fraction(k)
        return Value((a * k for a in self.coords), self.order)

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = Fraction(k)
        return Value((a / k for a in self.coords), self.order)

    def sign(self) -> int:
        return self.order.sign(self.coords)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not any(self.coords)
        if not isinstance(other, Value):
            return NotImplemented
        return self.order == other.order and self.coords == other.coords

    def __lt__(self, other):
        if isinstance(other, int) and other == 0:
            return self.sign() < 0
        self._check(other)
        return (self - other).sign() < 0

    def __hash__(self):
        return hash((self.coords, self.order))

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return f"Value({[str(c) for c in self.coords]}, {self.order!r})"

    def __str__(self):
        if isinstance(self.order, QuadraticWeightOrder):
            p, q = self.coords
            if not q:
                return str(p)
            root = f"sqrt({self.order.d})"
            qs = root if q == 1 else f"-{root}" if q == -1 else f"{q}*{root}"
            if not p:
                return qs
            return f"{p} + {qs}" if not qs.startswith("-") else f"{p} - {qs[1:]}"
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def as_value(v):
    """Fractions stay fractions; anything else must already be a Value."""
    if isinstance(v, Value):
        return v
    return parse_rational(v)


def coordinates(v) -> tuple[Fraction, ...]:
    if isinstance(v, Value):
        return v.coords
    if isinstance(v, (tuple, list)):
        return tuple(Fraction(c) for c in v)
    return (Fraction(v),)


def zero_like(v):
    return v * 0 if isinstance(v, Value) else Fraction(0)


# -- lattices -----------------------------------------------------------------

def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix (zero rows dropped).

    Pivots are positive and entries above a pivot are reduced into
    ``[0, pivot)``.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    out_rows = []
    r = 0
    for c in range(ncols):
        # gcd-reduce column c among rows r..end
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[p] = a[p], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == len(a):
                break
    out_rows = [row for row in a[:r] if any(row)]
    return out_rows


class SubgroupView:
    """The subgroup of ``Q^r`` generated by finitely many values.

    For rank one the group is cyclic and :attr:`generator` is its positive
    generator.  Otherwise :attr:`basis` holds a Hermite basis of the
    lattice, scaled back by the common denominator.
    """

    def __init__(self, generators: Iterable):
        gens = [as_value(g) for g in generators]
        if not gens:
            raise ValueError("at least one generator is required")
        self.generators = tuple(gens)
        self.rank = 1 if not isinstance(gens[0], Value) else gens[0].order.rank
        self.order = None if not isinstance(gens[0], Value) else gens[0].order
        vecs = [coordinates(g) for g in gens]
        den = 1
        for v in vecs:
            for c in v:
                den = den * c.denominator // math.gcd(den, c.denominator)
        self._den = den
        self._int_basis = hermite_normal_form([[int(c * den) for c in v] for v in vecs])
        if self.rank == 1 and not isinstance(gens[0], Value):
            g = self._int_basis[0][0] if self._int_basis else 0
            self.generator = Fraction(g, den)
        else:
            self.generator = None

    @property
    def basis(self) -> list[tuple[Fraction, ...]]:
        return [tuple(Fraction(x, self._den) for x in row) for row in self._int_basis]

    @property
    def lattice_rank(self) -> int:
        return len(self._int_basis)

    def _coords_in_basis(self, v):
        """Rational coordinates of ``v`` in the basis, or None if outside the span."""
        from .fields import solve_linear
        vec = coordinates(v)
        if not self._int_basis:
            return [] if not any(vec) else None
        b = self.basis
        rows = [[b[j][i] for j in range(len(b))] for i in range(len(vec))]
        return solve_linear(rows, list(vec))

    def __contains__(self, v) -> bool:
        sol = self._coords_in_basis(v)
        return sol is not None and all(Fraction(x).denominator == 1 for x in sol)

    def index_in(self, big: "SubgroupView") -> int:
        """``[big : self]``; raises when ``self`` is not contained or the index is infinite."""
        for g in self.generators:
            if g not in big:
                raise ValueError("subgroup is not contained in the larger group")
        if self.lattice_rank < big.lattice_rank:
            raise ValueError("infinite index")
        from .fields import solve_linear
        coords = []
        for row in self.basis:
            sol = big._coords_in_basis(row)
            coords.append([Fraction(x) for x in sol])
        idx = abs(_det(coords))
        if idx.denominator != 1:  # pragma: no cover - contained lattices have integral index
            raise ValueError("non-integral index")
        return int(idx)

    def quotient_order(self, v) -> int | None:
        """Least ``k >= 1`` with ``k*v`` in the group, or None if no such ``k``."""
        sol = self._coords_in_basis(v)
        if sol is None:
            return None
        k = 1
        for x in sol:
            k = k * Fraction(x).denominator // math.gcd(k, Fraction(x).denominator)
        return k

    def __repr__(self):
        if self.generator is not None:
            return f"SubgroupView(generator={self.generator})"
        return f"SubgroupView(basis={[tuple(map(str, r)) for r in self.basis]})"


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    a = [list(r) for r in m]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def subgroup_index(big_gens: Iterable, small_gens: Iterable) -> int:
    """Index ``[G(big_gens) : G(small_gens)]``."""
    return SubgroupView(small_gens).index_in(SubgroupView(big_gens))


# -- semigroups -----------------------------------------------------------------

def _within(v, bound) -> bool:
    if isinstance(v, Value) and isinstance(v.order, LexOrder):
        # box semantics for lexicographic values
        return all(a <= b for a, b in zip(v.coords, bound.coords))
    return v <= bound


def _check_generators(gens):
    for g in gens:
        if isinstance(g, Value) and isinstance(g.order, LexOrder):
            if any(c < 0 for c in g.coords) or not any(g.coords):
                raise ValueError("lexicographic generators need nonnegative coordinates")
        elif not g > zero_like(g):
            raise ValueError("semigroup generators must be positive")


def semigroup_members(generators: Iterable, bound) -> list:
    """Sorted elements ``<= bound`` of the semigroup generated by ``generators``.

    For lexicographic values ``bound`` is read as a coordinatewise box.
    """
    gens = sorted(set(as_value(g) for g in generators))
    bound = as_value(bound)
    _check_generators(gens)
    members = {zero_like(bound)} if _within(zero_like(bound), bound) else set()
    for g in gens:
        frontier = list(members)
        for m in frontier:
            x = m + g
            while _within(x, bound):
                if x in members:
                    # already reached; its multiples were added too
                    x = x + g
                    continue
                members.add(x)
                x = x + g
    return sorted(members)


@dataclass(frozen=True)
class ModuleCover:
    """Greedy generators of a semigroup module, truncated at ``bound``.

    ``stabilized`` records that no generator was needed in the upper half
    of the window, which is the evidence (not proof) that the list is
    complete.
    """

    generators: tuple
    bound: object
    stabilized: bool


def module_generators(big: Iterable, small: Iterable, bound) -> ModuleCover:
    """Generators of the semigroup ``S(big)`` as a module over ``S(small)``.

    Elements of ``S(big)`` up to ``bound`` are visited in increasing order;
    an element is a new generator unless it lies in ``m + S(small)`` for a
    generator ``m`` already found.
    """
    bound = as_value(bound)
    elems = semigroup_members(big, bound)
    small_set = set(semigroup_members(small, bound))
    gens: list = []
    for v in elems:
        if any((v - m) in small_set for m in gens):
            continue
        gens.append(v)
    half = bound * Fraction(1, 2)
    stabilized = all(_within(g, half) for g in gens)
    return ModuleCover(tuple(gens), bound, stabilized)
