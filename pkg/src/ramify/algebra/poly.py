"""Sparse multivariate polynomials with coefficients in a field tower."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .fields import FieldTower, ModP, TowerElement, format_element

__all__ = ["Poly", "parse_poly", "parse_univariate", "NotDivisibleError"]


class NotDivisibleError(ArithmeticError):
    pass


def _int_divmod(terms: dict, low: list, d: int, i: int):
    rows: dict[int, dict] = {}
    for e, c in terms.items():
        rows.setdefault(e[i], {})[e] = c
    q: dict = {}
    top = max(rows, default=-1)
    for k in range(top, d - 1, -1):
        row = rows.pop(k, None)
        if not row:
            continue
        for e, c in row.items():
            qe = tuple(x - d if j == i else x for j, x in enumerate(e))
            q[qe] = q.get(qe, 0) + c
            for le, lc in low:
                ne = tuple(a + b for a, b in zip(qe, le))
                tgt = rows.setdefault(ne[i], {})
                nv = tgt.get(ne, 0) - c * lc
                if nv:
                    tgt[ne] = nv
                else:
                    tgt.pop(ne, None)
    r = {}
    for row in rows.values():
        r.update(row)
    return {e: c for e, c in q.items() if c}, r


class Poly:
    """Polynomial in ``len(names)`` variables over ``field``.

    ``terms`` maps exponent tuples to nonzero coefficients.  Instances are
    treated as immutable.
    """

    __slots__ = ("field", "names", "terms", "_hash")

    def __init__(self, field: FieldTower, names: Sequence[str], terms: Mapping | None = None,
                 *, _clean: bool = False):
        self.field = field
        self.names = tuple(names)
        self._hash = None
        if _clean:
            self.terms = terms
            return
        out = {}
        n = len(self.names)
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for variables {self.names}")
            c = field(c)
            if c:
                out[e] = c
        self.terms = out

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, field, names):
        return cls(field, names, {}, _clean=True)

    @classmethod
    def constant(cls, c, field, names):
        return cls(field, names, {(0,) * len(names): c})

    @classmethod
    def monomial(cls, exps, field, names, c=1):
        return cls(field, names, {tuple(exps): c})

    @classmethod
    def var(cls, i: int, field, names):
        e = [0] * len(names)
        e[i] = 1
        return cls(field, names, {tuple(e): 1})

    def _new(self, terms):
        return Poly(self.field, self.names, terms, _clean=True)

    def _coerce(self, o):
        if isinstance(o, Poly):
            if o.names != self.names:
                raise TypeError(f"variable mismatch {o.names} vs {self.names}")
            if o.field is not self.field and o.field != self.field:
                if o.field.is_ancestor_of(self.field):
                    return o.change_field(self.field)
                if self.field.is_ancestor_of(o.field):
                    return None
                raise TypeError("polynomials over unrelated fields")
            return o
        return Poly.constant(o, self.field, self.names)

    # arithmetic -----------------------------------------------------------
    def __add__(self, o):
        o2 = self._coerce(o)
        if o2 is None:
            return o + self
        t = dict(self.terms)
        for e, c in o2.terms.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = v + c
                if v:
                    t[e] = v
                else:
                    del t[e]
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        o2 = self._coerce(o)
        if o2 is None:
            return -(o - self)
        return self + (-o2)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Poly):
            c = self.field(o)
            if not c:
                return self._new({})
            return self._new({e: v * c for e, v in self.terms.items()})
        o2 = self._coerce(o)
        if o2 is None:
            return o * self
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o2.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e)
                t[e] = c1 * c2 if v is None else v + c1 * c2
        return self._new({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(1, self.field, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c):
        return self * c

    def __eq__(self, o):
        if isinstance(o, Poly):
            if o.names != self.names:
                return False
            if o.field != self.field:
                try:
                    a, b = (self, o.change_field(self.field)) if o.field.is_ancestor_of(
                        self.field) else (self.change_field(o.field), o)
                except (TypeError, ValueError):
                    return False
                return a.terms == b.terms
            return self.terms == o.terms
        try:
            return self.terms == Poly.constant(o, self.field, self.names).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # inspection -------------------------------------------------------------
    def degree(self, i: int) -> int:
        """Degree in variable ``i`` (``-1`` for the zero polynomial)."""
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self, i: int) -> int:
        return min((e[i] for e in self.terms), default=0)

    def constant_term(self):
        return self.terms.get((0,) * len(self.names), self.field.zero)

    def is_unit(self) -> bool:
        """Unit in the local ring at the origin."""
        return bool(self.constant_term())

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def coeff(self, exps) -> object:
        return self.terms.get(tuple(exps), self.field.zero)

    def max_coefficient_bits(self) -> int:
        from .fields import flatten
        root = self.field.root()
        bits = 0
        for c in self.terms.values():
            for x in flatten(c, root, self.field):
                if isinstance(x, Fraction):
                    bits = max(bits, x.numerator.bit_length(), x.denominator.bit_length())
        return bits

    # transformations --------------------------------------------------------
    def change_field(self, field: FieldTower) -> "Poly":
        return Poly(field, self.names, {e: field(c) for e, c in self.terms.items()})

    def map_coefficients(self, fn: Callable, field: FieldTower | None = None) -> "Poly":
        f = field or self.field
        return Poly(f, self.names, {e: fn(c) for e, c in self.terms.items()})

    def rename(self, names: Sequence[str]) -> "Poly":
        if len(names) != len(self.names):
            raise ValueError("wrong number of variable names")
        return Poly(self.field, names, self.terms, _clean=True)

    def monomial_map(self, fn: Callable, names: Sequence[str]) -> "Poly":
        """Apply ``fn`` to every exponent tuple (a monomial substitution)."""
        t: dict = {}
        for e, c in self.terms.items():
            e2 = tuple(fn(e))
            v = t.get(e2)
            t[e2] = c if v is None else v + c
        return Poly(self.field, names, {e: c for e, c in t.items() if c})

    def divide_by_monomial(self, exps) -> "Poly":
        t = {}
        for e, c in self.terms.items():
            e2 = tuple(a - b for a, b in zip(e, exps))
            if any(x < 0 for x in e2):
                raise NotDivisibleError("not divisible by the monomial")
            t[e2] = c
        return self._new(t)

    def subs(self, images: Sequence["Poly"], field: FieldTower | None = None) -> "Poly":
        """Compose with ``images`` (one polynomial per variable)."""
        if len(images) != len(self.names):
            raise ValueError("one image per variable is required")
        target = images[0]
        field = field or target.field
        acc = Poly.zero(field, target.names)
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k if k < 2 or (i, k - 1) not in cache \
                    else cache[(i, k - 1)] * images[i]
            return cache[key]

        for e, c in sorted(self.terms.items()):
            term = Poly.constant(field(c), field, target.names)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term
        return acc

    def by_degree(self, i: int) -> dict[int, dict]:
        rows: dict[int, dict] = {}
        for e, c in self.terms.items():
            rows.setdefault(e[i], {})[e] = c
        return rows

    def divmod_monic(self, divisor: "Poly", i: int = 1):
        """Division by ``divisor``, monic in variable ``i``.

        Returns ``(q, r)`` with ``self = q*divisor + r`` and
        ``deg_i r < deg_i divisor``.
        """
        d = divisor.degree(i)
        lead = {e: c for e, c in divisor.terms.items() if e[i] == d}
        unit = tuple(d if j == i else 0 for j in range(len(self.names)))
        if lead != {unit: self.field.one} and list(lead) != [unit]:
            raise ValueError("divisor is not monic in the division variable")
        if lead[unit] != 1:
            raise ValueError("divisor is not monic in the division variable")
        low = [(e, c) for e, c in divisor.terms.items() if e[i] < d]
        if self.field.level == 0 and self.field.characteristic == 0 and \
                all(c.denominator == 1 for _, c in low):
            return self._divmod_monic_int(low, d, i)
        rows = self.by_degree(i)
        q: dict = {}
        top = max(rows, default=-1)
        for k in range(top, d - 1, -1):
            row = rows.pop(k, None)
            if not row:
                continue
            for e, c in row.items():
                qe = tuple(x - d if j == i else x for j, x in enumerate(e))
                q[qe] = q.get(qe, 0) + c
                for le, lc in low:
                    ne = tuple(a + b for a, b in zip(qe, le))
                    tgt = rows.setdefault(ne[i], {})
                    v = tgt.get(ne)
                    nv = -c * lc if v is None else v - c * lc
                    if nv:
                        tgt[ne] = nv
                    elif v is not None:
                        del tgt[ne]
        r = {}
        for row in rows.values():
            r.update(row)
        return self._new({e: c for e, c in q.items() if c}), self._new(r)

    def adic_digits(self, divisor: "Poly", i: int = 1) -> list["Poly"]:
        """Digits ``r_k`` with ``self = sum r_k * divisor^k`` and ``deg_i r_k < deg_i divisor``."""
        d = divisor.degree(i)
        low = [(e, c) for e, c in divisor.terms.items() if e[i] < d]
        if not (self.field.level == 0 and self.field.characteristic == 0 and
                all(c.denominator == 1 for _, c in low)):
            digits, f = [], self
            while f.degree(i) >= d:
                q, r = f.divmod_monic(divisor, i)
                digits.append(r)
                f = q
            digits.append(f)
            return digits
        if [e for e in divisor.terms if e[i] == d] != [tuple(d if j == i else 0 for j in
                                                            range(len(self.names)))] \
                or divisor.terms[tuple(d if j == i else 0 for j in range(len(self.names)))] != 1:
            raise ValueError("divisor is not monic in the division variable")
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        cur = {e: int(c * den) for e, c in self.terms.items()}
        low = [(e, int(c)) for e, c in low]
        out = []
        while True:
            if max((e[i] for e in cur), default=-1) < d:
                out.append(cur)
                break
            q, r = _int_divmod(cur, low, d, i)
            out.append(r)
            cur = q
        return [self._new({e: Fraction(c, den) for e, c in t.items()}) for t in out]

    def _divmod_monic_int(self, low, d, i):
        # integer fast path: clear denominators once, divide with Python ints
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        rows: dict[int, dict] = {}
        for e, c in self.terms.items():
            rows.setdefault(e[i], {})[e] = int(c * den)
        low = [(e, int(c)) for e, c in low]
        q: dict = {}
        top = max(rows, default=-1)
        for k in range(top, d - 1, -1):
            row = rows.pop(k, None)
            if not row:
                continue
            for e, c in row.items():
                qe = tuple(x - d if j == i else x for j, x in enumerate(e))
                q[qe] = q.get(qe, 0) + c
                for le, lc in low:
                    ne = tuple(a + b for a, b in zip(qe, le))
                    tgt = rows.setdefault(ne[i], {})
                    nv = tgt.get(ne, 0) - c * lc
                    if nv:
                        tgt[ne] = nv
                    else:
                        tgt.pop(ne, None)
        r = {}
        for row in rows.values():
            r.update(row)
        qt = {e: Fraction(c, den) for e, c in q.items() if c}
        rt = {e: Fraction(c, den) for e, c in r.items() if c}
        return self._new(qt), self._new(rt)

    def exact_div(self, other: "Poly") -> "Poly":
        """Exact quotient ``self / other``; raises :class:`NotDivisibleError`."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self * (1 / other.constant_term() if not isinstance(
                other.constant_term(), (TowerElement, ModP)) else other.constant_term().inverse())
        lt_e = max(other.terms)
        lt_c = other.terms[lt_e]
        inv = lt_c.inverse() if isinstance(lt_c, (TowerElement, ModP)) else 1 / lt_c
        r = self
        q = Poly.zero(self.field, self.names)
        while r:
            e = max(r.terms)
            qe = tuple(a - b for a, b in zip(e, lt_e))
            if any(x < 0 for x in qe):
                raise NotDivisibleError("polynomial is not exactly divisible")
            m = Poly.monomial(qe, self.field, self.names, r.terms[e] * inv)
            q = q + m
            r = r - m * other
        return q

    # output -----------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: tuple(-x for x in reversed(t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, e) if k)
            cs = format_element(c)
            compound = isinstance(c, TowerElement) and (" + " in cs or " - " in cs[1:])
            if not mono:
                parts.append(f"({cs})" if compound else cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            elif compound or "/" in cs or "*" in cs:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"Poly({self}, vars={self.names})"


# -- parsing ----------------------------------------------------------------------

def _sympy_parse(text: str, allowed: Sequence[str]):
    import sympy
    from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication_application,
                                            parse_expr, standard_transformations)

    if not isinstance(text, str):
        raise ValueError("polynomial must be given as a string")
    syms = {n: sympy.Symbol(n) for n in allowed}
    try:
        expr = parse_expr(text, local_dict=dict(syms),
                          transformations=standard_transformations + (convert_xor,),
                          evaluate=True)
    except Exception as exc:  # sympy raises a zoo of exception types
        raise ValueError(f"cannot parse polynomial {text!r}: {exc}") from exc
    if expr.has(sympy.Float):
        raise ValueError(f"inexact coefficient in {text!r}; use p/q rationals")
    unknown = {str(s) for s in expr.free_symbols} - set(allowed)
    if unknown:
        raise ValueError(f"unknown symbols {sorted(unknown)} in {text!r}")
    expr = sympy.expand(expr)
    if not expr.is_polynomial(*syms.values()):
        raise ValueError(f"{text!r} is not a polynomial")
    return expr, syms


def parse_poly(text, names: Sequence[str], field: FieldTower) -> Poly:
    """Parse a polynomial in ``names`` whose coefficients may involve the
    generators of ``field`` (referred to by name)."""
    if isinstance(text, Poly):
        return text
    if isinstance(text, (int, Fraction)):
        return Poly.constant(text, field, names)
    import sympy

    gens = field.gens()
    clash = set(gens) & set(names)
    if clash:
        raise ValueError(f"names {sorted(clash)} used both as variables and field generators")
    allowed = list(names) + list(gens)
    expr, syms = _sympy_parse(text, allowed)
    order = [syms[n] for n in allowed]
    if expr == 0:
        return Poly.zero(field, names)
    sp = sympy.Poly(expr, *order, domain="QQ")
    terms: dict = {}
    nv = len(names)
    for monom, coeff in sp.terms():
        c = field(Fraction(int(coeff.p), int(coeff.q)))
        for name, k in zip(allowed[nv:], monom[nv:]):
            if k:
                c = c * gens[name] ** k
        e = tuple(monom[:nv])
        terms[e] = terms.get(e, 0) + c
    return Poly(field, names, terms)


def parse_univariate(text, field: FieldTower, var: str = "z") -> list:
    """Coefficient list (low degree first) of a univariate polynomial in ``var``."""
    if not isinstance(text, str):
        return [field(c) for c in text]
    p = parse_poly(text, [var], field)
    deg = p.degree(0)
    if deg < 0:
        return []
    return [p.coeff((k,)) for k in range(deg + 1)]
