"""Exact arithmetic in finite towers of simple algebraic extensions.

A tower is a chain of nodes.  The root is the prime field (``Q`` with
:class:`fractions.Fraction` elements, or ``F_p`` with :class:`ModP`
elements).  Every further node adjoins one root of a monic irreducible
polynomial over its parent, so an element of a node of step degree ``d`` is
stored as a tuple of ``d`` coefficients taken from the parent node.

Nodes compare structurally, so two towers built from the same data in two
separate places interoperate.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence

__all__ = [
    "ModP",
    "FieldTower",
    "TowerElement",
    "ReducibleError",
    "tower_extend",
    "is_irreducible",
    "minimal_polynomial",
    "flatten",
    "unflatten",
    "descend",
    "embed",
    "solve_linear",
    "format_element",
    "MAX_IRREDUCIBILITY_DEGREE",
]

#: largest polynomial degree handed to the irreducibility test
MAX_IRREDUCIBILITY_DEGREE = 8


class ReducibleError(ValueError):
    """Raised when a declared minimal polynomial factors."""


class ModP:
    """Element of the prime field ``F_p``."""

    __slots__ = ("v", "p")

    def __init__(self, v, p: int):
        if isinstance(v, Fraction):
            v = v.numerator * pow(v.denominator, -1, p)
        self.v = int(v) % p
        self.p = p

    def _other(self, o):
        if isinstance(o, ModP):
            if o.p != self.p:
                raise TypeError("mixing different prime fields")
            return o.v
        if isinstance(o, int):
            return o % self.p
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p) % self.p
        return None

    def __add__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else ModP(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else ModP(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else ModP(w - self.v, self.p)

    def __mul__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else ModP(self.v * w, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self * ModP(w, self.p).inverse()

    def __rtruediv__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else self.inverse() * w

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ModP(pow(self.v, e, self.p), self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, o):
        w = self._other(o)
        return False if w is None else self.v == w

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"ModP({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


# -- small univariate helpers over an arbitrary node -------------------------

def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _pdivmod(a: list, b: list):
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = 1 / b[-1] if not isinstance(b[-1], (TowerElement, ModP)) else b[-1].inverse()
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    _trim(a)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = a[-1] * lead_inv
        q[k] = c
        for j in range(db + 1):
            a[k + j] = a[k + j] - c * b[j]
        a.pop()
        _trim(a)
    return q, a


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _psub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)


def _pgcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    return a


def _inverse_mod(a: list, m: list) -> list:
    """Inverse of ``a`` modulo the irreducible ``m`` (extended Euclid)."""
    r0, r1 = _trim(list(m)), _trim(list(a))
    s0, s1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible (modulus not irreducible?)")
    c = r0[0]
    inv = c.inverse() if isinstance(c, (TowerElement, ModP)) else 1 / c
    return [x * inv for x in s0]


class FieldTower:
    """A node of a tower of simple algebraic extensions.

    Use :meth:`rationals` or :meth:`prime` for the root and
    :func:`tower_extend` to adjoin a root of an irreducible polynomial.
    """

    def __init__(self, *, characteristic: int = 0, parent: "FieldTower | None" = None,
                 name: str | None = None, minpoly: Sequence | None = None):
        self.parent = parent
        self.name = name
        if parent is None:
            self.characteristic = characteristic
            self.minpoly = None
            self.step_degree = 1
            self.level = 0
            self.degree = 1
        else:
            mp = tuple(parent(c) for c in minpoly)
            if len(mp) < 2 or mp[-1] != parent.one:
                raise ValueError("minimal polynomial must be monic of degree >= 1")
            self.characteristic = parent.characteristic
            self.minpoly = mp
            self.step_degree = len(mp) - 1
            self.level = parent.level + 1
            self.degree = parent.degree * self.step_degree
        self._key = None
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def rationals(cls) -> "FieldTower":
        return _QQ

    @classmethod
    def prime(cls, p: int) -> "FieldTower":
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        return cls(characteristic=p)

    # structure ------------------------------------------------------------
    def key(self):
        if self._key is None:
            if self.parent is None:
                self._key = ("root", self.characteristic)
            else:
                self._key = (self.parent.key(), self.name, self.minpoly)
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FieldTower) or self.level != other.level:
            return False
        return self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def ancestors(self) -> list["FieldTower"]:
        """Nodes from the root up to and including ``self``."""
        out, node = [], self
        while node is not None:
            out.append(node)
            node = node.parent
        return out[::-1]

    def root(self) -> "FieldTower":
        return self.ancestors()[0]

    def is_ancestor_of(self, other: "FieldTower") -> bool:
        if other.level < self.level:
            return False
        node = other
        while node.level > self.level:
            node = node.parent
        return node == self

    def names(self) -> list[str]:
        return [n.name for n in self.ancestors()[1:]]

    def degree_over(self, base: "FieldTower") -> int:
        if not base.is_ancestor_of(self):
            raise ValueError("base is not a subfield of this tower")
        return self.degree // base.degree

    # elements -------------------------------------------------------------
    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, x):
        """Coerce ``x`` (an integer, rational or element of a subfield)."""
        if self.parent is None:
            if isinstance(x, TowerElement):
                raise TypeError("cannot coerce an algebraic element into the prime field")
            if self.characteristic:
                if isinstance(x, ModP):
                    if x.p != self.characteristic:
                        raise TypeError("mixing different prime fields")
                    return x
                return ModP(x, self.characteristic)
            if isinstance(x, Fraction):
                return x
            if isinstance(x, (int, Rational)):
                return Fraction(x)
            if isinstance(x, str):
                return Fraction(x)
            raise TypeError(f"cannot coerce {x!r} into Q")
        if isinstance(x, TowerElement):
            if x.tower == self:
                return x if x.tower is self else TowerElement(self, x.coeffs)
            if x.tower.level > self.level:
                return self(descend(x, self))
            if not x.tower.is_ancestor_of(self):
                raise TypeError("element belongs to an unrelated tower")
        c = self.parent(x)
        return TowerElement(self, (c,) + (self.parent.zero,) * (self.step_degree - 1))

    @property
    def gen(self) -> "TowerElement":
        if self.parent is None:
            raise ValueError("the prime field has no generator")
        z = self.parent.zero
        o = self.parent.one
        if self.step_degree == 1:
            return TowerElement(self, (-self.minpoly[0],))
        return TowerElement(self, (z, o) + (z,) * (self.step_degree - 2))

    def gens(self) -> dict[str, "TowerElement"]:
        """Generators of every level, coerced into this node, by name."""
        return {n.name: self(n.gen) for n in self.ancestors()[1:]}

    def __repr__(self):
        if self.parent is None:
            return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"
        return f"{self.parent!r}[{self.name}]"

    def describe(self) -> str:
        parts = [repr(self.root())]
        for node in self.ancestors()[1:]:
            mp = format_univariate(node.minpoly, "z")
            parts.append(f"{node.name}: {mp}")
        return "; ".join(parts)


_QQ = FieldTower(characteristic=0)


class TowerElement:
    """Element of a non-root node, stored over the parent node."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: FieldTower, coeffs: tuple):
        self.tower = tower
        self.coeffs = coeffs

    # coercion -------------------------------------------------------------
    def _pair(self, o):
        """Both operands coerced into the deeper of the two nodes."""
        if isinstance(o, TowerElement):
            if o.tower is self.tower:
                return self, o
            if o.tower.level > self.tower.level:
                return o.tower(self), o
            return self, self.tower(o)
        if isinstance(o, (int, Fraction, ModP)):
            return self, self.tower(o)
        return None, None

    def __add__(self, o):
        a, b = self._pair(o)
        if a is None:
            return NotImplemented
        return TowerElement(a.tower, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, tuple(-a for a in self.coeffs))

    def __sub__(self, o):
        a, b = self._pair(o)
        if a is None:
            return NotImplemented
        return TowerElement(a.tower, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, o):
        a, b = self._pair(o)
        if a is None:
            return NotImplemented
        return TowerElement(a.tower, tuple(y - x for x, y in zip(a.coeffs, b.coeffs)))

    def __mul__(self, o):
        if isinstance(o, (int, Fraction, ModP)):
            return TowerElement(self.tower, tuple(a * o for a in self.coeffs))
        if not isinstance(o, TowerElement):
            return NotImplemented
        if o.tower.level < self.tower.level:
            # scalar from a subfield: multiply coefficientwise
            o = self.tower.parent(o)
            return TowerElement(self.tower, tuple(a * o for a in self.coeffs))
        if o.tower.level > self.tower.level:
            return o * self
        if o.tower is not self.tower:
            o = self.tower(o)
        d = self.tower.step_degree
        if d == 1:
            return TowerElement(self.tower, (self.coeffs[0] * o.coeffs[0],))
        prod = _pmul(list(self.coeffs), list(o.coeffs))
        mp = self.tower.minpoly
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c:
                for j in range(d):
                    prod[k - d + j] = prod[k - d + j] - c * mp[j]
        par = self.tower.parent
        out = [par(x) for x in prod[:d]]
        out += [par.zero] * (d - len(out))
        return TowerElement(self.tower, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "TowerElement":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        d = self.tower.step_degree
        if d == 1:
            c = self.coeffs[0]
            inv = c.inverse() if isinstance(c, (TowerElement, ModP)) else 1 / c
            return TowerElement(self.tower, (inv,))
        s = _inverse_mod(list(self.coeffs), list(self.tower.minpoly))
        z = self.tower.parent.zero
        s = [self.tower.parent(x) for x in s] + [z] * (d - len(s))
        return TowerElement(self.tower, tuple(s[:d]))

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            return self * (1 / Fraction(o)) if not self.tower.characteristic else \
                self * self.tower.root()(o).inverse()
        if isinstance(o, ModP):
            return self * o.inverse()
        a, b = self._pair(o)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, o):
        a, b = self._pair(o)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __bool__(self):
        return any(bool(c) for c in self.coeffs)

    def __eq__(self, o):
        if isinstance(o, TowerElement):
            if o.tower.level > self.tower.level:
                return o == self
            try:
                o = self.tower(o)
            except TypeError:
                return False
            return self.coeffs == o.coeffs
        if isinstance(o, (int, Fraction, ModP)):
            return self.coeffs == self.tower(o).coeffs
        return NotImplemented

    def __hash__(self):
        # elements of a subfield hash like their image one level down
        if all(not c for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.tower.level, self.coeffs))

    def __repr__(self):
        return f"TowerElement({format_element(self)})"

    def __str__(self):
        return format_element(self)


# -- formatting ----------------------------------------------------------------

def _fmt_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def format_element(e) -> str:
    """Render an element as a polynomial in the tower generators."""
    if not isinstance(e, TowerElement):
        return _fmt_scalar(e)
    name = e.tower.name
    parts = []
    for j in range(len(e.coeffs) - 1, -1, -1):
        c = e.coeffs[j]
        if not c:
            continue
        cs = format_element(c)
        if j == 0:
            parts.append(cs)
            continue
        mono = name if j == 1 else f"{name}^{j}"
        if cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append(f"-{mono}")
        elif isinstance(c, TowerElement) and _is_compound(c):
            parts.append(f"({cs})*{mono}")
        elif "/" in cs and not isinstance(c, TowerElement):
            parts.append(f"({cs})*{mono}")
        else:
            parts.append(f"{cs}*{mono}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _is_compound(c) -> bool:
    if not isinstance(c, TowerElement):
        return False
    nz = [x for x in c.coeffs if x]
    return len(nz) > 1 or (nz and _is_compound(nz[0])) or len(nz) == 1 and c.coeffs[0] != nz[0]


def format_univariate(coeffs: Sequence, var: str = "z") -> str:
    parts = []
    for j in range(len(coeffs) - 1, -1, -1):
        c = coeffs[j]
        if not c:
            continue
        cs = format_element(c)
        if j == 0:
            parts.append(cs)
            continue
        mono = var if j == 1 else f"{var}^{j}"
        if cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append(f"-{mono}")
        elif isinstance(c, TowerElement) or "/" in cs:
            parts.append(f"({cs})*{mono}")
        else:
            parts.append(f"{cs}*{mono}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") and not p.startswith("-(") else f" + {p}"
    return out


# -- vector space structure over a subfield ------------------------------------

def flatten(e, over: FieldTower, tower: FieldTower | None = None) -> list:
    """Coordinates of ``e`` over the subfield ``over``.

    The basis is the tensor product of the power bases of the steps between
    ``over`` and ``tower`` (defaults to the node of ``e``), innermost step
    varying fastest.
    """
    if tower is None:
        tower = e.tower if isinstance(e, TowerElement) else over
    e = tower(e)
    if tower == over:
        return [e]
    if tower.level < over.level:
        raise ValueError("cannot flatten below the element's own node")
    out = []
    for c in e.coeffs:
        out.extend(flatten(c, over, tower.parent))
    return out


def unflatten(vec: Sequence, tower: FieldTower, over: FieldTower):
    """Inverse of :func:`flatten`."""
    if tower == over:
        if len(vec) != 1:
            raise ValueError("wrong vector length")
        return over(vec[0])
    inner = tower.parent.degree_over(over)
    if len(vec) != inner * tower.step_degree:
        raise ValueError("wrong vector length")
    coeffs = tuple(unflatten(vec[j * inner:(j + 1) * inner], tower.parent, over)
                   for j in range(tower.step_degree))
    return TowerElement(tower, coeffs)


def descend(e, node: FieldTower):
    """Rewrite ``e`` as an element of the subfield ``node``.

    Raises ``ValueError`` when ``e`` does not lie in that subfield.
    """
    if not isinstance(e, TowerElement):
        return node(e)
    while e.tower.level > node.level:
        if any(c for c in e.coeffs[1:]):
            raise ValueError("element does not lie in the requested subfield")
        e = e.coeffs[0]
        if not isinstance(e, TowerElement):
            return node(e)
    return node(e)


def embed(e, target: FieldTower, images: Mapping) -> object:
    """Image of ``e`` under the homomorphism fixing the prime field.

    ``images`` maps generator names of the source tower to elements of
    ``target``; unnamed levels are sent to the generator of the same name in
    ``target`` when present.
    """
    if not isinstance(e, TowerElement):
        return target(e)
    name = e.tower.name
    if name in images:
        g = target(images[name])
    else:
        g = target.gens()[name]
    acc = target.zero
    for c in reversed(e.coeffs):
        acc = acc * g + embed(c, target, images)
    return acc


# -- linear algebra -----------------------------------------------------------

def _inv(c):
    return c.inverse() if isinstance(c, (TowerElement, ModP)) else 1 / c


def solve_linear(rows: Sequence[Sequence], rhs: Sequence):
    """Solve ``rows @ x = rhs`` over a field by Gaussian elimination.

    Returns the solution when it exists and is unique, ``None`` when the
    system is inconsistent, and raises ``ValueError`` when it is
    underdetermined.
    """
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    n = len(rows[0]) if rows else 0
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = _inv(m[r][c])
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] for row in m[r:]):
        return None
    if r < n:
        raise ValueError("linear system is underdetermined")
    x = [None] * n
    for i, c in enumerate(piv_cols):
        x[c] = m[i][-1]
    return x


def minimal_polynomial(e, over: FieldTower) -> list:
    """Monic minimal polynomial of ``e`` over the subfield ``over``.

    Coefficients are returned low degree first, as elements of ``over``.
    """
    tower = e.tower if isinstance(e, TowerElement) else over
    if not over.is_ancestor_of(tower):
        raise ValueError("minimal polynomial requested over a non-subfield")
    dim = tower.degree_over(over)
    powers = [flatten(tower.one, over, tower)]
    cur = tower.one
    for k in range(1, dim + 1):
        cur = cur * e
        target = flatten(cur, over, tower)
        cols = powers
        rows = [[cols[j][i] for j in range(k)] for i in range(dim)]
        try:
            sol = solve_linear(rows, [-t for t in target])
        except ValueError:  # pragma: no cover - powers are independent up to k-1
            sol = None
        if sol is not None:
            return [over(s) for s in sol] + [over.one]
        powers.append(target)
    raise AssertionError("degree of an element exceeds the field degree")


# -- irreducibility -----------------------------------------------------------

def _derivative(c: Sequence) -> list:
    return [c[i] * i for i in range(1, len(c))]


def _to_domain_entry(x, dom, p):
    if p:
        return dom(x.v if isinstance(x, ModP) else int(x))
    x = Fraction(x)
    return dom(x.numerator, x.denominator)


def is_irreducible(coeffs: Sequence, tower: FieldTower) -> bool:
    """Decide irreducibility of a univariate polynomial over ``tower``.

    The polynomial ``f`` is irreducible exactly when ``A = tower[z]/(f)`` is
    a field.  After a squarefree check, ``A`` is reduced, so it is a field
    iff a primitive element has a characteristic polynomial over the prime
    field that is irreducible.  Elements ``z + sum c^k g_k`` are tried for
    ``c = 0, 1, ...``; squarefree-ness of the characteristic polynomial
    certifies primitivity.
    """
    from sympy import Poly, Symbol
    from sympy.polys.domains import GF, QQ
    from sympy.polys.matrices import DomainMatrix

    f = _trim([tower(c) for c in coeffs])
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if deg > MAX_IRREDUCIBILITY_DEGREE:
        raise NotImplementedError(
            f"irreducibility test limited to degree {MAX_IRREDUCIBILITY_DEGREE}")
    lead = f[-1]
    f = [c / lead for c in f]
    fp = _derivative(f)
    if not _trim(list(fp)):
        return False  # inseparable over a perfect field, so reducible
    if len(_pgcd(f, fp)) > 1:
        return False
    algebra = FieldTower(parent=tower, name="_theta", minpoly=f)
    dim = algebra.degree
    p = tower.characteristic
    dom = GF(p) if p else QQ
    root = tower.root()
    basis = [unflatten([root(int(i == j)) for i in range(dim)], algebra, root)
             for j in range(dim)]
    gens = list(tower.gens().values())
    zsym = Symbol("z")
    for c in range(dim * dim + 2):
        theta = algebra.gen
        for k, g in enumerate(gens, start=1):
            if c:
                theta = theta + algebra(g) * (c ** k)
        cols = [flatten(theta * b, root, algebra) for b in basis]
        mat = DomainMatrix([[_to_domain_entry(cols[j][i], dom, p) for j in range(dim)]
                            for i in range(dim)], (dim, dim), dom)
        cp = mat.charpoly()
        poly = Poly([dom.to_sympy(a) for a in cp], zsym, modulus=p) if p else \
            Poly([dom.to_sympy(a) for a in cp], zsym, domain="QQ")
        if poly.gcd(poly.diff(zsym)).degree() > 0:
            continue
        _, factors = poly.factor_list()
        return len(factors) == 1 and factors[0][1] == 1
    if p:
        raise NotImplementedError("prime field too small to find a primitive element")
    return False  # pragma: no cover - unreachable for reduced algebras in char 0


def tower_extend(tower: FieldTower, minpoly: Sequence, name: str) -> FieldTower:
    """Adjoin a root of ``minpoly`` (coefficients low degree first) named ``name``."""
    f = _trim([tower(c) for c in minpoly])
    if len(f) < 2:
        raise ValueError("minimal polynomial must have degree >= 1")
    if f[-1] != tower.one:
        raise ValueError("minimal polynomial must be monic")
    if name in tower.names():
        raise ValueError(f"generator name {name!r} already used in the tower")
    if not is_irreducible(f, tower):
        raise ReducibleError("reducible minimal polynomial")
    return FieldTower(parent=tower, name=name, minpoly=f)


def random_element(tower: FieldTower, rng, height: int = 3):
    """Random element with small rational coordinates (used by tests)."""
    root = tower.root()
    vec = [root(Fraction(rng.randint(-height, height), rng.randint(1, height)))
           for _ in range(tower.degree)]
    return unflatten(vec, tower, root)


def eval_univariate(coeffs: Iterable, x, one=None):
    acc = None
    for c in reversed(list(coeffs)):
        acc = c if acc is None else acc * x + c
    return acc if acc is not None else (one * 0 if one is not None else 0)


def map_coefficients(coeffs: Iterable, fn: Callable) -> list:
    return [fn(c) for c in coeffs]
