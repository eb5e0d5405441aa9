"""Quadratic transforms along a valuation.

A single transform ``R -> R_1`` is monomial in the first two keys:

    u = x1^nbar * y1^a,    v = x1^omega * y1^b,    nbar*b - omega*a = 1,

where ``omega/nbar`` is the reduced form of ``beta_1/beta_0``.  The Laurent
monomial ``y1 = v^nbar / u^omega`` has value zero and residue ``sigma``;
``R_1`` is the localization at ``(x1, y1 - sigma)``.  The keys of ``R`` push
forward to ``Q_i = P_{i+1} / x1^(omega * n_1 ... n_i)``.

For a monomial pair ``R -> S`` (``u = gamma * x^t``, ``v = y``) both rings are
transformed at once and the new exponent ``t_1`` and the cofactor ``m`` of the
pair are read off from a product of 2x2 integer matrices.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Sequence

from .algebra.fields import FieldTower, descend, format_element, format_univariate, minimal_polynomial
from .algebra.poly import Poly
from .algebra.values import SubgroupView
from .keyseq import (KeySequence, LocalRingModel, StepSpec, _companion_exponents, build_sequence)

log = logging.getLogger(__name__)

__all__ = [
    "TransformError",
    "bezout_pair",
    "transform_invariants",
    "TransformStep",
    "quadratic_transform",
    "iterate_quadratic",
    "PairState",
    "MonomialPairStep",
    "PairIteration",
    "monomial_pair_transform",
    "iterate_transforms",
    "describe_sigma",
]


class TransformError(ValueError):
    pass


def bezout_pair(nbar: int, omega: int) -> tuple[int, int]:
    """``(a, b)`` with ``nbar*b - omega*a = 1`` and ``0 <= a < nbar``."""
    if nbar < 1:
        raise ValueError("nbar must be positive")
    if nbar == 1:
        return 0, 1
    a = (-pow(omega, -1, nbar)) % nbar
    b, rem = divmod(1 + omega * a, nbar)
    assert rem == 0
    return a, b


def transform_invariants(beta0, beta1) -> tuple[int, int, int, int]:
    """``(nbar, omega, a, b)`` for the values of the two parameters."""
    q = Fraction(beta1) / Fraction(beta0)
    nbar, omega = q.denominator, q.numerator
    a, b = bezout_pair(nbar, omega)
    return nbar, omega, a, b


@dataclass(frozen=True)
class TransformStep:
    """Result of one quadratic transform of a key sequence.

    ``keys`` are the pushed-forward ``Q_0 .. Q_{N-1}`` as polynomials in
    ``(x1, y1)`` where ``y1`` is the Laurent monomial of value zero.  Derived
    data of the target (value, ``nbar``, ``omega``, residue, minimal
    polynomial) is listed per index ``j >= 1`` of the target.
    """

    source: KeySequence
    nbar: int
    omega: int
    a: int
    b: int
    sigma: object
    sigma_minpoly: tuple
    target_field: FieldTower
    keys: tuple
    values: tuple
    nbars: tuple
    omegas: tuple
    alphas: tuple
    minpolys: tuple
    names: tuple
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def x1_value(self):
        return self.values[0]

    @property
    def degrees(self) -> tuple:
        return tuple(len(m) - 1 for m in self.minpolys)

    def keys_star(self) -> tuple:
        """The keys in the regular system ``(x1, y1 - sigma)`` over the residue field."""
        L = self.target_field
        names = (self.names[0], self.names[1] + "s")
        x1 = Poly.var(0, L, names)
        ys = Poly.var(1, L, names) + Poly.constant(self.sigma, L, names)
        return tuple(q.change_field(L).subs([x1, ys]) for q in self.keys)

    def target_sequence(self) -> KeySequence:
        """Key sequence of the target built from the pushed-forward data.

        The ring is modelled as ``L[x1, q1]`` with ``q1 = Q_1``; the keys are
        re-derived by the recurrence, so they agree with ``Q_j`` up to units.
        """
        if "seq" not in self._cache:
            src = self.source
            ring = LocalRingModel(self.target_field, self.names)
            specs = []
            for j in range(1, len(self.keys) - 1):
                st = src.steps[j]  # step j+1 of the source
                specs.append(StepSpec(minpoly=self.minpolys[j - 1], beta_next=self.values[j + 1],
                                      alpha=self.alphas[j - 1], field=st.field))
            seq = build_sequence(ring, self.values[0], self.values[1], specs)
            self._cache["seq"] = seq
        return self._cache["seq"]

    def rederivation_report(self) -> dict:
        """Compare the re-derived target sequence with the pushed-forward data."""
        seq = self.target_sequence()
        return {
            "values": tuple(seq.values) == tuple(self.values),
            "nbar": seq.nbars == self.nbars,
            "omega": tuple(st.omega for st in seq.steps) == self.omegas,
            "degree": seq.degrees == self.degrees,
            "n": seq.bounds == tuple(nb * d for nb, d in zip(self.nbars, self.degrees)),
            "source_bounds": seq.bounds == self.source.bounds[1:],
        }


def _names_for(ring: LocalRingModel) -> tuple:
    base = [n.rstrip("0123456789") or n for n in ring.names]
    idx = 1
    for n in ring.names:
        digits = n[len(n.rstrip("0123456789")):]
        if digits:
            idx = max(idx, int(digits) + 1)
    return (f"{base[0]}{idx}", f"{base[1]}{idx}")


def quadratic_transform(seq: KeySequence, names: Sequence[str] | None = None) -> TransformStep:
    """Transform along the valuation; the source needs depth at least two."""
    if seq.depth < 2:
        raise TransformError("a depth-1 source does not determine the residue sigma; "
                             "extend the sequence by one step")
    b0, b1 = seq.values[0], seq.values[1]
    nbar, omega, a, b = transform_invariants(b0, b1)
    st1 = seq.steps[0]
    if nbar != st1.nbar or omega != st1.omega[0]:  # pragma: no cover - same arithmetic
        raise TransformError("step data disagree with the transform invariants")
    k = seq.ring.field
    L = st1.field
    sigma = L(st1.alpha * st1.tau_residue)
    sigma_mp = tuple(minimal_polynomial(sigma, k))

    names = tuple(names) if names else _names_for(seq.ring)
    x1_value = b0 * b - b1 * a
    values = [x1_value]
    keys = [Poly.var(0, k, names)]
    # Laurent exponent vectors over P_0 .. P_N of the new keys
    x1_vec = [0] * (seq.depth + 1)
    x1_vec[0], x1_vec[1] = b, -a
    vecs = [x1_vec]
    deg = 1
    for j in range(1, seq.depth):
        deg *= seq.steps[j - 1].n
        shift = omega * deg
        p = seq.keys[j + 1]
        q = p.monomial_map(lambda e: (nbar * e[0] + omega * e[1], a * e[0] + b * e[1]), names)
        if q.min_degree(0) < shift:
            raise TransformError(f"Q_{j} is not divisible by x1^{shift}")
        keys.append(q.divide_by_monomial((shift, 0)))
        values.append(seq.values[j + 1] - x1_value * shift)
        vec = [-shift * c for c in x1_vec]
        vec[j + 1] += 1
        vecs.append(vec)

    # the first new key cuts out sigma
    q1 = keys[1]
    g = [sum((c for e, c in q1.terms.items() if e[0] == 0 and e[1] == d), k.zero)
         for d in range(q1.degree(1) + 1)]
    if _eval(g, sigma, L) or not _eval([g[i] * i for i in range(1, len(g))], sigma, L):
        raise TransformError("the first pushed-forward key is not a regular parameter")

    nbars, omegas, alphas, minpolys = [], [], [], []
    for j in range(1, seq.depth - 1):
        sub = SubgroupView(values[:j])
        nb = sub.index_in(SubgroupView(values[:j + 1]))
        om = _companion_exponents(values[:j + 1], nb, nbars)
        if om is None:  # pragma: no cover - guaranteed by the value arithmetic
            raise TransformError(f"no companion monomial for the transformed key {j}")
        m = [nb * c for c in vecs[j]]
        for i, w in enumerate(om):
            m = [x - w * c for x, c in zip(m, vecs[i])]
        res = seq.residue_of_exponents(m)
        before, after = seq.steps[j].field_before, seq.steps[j].field
        alpha = descend(res, after)
        mp = tuple(minimal_polynomial(alpha, before))
        if nb != seq.steps[j].nbar or len(mp) - 1 != seq.steps[j].degree:
            raise TransformError(f"transformed step {j} does not match the source step {j + 1}")
        nbars.append(nb)
        omegas.append(om)
        alphas.append(alpha)
        minpolys.append(mp)
    return TransformStep(seq, nbar, omega, a, b, sigma, sigma_mp, L, tuple(keys), tuple(values),
                         tuple(nbars), tuple(omegas), tuple(alphas), tuple(minpolys), names)


def _eval(coeffs, x, field):
    acc = field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def iterate_quadratic(seq: KeySequence, steps: int) -> list[TransformStep]:
    """``steps`` successive transforms; each target sequence feeds the next."""
    out = []
    cur = seq
    for _ in range(steps):
        t = quadratic_transform(cur)
        out.append(t)
        cur = t.target_sequence()
    return out


# -- monomial pairs -------------------------------------------------------------------

@dataclass(frozen=True)
class PairState:
    """Value-level description of a monomial pair ``R -> S``.

    ``u = gamma * x^t`` and ``v = y``.  ``gamma`` is kept symbolically as a
    product of named units with integer exponents; ``gamma_residue`` is its
    residue in the residue tower of ``S`` when known.
    """

    r_seq: KeySequence
    t: int
    x_value: Fraction
    y_value: Fraction
    gamma: tuple
    gamma_residue: object = None
    embed: Callable | None = None
    level: int = 0

    def check(self):
        if self.r_seq.values[0] != self.x_value * self.t:
            raise TransformError("inconsistent value data: nu(u) != t * nu(x)")
        if self.r_seq.values[1] != self.y_value:
            raise TransformError("inconsistent value data: nu(v) != nu(y)")


@dataclass(frozen=True)
class MonomialPairStep:
    level: int
    t: int
    r_invariants: tuple
    s_invariants: tuple
    t1: int
    m: int
    matrix: tuple
    identity_holds: bool
    gamma1: tuple
    gamma1_residue: object
    next_state: PairState | None

    @property
    def stable(self) -> bool:
        return self.t1 == self.t and self.m == 1

    def gamma_str(self) -> str:
        return " * ".join(f"{n}^{e}" if e != 1 else n for n, e in self.gamma1 if e) or "1"


def _matmul(p, q):
    return tuple(tuple(sum(p[i][k] * q[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def _merge(gamma, power, extra):
    out = {}
    for n, e in gamma:
        out[n] = out.get(n, 0) + e * power
    for n, e in extra:
        out[n] = out.get(n, 0) + e
    return tuple(sorted((n, e) for n, e in out.items() if e))


def monomial_pair_transform(pair) -> MonomialPairStep:
    """Transform both sides of a monomial pair once."""
    state = pair.state() if hasattr(pair, "state") else pair
    state.check()
    seq = state.r_seq
    t = state.t
    nR, wR, aR, bR = transform_invariants(seq.values[0], seq.values[1])
    nS, wS, aS, bS = transform_invariants(state.x_value, state.y_value)
    t1 = nS * t * bR - wS * aR
    m = bS * nR - aS * t * wR
    left = ((bR, -aR), (-wR, nR))
    mid = ((t, 0), (0, 1))
    right = ((nS, aS), (wS, bS))
    prod = _matmul(_matmul(left, mid), right)
    holds = prod[0][0] == t1 and prod[1][0] == 0 and prod[1][1] == m and t == t1 * m
    if t1 <= 0:
        raise TransformError("transformed pair has a nonpositive exponent")
    e = t * bR * aS - aR * bS
    ylabel = f"y{state.level + 1}"
    gamma1 = _merge(state.gamma, bR, [(ylabel, e)])
    residue = None
    if state.gamma_residue is not None and state.embed is not None and seq.depth >= 2:
        if nS == nR and wS == t * wR:
            st1 = seq.steps[0]
            sigma_r = state.embed(st1.alpha * st1.tau_residue)
            sigma_s = state.gamma_residue ** wR * sigma_r
            residue = state.gamma_residue ** bR * sigma_s ** e
    nxt = None
    if seq.depth >= 2:
        tr = quadratic_transform(seq)
        r1 = tr.target_sequence()
        x1 = state.x_value * bS - state.y_value * aS
        nxt = PairState(r1, t1, x1, r1.values[1], gamma1, residue, state.embed, state.level + 1)
        if r1.values[0] != t1 * x1:
            raise TransformError("transformed values violate nu(u1) = t1 * nu(x1)")
    return MonomialPairStep(state.level, t, (nR, wR, aR, bR), (nS, wS, aS, bS), t1, m, prod,
                            holds, gamma1, residue, nxt)


@dataclass(frozen=True)
class PairIteration:
    steps: tuple
    input_stable: bool | None
    notes: tuple = ()

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)

    def __getitem__(self, i):
        return self.steps[i]


def iterate_transforms(pair, steps: int) -> PairIteration:
    """Run ``steps`` transforms; needs a key sequence of depth ``>= steps``."""
    state = pair.state() if hasattr(pair, "state") else pair
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if steps > state.r_seq.depth:
        raise TransformError(f"{steps} transforms need a key sequence of depth >= {steps}")
    stable = pair.value_stable() if hasattr(pair, "value_stable") else None
    notes = () if stable is not False else ("input not stable",)
    out = []
    for _ in range(steps):
        step = monomial_pair_transform(state)
        out.append(step)
        state = step.next_state
        if state is None:
            break
    return PairIteration(tuple(out), stable, notes)


def describe_sigma(step: TransformStep) -> str:
    return f"sigma = {format_element(step.sigma)}, minimal polynomial {format_univariate(step.sigma_minpoly)}"
