"""Residue cocycles, a Wick-contraction OPE engine for free bc/beta-gamma
systems, the BRST current, its anomaly and truncated BRST cohomology.

Conventions
-----------
* Residue cocycles use Res kappa(d a, b): the derivative sits on the
  first argument, so the current cocycle is kappa(X, Y) m delta_{m+n,0}.
  For vector fields f d/dz the "current" is f', giving Res f'' g'.
* Free fields: a (odd, values in g), b (odd, g*), gamma (even, V),
  beta (even, V*), with a(z) b(w) ~ 1/(z-w) and gamma(z) beta(w) ~ 1/(z-w)
  on dual bases.  Default weights (h_a, h_b) = (0, 1), (h_gamma, h_beta) = (0, 1).
* Normally ordered monomials of free fields multiply graded-commutatively.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .algebra import (Representation, SuperLieAlgebra, SymmetricTensor, adjoint,
                      kappa_gv, trace_form)
from .linalg import Q, rank, vec_iadd
from .parallel import pmap


# --------------------------------------------------------------------------
# Laurent modes and residue cocycles


@dataclass(frozen=True)
class LaurentMode:
    """X z^m for X a sparse vector in g (or None for the Witt generator z^{m+1} d/dz)."""

    element: tuple
    m: int

    @classmethod
    def of(cls, X, m: int) -> "LaurentMode":
        if X is None:
            return cls((), m)
        if isinstance(X, int):
            X = {X: 1}
        return cls(tuple(sorted((k, Q(v)) for k, v in X.items() if v)), m)

    @property
    def vector(self) -> dict:
        return dict(self.element)


def _lp_deriv(p: dict) -> dict:
    return {k - 1: c * k for k, c in p.items() if k}


def _lp_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            v = out.get(a + b, 0) + x * y
            if v:
                out[a + b] = v
            else:
                out.pop(a + b, None)
    return out


def residue(p: dict) -> Fraction:
    """Coefficient of z^{-1} of a Laurent polynomial {exponent: coeff}."""
    return Q(p.get(-1, 0))


def _kappa_value(X: dict, Y: dict, kappa) -> Fraction:
    total = Fraction(0)
    for i, x in X.items():
        for j, y in Y.items():
            total += x * y * kappa[(i, j)]
    return total


def km_residue_cocycle(X, m: int, Y, n: int, kappa: SymmetricTensor) -> Fraction:
    """Res_z kappa(d/dz(X z^m), Y z^n)."""
    if isinstance(X, int):
        X = {X: 1}
    if isinstance(Y, int):
        Y = {Y: 1}
    r = residue(_lp_mul(_lp_deriv({m: Fraction(1)}), {n: Fraction(1)}))
    return r * _kappa_value(X, Y, kappa) if r else Fraction(0)


def vir_residue_cocycle(m: int, n: int, normalized: bool = False) -> Fraction:
    """Res_z f'' g' for f = z^{m+1}, g = z^{n+1}; divided by 24 if normalized."""
    f = {m + 1: Fraction(1)}
    g = {n + 1: Fraction(1)}
    r = residue(_lp_mul(_lp_deriv(_lp_deriv(f)), _lp_deriv(g)))
    return r / 24 if normalized else r


def witt_bracket(m: int, n: int) -> dict:
    """[z^{m+1} d, z^{n+1} d] as {k: coeff} in the basis l_k = z^{k+1} d/dz."""
    f = {m + 1: Fraction(1)}
    g = {n + 1: Fraction(1)}
    comp = _lp_mul(f, _lp_deriv(g))
    vec_iadd(comp, _lp_mul(g, _lp_deriv(f)), -1)
    return {k - 1: c for k, c in comp.items()}


def km_cocycle_defects(g: SuperLieAlgebra, kappa: SymmetricTensor, N: int = 5) -> list:
    """Triples violating the graded cyclic identity on g[z, 1/z].

    The identity is s(a,c) w([a,b],c) + s(b,a) w([b,c],a) + s(c,b) w([c,a],b) = 0
    with s(x,y) = (-1)^{|x||y|}.
    """
    bad = []
    rng = range(-N, N + 1)
    par = g.parity

    def w(vec, m, Y, n):
        return km_residue_cocycle(vec, m, Y, n, kappa) if vec else Fraction(0)

    for i, j, k in itertools.product(range(g.dim), repeat=3):
        ij, jk, ki = g.bracket_basis(i, j), g.bracket_basis(j, k), g.bracket_basis(k, i)
        for m, n, p in itertools.product(rng, rng, rng):
            s = ((-1) ** (par[i] * par[k]) * w(ij, m + n, {k: 1}, p)
                 + (-1) ** (par[j] * par[i]) * w(jk, n + p, {i: 1}, m)
                 + (-1) ** (par[k] * par[j]) * w(ki, p + m, {j: 1}, n))
            if s:
                bad.append(((i, m), (j, n), (k, p)))
    return bad


def km_antisymmetry_defects(g: SuperLieAlgebra, kappa, N: int = 5) -> list:
    """Pairs violating w(b, a) = -(-1)^{|a||b|} w(a, b)."""
    bad = []
    for i, j in itertools.product(range(g.dim), repeat=2):
        sign = -(-1) ** (g.parity[i] * g.parity[j])
        for m, n in itertools.product(range(-N, N + 1), repeat=2):
            if km_residue_cocycle(j, n, i, m, kappa) != sign * km_residue_cocycle(i, m, j, n, kappa):
                bad.append(((i, m), (j, n)))
    return bad


def vir_cocycle_defects(N: int = 5, normalized: bool = False) -> list:
    bad = []
    rng = range(-N, N + 1)

    def w(vec, p):
        return sum((c * vir_residue_cocycle(k, p, normalized) for k, c in vec.items()),
                   Fraction(0))

    for m, n, p in itertools.product(rng, rng, rng):
        s = w(witt_bracket(m, n), p) + w(witt_bracket(n, p), m) + w(witt_bracket(p, m), n)
        if s:
            bad.append((m, n, p))
    for m, n in itertools.product(rng, rng):
        if vir_residue_cocycle(m, n) != -vir_residue_cocycle(n, m):
            bad.append((m, n))
    return bad


# --------------------------------------------------------------------------
# free fields and composite fields


@dataclass(frozen=True)
class FreeField:
    """A multiplet of free generators phi^0 .. phi^{dim-1}."""

    name: str
    parity: int
    weight: Fraction
    dim: int
    module: str
    ghost: int = 0
    charge: int = 0


class FreeFieldSystem:
    """Free fields with OPE phi^i(z) psi^j(w) ~ C delta_ij / (z-w) for listed pairs."""

    def __init__(self, fields, pairings: dict):
        self.fields = {f.name: f for f in fields}
        self.order = {f.name: k for k, f in enumerate(fields)}
        self._pair = {}
        for (x, y), c in pairings.items():
            fx, fy = self.fields[x], self.fields[y]
            if fx.dim != fy.dim:
                raise ValueError(f"pairing {x}, {y} between different dimensions")
            if Q(fx.weight) + Q(fy.weight) != 1:
                raise ValueError("paired weights must add up to 1")
            c = Q(c)
            if c == 0:
                raise ValueError("pairings must be nondegenerate")
            self._pair[(x, y)] = c
            # psi(z) phi(w) ~ -(-1)^{|phi||psi|} C / (z-w)
            self._pair[(y, x)] = -((-1) ** (fx.parity * fy.parity)) * c

    def pairing(self, x: str, y: str) -> Fraction:
        return self._pair.get((x, y), Fraction(0))

    def parity(self, gen) -> int:
        return self.fields[gen[0]].parity

    def key(self, gen):
        return (self.order[gen[0]], gen[1], gen[2])

    def gen(self, name: str, idx: int = 0, deriv: int = 0) -> "CompositeField":
        f = self.fields.get(name)
        if f is None:
            raise ValueError(f"unsupported generator {name!r}")
        if not 0 <= idx < f.dim:
            raise ValueError(f"component {idx} out of range for {name}")
        return CompositeField(self, {((name, idx, deriv),): Fraction(1)})

    def one(self) -> "CompositeField":
        return CompositeField(self, {(): Fraction(1)})

    def canonical(self, gens):
        """Sort a sequence of generators; return (sign, tuple) or None."""
        gens = list(gens)
        keys = [self.key(g) for g in gens]
        odd = [k for k, g in zip(keys, gens) if self.parity(g)]
        if len(set(odd)) != len(odd):
            return None
        inv = 0
        for a in range(len(odd)):
            for b in range(a + 1, len(odd)):
                if odd[a] > odd[b]:
                    inv += 1
        order = sorted(range(len(gens)), key=lambda k: keys[k])
        return (-1) ** inv, tuple(gens[k] for k in order)


def bc_betagamma_system(g_dim: int, v_dim: int, weights=None) -> FreeFieldSystem:
    """The a, b, gamma, beta system; weights = (h_a, h_b, h_gamma, h_beta)."""
    ha, hb, hg, hbeta = [Q(x) for x in (weights or (0, 1, 0, 1))]
    fields = [
        FreeField("a", 1, ha, g_dim, "g", ghost=1),
        FreeField("b", 1, hb, g_dim, "g*", ghost=-1),
        FreeField("gamma", 0, hg, v_dim, "V", charge=1),
        FreeField("beta", 0, hbeta, v_dim, "V*", charge=-1),
    ]
    return FreeFieldSystem(fields, {("a", "b"): 1, ("gamma", "beta"): 1})


class CompositeField:
    """Rational combination of normally ordered monomials in free generators.

    A monomial is a sorted tuple of generators (name, component, derivative
    order); even generators may repeat.
    """

    __slots__ = ("system", "terms")

    def __init__(self, system: FreeFieldSystem, terms: dict | None = None):
        self.system = system
        self.terms = {k: Q(v) for k, v in (terms or {}).items() if v}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        vec_iadd(out, other.terms, 1)
        return CompositeField(self.system, out)

    def __sub__(self, other):
        out = dict(self.terms)
        vec_iadd(out, other.terms, -1)
        return CompositeField(self.system, out)

    def __neg__(self):
        return self * -1

    def __mul__(self, other):
        if not isinstance(other, CompositeField):
            c = Q(other)
            return CompositeField(self.system, {k: v * c for k, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                res = self.system.canonical(m1 + m2)
                if res is None:
                    continue
                s, m = res
                vec_iadd(out, {m: s * c1 * c2})
        return CompositeField(self.system, out)

    def __rmul__(self, c):
        return self * c

    def __eq__(self, other):
        return isinstance(other, CompositeField) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def derivative(self, k: int = 1) -> "CompositeField":
        out = self
        for _ in range(k):
            acc: dict = {}
            for m, c in out.terms.items():
                for pos, (name, idx, d) in enumerate(m):
                    res = self.system.canonical(m[:pos] + ((name, idx, d + 1),) + m[pos + 1:])
                    if res is not None:
                        vec_iadd(acc, {res[1]: res[0] * c})
            out = CompositeField(self.system, acc)
        return out

    def _mono_attr(self, m, attr) -> Fraction:
        total = Fraction(0)
        for name, _, d in m:
            f = self.system.fields[name]
            total += Q(getattr(f, attr)) + (d if attr == "weight" else 0)
        return total

    def _homogeneous(self, attr):
        vals = {self._mono_attr(m, attr) for m in self.terms}
        if len(vals) > 1:
            return None
        return vals.pop() if vals else Fraction(0)

    @property
    def weight(self):
        return self._homogeneous("weight")

    @property
    def ghost_number(self):
        return self._homogeneous("ghost")

    @property
    def parity(self):
        ps = {sum(self.system.parity(g) for g in m) % 2 for m in self.terms}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda kv: [self.system.key(g) for g in kv[0]]):
            body = " ".join(("d" * d + f"{n}{i}") if d <= 1 else f"d^{d}{n}{i}"
                            for n, i, d in m) or "1"
            parts.append(f"{c}*:{body}:" if c != 1 else f":{body}:")
        return " + ".join(parts)

    __repr__ = __str__


def _contraction(system: FreeFieldSystem, x, y):
    """d_z^p d_w^q [C/(z-w)] = C (-1)^p (p+q)! (z-w)^{-(p+q+1)}; returns (coeff, order)."""
    if x[1] != y[1]:
        return None
    c = system.pairing(x[0], y[0])
    if not c:
        return None
    p, q = x[2], y[2]
    return c * (-1) ** p * factorial(p + q), p + q + 1


def _matchings(A, B, system):
    """All nonempty partial matchings between positions of A and B."""
    out = []

    def rec(i, used, cur):
        if i == len(A):
            if cur:
                out.append(list(cur))
            return
        rec(i + 1, used, cur)
        for j in range(len(B)):
            if j in used:
                continue
            ctr = _contraction(system, A[i], B[j])
            if ctr is None:
                continue
            cur.append((i, j, ctr))
            rec(i + 1, used | {j}, cur)
            cur.pop()

    rec(0, frozenset(), [])
    return out


def _perm_sign(seq, target, parity) -> int:
    """Koszul sign of rearranging the odd entries of seq (positions) into target order."""
    pos = {p: k for k, p in enumerate(target)}
    odd = [pos[p] for p in seq if parity[p]]
    inv = sum(1 for a in range(len(odd)) for b in range(a + 1, len(odd)) if odd[a] > odd[b])
    return (-1) ** inv


def wick_ope(A: CompositeField, B: CompositeField, contractions=None) -> dict:
    """Singular part of A(z) B(w): {pole order n >= 1: field at w}.

    Sums over all sets of Wick contractions; uncontracted fields of A are
    Taylor expanded around w.  ``contractions`` optionally restricts the
    number of contractions (a set of integers).
    """
    system = A.system
    poles: dict = {}
    for mA, cA in A.terms.items():
        for mB, cB in B.terms.items():
            seq = list(mA) + list(mB)
            parity = [system.parity(g) for g in seq]
            nA = len(mA)
            for match in _matchings(mA, mB, system):
                if contractions is not None and len(match) not in contractions:
                    continue
                ia = {i for i, _, _ in match}
                jb = {j for _, j, _ in match}
                restA = [i for i in range(nA) if i not in ia]
                restB = [nA + j for j in range(len(mB)) if j not in jb]
                target = restA + restB
                for i, j, _ in match:
                    target += [i, nA + j]
                sign = _perm_sign(list(range(len(seq))), target, parity)
                coeff = Fraction(sign) * cA * cB
                order = 0
                for _, _, (c, o) in match:
                    coeff *= c
                    order += o
                fa = CompositeField(system, {tuple(mA[i] for i in restA): 1})
                fb = CompositeField(system, {tuple(mB[j - nA] for j in restB): 1})
                # restA is already canonical (sub-sequence of a sorted monomial)
                der = fa
                for k in range(order):
                    term = (der * fb) * (coeff / factorial(k))
                    if not term.is_zero():
                        poles[order - k] = poles.get(order - k, CompositeField(system)) + term
                    der = der.derivative()
    return {n: f for n, f in sorted(poles.items(), reverse=True) if not f.is_zero()}


def skew_ope(ope: dict, pa: int, pb: int) -> dict:
    """OPE of B(z) A(w) from that of A(z) B(w) by the skew-symmetry relation.

    With A_(n) B the coefficient of (z-w)^{-n-1}:
    B_(n) A = (-1)^{|A||B|} sum_j (-1)^{n+j+1} d^j (A_(n+j) B) / j!.
    """
    if not ope:
        return {}
    system = next(iter(ope.values())).system
    top = max(ope)
    out = {}
    for pole in range(1, top + 1):
        n = pole - 1
        acc = CompositeField(system)
        for j in range(0, top - n):
            src = ope.get(n + j + 1)
            if src is None:
                continue
            acc = acc + src.derivative(j) * (Fraction((-1) ** (n + j + 1), factorial(j)))
        acc = acc * (-1) ** (pa * pb)
        if not acc.is_zero():
            out[pole] = acc
    return out


# --------------------------------------------------------------------------
# BRST current and anomaly


def _check_ordinary(g: SuperLieAlgebra, V: Representation):
    if g.odd_dim:
        raise ValueError("the BRST construction expects an ordinary Lie algebra")
    if V.algebra is not g:
        raise ValueError("representation is over a different algebra")


# The cubic ghost term is c :b_m f^m_kl a^k a^l:; in this ordering the
# classical simple-pole terms cancel for c = -1/2 (i.e. 1/2 <b, [a, a]> with
# the bracket acting on the right).
GHOST_COEFF = Fraction(-1, 2)


def brst_current(g: SuperLieAlgebra, V: Representation, ghost_coeff=GHOST_COEFF,
                 weights=None):
    """J = :<beta, [a, gamma]>: + c :<b, [a, a]>:  with c = GHOST_COEFF by default.

    Returns (system, J).  <beta, [a, gamma]> = beta_i rho(X_k)^i_j a^k gamma^j and
    <b, [a, a]> = b_m f_{kl}^m a^k a^l.
    """
    _check_ordinary(g, V)
    V = V.expanded()
    sysm = bc_betagamma_system(g.dim, V.dim, weights)
    J = CompositeField(sysm)
    for k in range(g.dim):
        for (i, j), x in sorted(V.action[k].items()):
            J = J + sysm.gen("beta", i) * sysm.gen("a", k) * sysm.gen("gamma", j) * x
    for k in range(g.dim):
        for l in range(g.dim):
            for m, x in g.bracket_basis(k, l).items():
                J = J + sysm.gen("b", m) * sysm.gen("a", k) * sysm.gen("a", l) * (x * Q(ghost_coeff))
    return sysm, J


def km_currents(g: SuperLieAlgebra, V: Representation, weights=None):
    """J^k = :beta_i rho(X_k)^i_j gamma^j: for each basis element X_k."""
    _check_ordinary(g, V)
    V = V.expanded()
    sysm = bc_betagamma_system(g.dim, V.dim, weights)
    out = []
    for k in range(g.dim):
        J = CompositeField(sysm)
        for (i, j), x in sorted(V.action[k].items()):
            J = J + sysm.gen("beta", i) * sysm.gen("gamma", j) * x
        out.append(J)
    return sysm, out


@dataclass
class KMCheck:
    level: SymmetricTensor
    level_over_trace: Fraction | None
    bracket_ok: bool
    bracket_sign: int
    higher_poles: bool

    def to_json(self) -> dict:
        return {"level_tensor": self.level.to_json(),
                "level_over_trace_V": None if self.level_over_trace is None
                else str(self.level_over_trace),
                "simple_pole_is_bracket": self.bracket_ok,
                "bracket_sign": self.bracket_sign,
                "poles_above_two": self.higher_poles}


def km_current_check(g: SuperLieAlgebra, V: Representation) -> KMCheck:
    """J^k(z) J^l(w) ~ K_kl/(z-w)^2 + s f_kl^m J^m/(z-w); finds K and the sign s."""
    sysm, Js = km_currents(g, V)
    level = {}
    signs = set()
    ok = True
    higher = False
    for k in range(g.dim):
        for l in range(g.dim):
            ope = wick_ope(Js[k], Js[l])
            if any(n > 2 for n in ope):
                higher = True
            p2 = ope.get(2, CompositeField(sysm))
            if any(m for m in p2.terms):
                ok = False
            if k <= l:
                level[(k, l)] = p2.terms.get((), Fraction(0))
            expect = CompositeField(sysm)
            for m, x in g.bracket_basis(k, l).items():
                expect = expect + Js[m] * x
            p1 = ope.get(1, CompositeField(sysm))
            if expect.is_zero() and p1.is_zero():
                continue
            if p1 == expect:
                signs.add(1)
            elif p1 == -expect:
                signs.add(-1)
            else:
                ok = False
    K = SymmetricTensor(2, g.dim, level)
    ratio = K.ratio_to(trace_form(V, 2))
    sign = signs.pop() if len(signs) == 1 else 0
    return KMCheck(K, ratio, ok and sign != 0, sign, higher)


@dataclass
class AnomalyReport:
    """Symmetric part of the coefficient of :da^k a^l: in the simple pole of J(z)J(w)."""

    algebra: str
    module: str
    tensor: SymmetricTensor
    kappa: SymmetricTensor
    constant: Fraction | None
    antisymmetric_part: dict
    classical_residue: int
    ghost_coeff: Fraction

    @property
    def vanishes(self) -> bool:
        return self.tensor.is_zero()

    @property
    def proportional(self) -> bool:
        if self.kappa.is_zero():
            return self.tensor.is_zero()
        return self.constant is not None

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra, "module": self.module,
            "anomaly_tensor": self.tensor.to_json(),
            "kappa_gv": self.kappa.to_json(),
            "anomaly_over_kappa": None if self.constant is None else _frac(self.constant),
            "anomaly_vanishes": self.vanishes,
            "classical_simple_pole_terms": self.classical_residue,
            "ghost_cubic_coefficient": _frac(self.ghost_coeff),
        }


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def brst_anomaly(g: SuperLieAlgebra, V: Representation, ghost_coeff=GHOST_COEFF) -> AnomalyReport:
    """Obstruction to Q^2 = 0 read off from J(z) J(w).

    The simple pole of J(z)J(w) is a total derivative plus
    sum_{k,l} A_kl :(d a^k) a^l:; the symmetric part of A is the anomaly
    (its antisymmetric part is d of something).  Terms with three or more
    fields in the simple pole are counted as the classical residue, which
    vanishes for the default ghost coefficient.
    """
    sysm, J = brst_current(g, V, ghost_coeff)
    ope = wick_ope(J, J)
    p1 = ope.get(1, CompositeField(sysm))
    A: dict = {}
    classical = 0
    for m, c in p1.terms.items():
        if len(m) == 2 and all(x[0] == "a" for x in m) and sorted(x[2] for x in m) == [0, 1]:
            res = sysm.canonical([x for x in m if x[2] == 1] + [x for x in m if x[2] == 0])
            s, _ = res
            k = next(x[1] for x in m if x[2] == 1)
            l = next(x[1] for x in m if x[2] == 0)
            A[(k, l)] = A.get((k, l), 0) + s * c
        elif len(m) >= 3:
            classical += 1
    sym, anti = {}, {}
    for k in range(g.dim):
        for l in range(k, g.dim):
            s = (A.get((k, l), 0) + A.get((l, k), 0)) / 2
            if s:
                sym[(k, l)] = s
            d = (A.get((k, l), 0) - A.get((l, k), 0)) / 2
            if d:
                anti[f"{k},{l}"] = str(d)
    T = SymmetricTensor(2, g.dim, sym)
    kap = kappa_gv(g, V)
    const = T.ratio_to(kap)
    return AnomalyReport(g.label, V.label, T, kap, const, anti, classical, Q(ghost_coeff))


# --------------------------------------------------------------------------
# Fock space truncation and BRST cohomology


class FockTruncation:
    """Fock module of the free fields: states of weight <= W in given charge sectors.

    A basis state is a sorted tuple of creation modes ((name, idx, n), count).
    """

    def __init__(self, system: FreeFieldSystem, W: int, charges=(0,)):
        self.system = system
        self.W = _num(W)
        self.charges = tuple(charges)
        self.states = self._enumerate()
        self.index = {s: k for k, s in enumerate(self.states)}

    def mode_key(self, g):
        return (self.system.order[g[0]], g[1], g[2])

    def weight(self, state):
        return sum(-g[2] * c for g, c in state)

    def attr(self, state, name) -> int:
        return sum(getattr(self.system.fields[g[0]], name) * c for g, c in state)

    def _enumerate(self) -> list:
        sysm = self.system
        pos, zero_even, zero_odd = [], [], []
        for f in sysm.fields.values():
            h = _num(f.weight)
            n = -h
            while -n <= self.W:
                for i in range(f.dim):
                    g = (f.name, i, n)
                    if n == 0:
                        (zero_odd if f.parity else zero_even).append(g)
                    else:
                        pos.append(g)
                n -= 1
        pos.sort(key=self.mode_key)
        out = []

        def rec(k, budget, cur):
            if k == len(pos):
                self._complete(cur, zero_even, zero_odd, out)
                return
            g = pos[k]
            w = -g[2]
            par = sysm.fields[g[0]].parity
            maxc = 1 if par else int(budget // w)
            for c in range(0, maxc + 1):
                if c * w > budget:
                    break
                rec(k + 1, budget - c * w, cur + ([(g, c)] if c else []))

        rec(0, self.W, [])
        out.sort(key=lambda s: (self.weight(s), [(self.mode_key(g), c) for g, c in s]))
        return out

    def _complete(self, cur, zero_even, zero_odd, out):
        sysm = self.system
        q_pos = sum(sysm.fields[g[0]].charge * c for g, c in cur)
        for q in self.charges:
            # zero-weight even creators must balance the charge
            by_charge: dict = {}
            for g in zero_even:
                by_charge.setdefault(sysm.fields[g[0]].charge, []).append(g)
            for ch, gens in by_charge.items():
                if ch == 0:
                    raise ValueError("zero-weight even generators without charge make "
                                     "the truncation infinite")
            combos = [[]]
            need = q - q_pos
            if by_charge:
                options = []
                for ch, gens in by_charge.items():
                    options.append((ch, gens))
                combos = []
                if len(options) > 1:
                    raise ValueError("several charged zero-weight families are not supported")
                ch, gens = options[0]
                if need % ch == 0 and need // ch >= 0:
                    for multi in itertools.combinations_with_replacement(gens, need // ch):
                        counts: dict = {}
                        for g in multi:
                            counts[g] = counts.get(g, 0) + 1
                        combos.append(sorted(counts.items(), key=lambda kv: self.mode_key(kv[0])))
            elif need != 0:
                continue
            for zc in combos:
                for r in range(len(zero_odd) + 1):
                    for odd in itertools.combinations(zero_odd, r):
                        state = list(cur) + zc + [(g, 1) for g in odd]
                        state.sort(key=lambda kv: self.mode_key(kv[0]))
                        out.append(tuple(state))

    # mode operators
    def create(self, g, state):
        """(coeff, new state) for g acting on a basis state, g a creator."""
        par = self.system.fields[g[0]].parity
        key = self.mode_key(g)
        st = list(state)
        before_odd = 0
        for k, (h, c) in enumerate(st):
            hk = self.mode_key(h)
            if hk == key:
                if par:
                    return None
                st[k] = (h, c + 1)
                return 1, tuple(st)
            if hk > key:
                st.insert(k, (g, 1))
                return (-1) ** (par * before_odd), tuple(st)
            before_odd += c * self.system.fields[h[0]].parity
        st.append((g, 1))
        return (-1) ** (par * before_odd), tuple(st)

    def annihilate(self, g, state) -> list:
        """[(coeff, new state)] for an annihilation mode acting on a basis state."""
        sysm = self.system
        par = sysm.fields[g[0]].parity
        out = []
        before_odd = 0
        for k, (h, c) in enumerate(state):
            if h[1] == g[1] and h[2] == -g[2]:
                pr = sysm.pairing(g[0], h[0])
                if pr:
                    coeff = _num(pr) * c * (-1) ** (par * before_odd)
                    st = list(state)
                    if c == 1:
                        del st[k]
                    else:
                        st[k] = (h, c - 1)
                    out.append((coeff, tuple(st)))
            before_odd += c * sysm.fields[h[0]].parity
        return out


def _num(x):
    """Fractions with denominator 1 become ints (faster hashing and arithmetic)."""
    x = Q(x)
    return x.numerator if x.denominator == 1 else x


class ZeroMode:
    """Q = J_0 (the residue of a weight one current J) acting on a Fock truncation."""

    def __init__(self, J: CompositeField, F: FockTruncation):
        if J.terms and J.weight != 1:
            raise ValueError("the current must have conformal weight 1")
        self.F = F
        sysm = F.system
        self.h = {n: _num(f.weight) for n, f in sysm.fields.items()}
        self.partners = {n: [m for m in sysm.fields if sysm.pairing(n, m)]
                         for n in sysm.fields}
        self.terms = []
        for m, c in sorted(J.terms.items(), key=lambda kv: [sysm.key(g) for g in kv[0]]):
            if any(d for _, _, d in m):
                raise ValueError("derivative generators are not supported in the mode expansion")
            fields = tuple((n, i) for n, i, _ in m)
            parity = tuple(sysm.fields[n].parity for n, _, _ in m)
            k = len(fields)
            splits = []
            for mask in range(1, 2 ** k):
                ann = [i for i in range(k) if mask >> i & 1]
                cre = [i for i in range(k) if not mask >> i & 1]
                # normal order: creators (in order) then annihilators (in order)
                sign = _perm_sign(list(range(k)), cre + ann, parity)
                splits.append((ann, cre, _num(sign * c)))
            self.terms.append((fields, splits))

    def __call__(self, state) -> dict:
        F = self.F
        out: dict = {}
        bound = F.weight(state) + F.W
        present: dict = {}
        for g, _ in state:
            present.setdefault((g[0], g[1]), []).append(g[2])
        for fields, splits in self.terms:
            for ann, cre, coeff in splits:
                choices = []
                for i in ann:
                    name, idx = fields[i]
                    h = self.h[name]
                    opts = {-n for p in self.partners[name] for n in present.get((p, idx), ())
                            if -n > -h}
                    if not opts:
                        break
                    choices.append(sorted(opts))
                else:
                    hs = tuple(self.h[fields[i][0]] for i in cre)
                    for ann_modes in itertools.product(*choices):
                        rest = -sum(ann_modes)
                        for cre_modes in _creator_modes(hs, rest, bound):
                            vec = {state: coeff}
                            for i, n in zip(reversed(ann), reversed(ann_modes)):
                                g = (fields[i][0], fields[i][1], n)
                                nxt: dict = {}
                                for s, c in vec.items():
                                    for c2, s2 in F.annihilate(g, s):
                                        nxt[s2] = nxt.get(s2, 0) + c * c2
                                vec = {s: c for s, c in nxt.items() if c}
                                if not vec:
                                    break
                            for i, n in zip(reversed(cre), reversed(cre_modes)):
                                if not vec:
                                    break
                                g = (fields[i][0], fields[i][1], n)
                                nxt = {}
                                for s, c in vec.items():
                                    r = F.create(g, s)
                                    if r is not None:
                                        nxt[r[1]] = nxt.get(r[1], 0) + c * r[0]
                                vec = {s: c for s, c in nxt.items() if c}
                            for s, c in vec.items():
                                v = out.get(s, 0) + c
                                if v:
                                    out[s] = v
                                else:
                                    del out[s]
        return out


def zero_mode_action(J: CompositeField, F: FockTruncation, state) -> dict:
    """Q = J_0 applied to a single basis state."""
    return ZeroMode(J, F)(state)


@lru_cache(maxsize=None)
def _creator_modes(hs, total, bound):
    """Tuples of creator modes n_i <= -h_i summing to total, each >= -bound."""
    if not hs:
        return [()] if total == 0 else []
    h = hs[0]
    if len(hs) == 1:
        return [(total,)] if total <= -h and -total <= bound else []
    out = []
    n = -h
    while -n <= bound:
        out.extend((n,) + rest for rest in _creator_modes(hs[1:], total - n, bound))
        n -= 1
    return out


@dataclass
class BRSTRefusal(Exception):
    """Raised when Q^2 != 0 on the truncation."""

    report: dict

    def __str__(self):
        return f"Q^2 != 0: {self.report.get('q_squared', {})}"


@dataclass
class BRSTResult:
    algebra: str
    module: str
    W: int
    charges: tuple
    n_states: int
    q_squared_zero: bool
    dims: dict
    weights: tuple
    anomaly: AnomalyReport | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra, "module": self.module, "max_weight": self.W,
            "charge_sectors": list(self.charges), "states": self.n_states,
            "conformal_weights": {"a": str(self.weights[0]), "b": str(self.weights[1]),
                                  "gamma": str(self.weights[2]), "beta": str(self.weights[3])},
            "q_squared_zero": self.q_squared_zero,
            "cohomology_dims": {f"({_frac(w)}, {gh})": d for (w, gh), d in sorted(self.dims.items())},
            **self.extra,
        }


def _cartan_charges(g: SuperLieAlgebra, V: Representation) -> list:
    """Diagonal charges commuting with Q: Cartan weights and per-component beta-gamma numbers."""
    ad = adjoint(g)
    out = []
    for k in range(g.dim):
        mV, mA = V.action[k], ad.action[k]
        if all(r == c for r, c in mV) and all(r == c for r, c in mA):
            table = {}
            for (r, _), x in mV.items():
                table[("gamma", r)] = x
                table[("beta", r)] = -x
            for (r, _), x in mA.items():
                table[("a", r)] = x
                table[("b", r)] = -x
            out.append(table)
    # connected components of V under the action
    parent = list(range(V.dim))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in V.action:
        for (r, c) in m:
            parent[find(r)] = find(c)
    comps = sorted({find(i) for i in range(V.dim)})
    if len(comps) > 1:
        for root in comps:
            table = {}
            for i in range(V.dim):
                if find(i) == root:
                    table[("gamma", i)] = 1
                    table[("beta", i)] = -1
            out.append(table)
    return out


def _state_charges(state, tables) -> tuple:
    return tuple(sum((t.get((g[0], g[1]), 0) * c for g, c in state), Fraction(0))
                 for t in tables)


def brst_setup(g: SuperLieAlgebra, V: Representation, W: int = 2, charges=(0,),
               weights=None, ghost_coeff=GHOST_COEFF):
    """(free field system, BRST current, Fock truncation) for g acting on V."""
    Vx = V.expanded()
    sysm, J = brst_current(g, Vx, ghost_coeff, weights)
    if J.terms and J.weight != 1:
        raise ValueError("the BRST current must have conformal weight 1")
    F = FockTruncation(sysm, W, charges)
    return sysm, J, F


def q_matrix(J: CompositeField, F: FockTruncation) -> dict:
    """{state index: image vector keyed by state index} for Q = J_0."""
    op = ZeroMode(J, F)

    def col(k):
        img = op(F.states[k])
        vec = {}
        for s, c in img.items():
            j = F.index.get(s)
            if j is None:
                raise ValueError("Q leaves the truncation")
            vec[j] = c
        return vec
    cols = pmap(col, range(len(F.states)))
    return dict(enumerate(cols))


def q_squared_defect(Qm: dict) -> dict:
    nnz, norm2, worst = 0, Fraction(0), Fraction(0)
    for k, v in Qm.items():
        out: dict = {}
        for j, c in v.items():
            vec_iadd(out, Qm[j], c)
        nnz += len(out)
        for x in out.values():
            norm2 += x * x
            worst = max(worst, abs(x))
    return {"nonzero_entries": nnz, "frobenius_norm_squared": _frac(norm2),
            "max_abs_entry": _frac(worst)}


def brst_cohomology(g: SuperLieAlgebra, V: Representation, W: int = 2, charges=(0,),
                    weights=None, ghost_coeff=GHOST_COEFF) -> BRSTResult:
    """Cohomology of Q = J_0 on the weight <= W Fock truncation, by (weight, ghost).

    Refuses (BRSTRefusal) when the anomaly is nonzero; the refusal carries
    the Q^2 defect on the truncation.
    """
    _check_ordinary(g, V)
    anomaly = brst_anomaly(g, V, ghost_coeff)
    sysm, J, F = brst_setup(g, V, W, charges, weights, ghost_coeff)
    wts = tuple(Q(sysm.fields[n].weight) for n in ("a", "b", "gamma", "beta"))
    Qm = q_matrix(J, F)
    defect = q_squared_defect(Qm)
    zero = defect["nonzero_entries"] == 0
    if not anomaly.vanishes or not zero:
        raise BRSTRefusal({
            "algebra": g.label, "module": V.label, "max_weight": W,
            "anomaly": anomaly.to_json(), "q_squared": defect,
            "reason": "nonzero anomaly: Q^2 != 0" if not anomaly.vanishes
            else "Q^2 != 0 on the truncation",
        })
    tables = _cartan_charges(g, V.expanded())
    blocks: dict = {}
    for k, s in enumerate(F.states):
        key = (F.weight(s), F.attr(s, "ghost"), _state_charges(s, tables))
        blocks.setdefault(key, []).append(k)
    # verify that Q respects the splitting
    where = {}
    for key, ks in blocks.items():
        for k in ks:
            where[k] = key
    for k, v in Qm.items():
        w, gh, ch = where[k]
        for j in v:
            if where[j] != (w, gh + 1, ch):
                raise ValueError("Q does not preserve the block decomposition")

    def block_rank(key):
        return rank(Qm[k] for k in blocks[key])

    keys = sorted(blocks)
    ranks = dict(zip(keys, pmap(block_rank, keys)))
    dims: dict = {}
    for (w, gh, ch), ks in blocks.items():
        r_out = ranks[(w, gh, ch)]
        r_in = ranks.get((w, gh - 1, ch), 0)
        h = len(ks) - r_out - r_in
        dims[(w, gh)] = dims.get((w, gh), 0) + h
    extra = {"vacuum_in_basis": () in F.index,
             "vacuum_is_cocycle": not Qm.get(F.index.get((), -1), {}),
             "q_squared": defect, "blocks": len(blocks)}
    return BRSTResult(g.label, V.label, W, tuple(charges), len(F.states), True, dims, wts,
                      anomaly, extra)
