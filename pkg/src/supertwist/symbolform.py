"""Graded-commutative symbol calculus for the bump-function map s_rho.

A SymbolForm is a Rational combination of terms

    (scalar monomial) * (field part)

The scalar monomial lives in a graded-commutative algebra generated by
the odd coordinate e (written ``eps``), the odd one-forms dz1, dz2, dzb2,
the even functions z2^n (n in Z) and rho[a,b] = d^a/dz2^a d^b/dzb2^b rho,
and user scalar symbols of any parity.  The field part is empty, a single
field symbol x, a bracket [x, y] or a pairing kappa(x, y).  Field symbols
carry parities and stand for (Lie-algebra-valued) forms pulled back from
the z1-line.

Koszul signs are applied whenever an odd object moves past another.
Derivations (dbar, del, d/de, Lie derivatives) act by the graded Leibniz
rule from their values on generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .linalg import Q

# generator keys
EPS = ("eps",)
Z2 = ("z2",)


def DZ(i: int):
    return ("dz", i)


def DZB(i: int):
    return ("dzb", i)


def RHO(a: int = 0, b: int = 0):
    return ("rho", a, b)


def SCALAR(name: str):
    return ("s", name)


class SymbolContext:
    """Registry of user scalars and field symbols with parities."""

    def __init__(self):
        self.scalar_parity: dict = {}
        self.scalar_holo: dict = {}
        self.scalar_order: dict = {}
        self.field_parity: dict = {}
        self.field_holo: dict = {}
        self.field_order: dict = {}

    def scalar(self, name: str, parity: int, holo: int = 0) -> "SymbolForm":
        if name not in self.scalar_parity:
            self.scalar_order[name] = len(self.scalar_order)
        self.scalar_parity[name] = parity % 2
        self.scalar_holo[name] = holo
        return SymbolForm(self, {(((SCALAR(name), 1),), None): Fraction(1)})

    def field(self, name: str, parity: int, holo: int = 0) -> "SymbolForm":
        if name not in self.field_parity:
            self.field_order[name] = len(self.field_order)
        self.field_parity[name] = parity % 2
        self.field_holo[name] = holo
        return SymbolForm(self, {((), ("sym", name)): Fraction(1)})

    # generators
    def gen(self, g, exp: int = 1) -> "SymbolForm":
        if self.gen_parity(g) and exp != 1:
            raise ValueError("odd generators only appear to the first power")
        if exp == 0:
            return self.one()
        return SymbolForm(self, {(((g, exp),), None): Fraction(1)})

    def one(self) -> "SymbolForm":
        return SymbolForm(self, {((), None): Fraction(1)})

    def zero(self) -> "SymbolForm":
        return SymbolForm(self, {})

    def gen_parity(self, g) -> int:
        kind = g[0]
        if kind in ("eps", "dz", "dzb"):
            return 1
        if kind == "s":
            return self.scalar_parity[g[1]]
        return 0

    def gen_key(self, g):
        kind = g[0]
        if kind == "eps":
            return (0, 0, 0)
        if kind == "dz":
            return (1, g[1], 0)
        if kind == "dzb":
            return (1, g[1], 1)
        if kind == "s":
            return (2, self.scalar_order[g[1]], 0)
        if kind == "z2":
            return (3, 0, 0)
        if kind == "rho":
            return (4, g[1], g[2])
        raise KeyError(g)

    def field_part_parity(self, fp) -> int:
        if fp is None:
            return 0
        return sum(self.field_parity[x] for x in fp[1:]) % 2

    # normal forms
    def mono_mul(self, m1: tuple, m2: tuple):
        """Product of two canonical monomials: (sign, monomial) or None."""
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        inv = 0
        odd1 = [self.gen_key(g) for g, _ in m1 if self.gen_parity(g)]
        for g, _ in m2:
            if self.gen_parity(g):
                k = self.gen_key(g)
                inv += sum(1 for k1 in odd1 if k1 > k)
        merged = dict(m1)
        for g, e in m2:
            if g in merged:
                if self.gen_parity(g):
                    return None
                e2 = merged[g] + e
                if e2:
                    merged[g] = e2
                else:
                    del merged[g]
            else:
                merged[g] = e
        for g, e in merged.items():
            if e < 0 and g != Z2:
                raise ValueError(f"negative power of {g}")
        mono = tuple(sorted(merged.items(), key=lambda kv: self.gen_key(kv[0])))
        return (-1) ** inv, mono

    def mono_parity(self, m: tuple) -> int:
        return sum(self.gen_parity(g) for g, _ in m) % 2

    def normal_pair(self, kind: str, x: str, y: str):
        """(sign, canonical field part) for [x, y] or kappa(x, y), or None."""
        px, py = self.field_parity[x], self.field_parity[y]
        if kind == "br":
            swap = -((-1) ** (px * py))
        else:
            swap = (-1) ** (px * py)
        if x == y:
            return None if swap == -1 else (1, (kind, x, y))
        if self.field_order[x] > self.field_order[y]:
            return swap, (kind, y, x)
        return 1, (kind, x, y)


class SymbolForm:
    """Sparse Rational combination of (scalar monomial, field part) terms."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: SymbolContext, terms: dict | None = None):
        self.ctx = ctx
        self.terms = {k: Q(v) for k, v in (terms or {}).items() if v}

    def _new(self, terms) -> "SymbolForm":
        return SymbolForm(self.ctx, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, SymbolForm):
            other = self.ctx.one() * other
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k, 0) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SymbolForm):
            c = Q(other)
            return self._new({k: v * c for k, v in self.terms.items()})
        ctx = self.ctx
        out: dict = {}
        for (m1, f1), c1 in self.terms.items():
            for (m2, f2), c2 in other.terms.items():
                if f1 is not None and f2 is not None:
                    raise ValueError("use bracket or kappa to combine two field parts")
                sign = 1
                if f1 is not None:
                    sign = (-1) ** (ctx.field_part_parity(f1) * ctx.mono_parity(m2))
                res = ctx.mono_mul(m1, m2)
                if res is None:
                    continue
                s, m = res
                key = (m, f1 if f1 is not None else f2)
                v = out.get(key, 0) + sign * s * c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return self._new(out)

    def __rmul__(self, other):
        return self * other

    def _pair(self, other: "SymbolForm", kind: str) -> "SymbolForm":
        ctx = self.ctx
        out: dict = {}
        for (m1, f1), c1 in self.terms.items():
            for (m2, f2), c2 in other.terms.items():
                if f1 is None or f2 is None or f1[0] != "sym" or f2[0] != "sym":
                    raise ValueError("pairing needs a single field symbol on each side")
                sign = (-1) ** (ctx.field_part_parity(f1) * ctx.mono_parity(m2))
                res = ctx.mono_mul(m1, m2)
                if res is None:
                    continue
                s, m = res
                pr = ctx.normal_pair(kind, f1[1], f2[1])
                if pr is None:
                    continue
                s2, fp = pr
                key = (m, fp)
                v = out.get(key, 0) + sign * s * s2 * c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return self._new(out)

    def bracket(self, other: "SymbolForm") -> "SymbolForm":
        """[X, Y] with [sx, ty] = (-1)^{|x||t|} s t [x, y]."""
        return self._pair(other, "br")

    def kappa(self, other: "SymbolForm") -> "SymbolForm":
        """Invariant symmetric pairing kappa(X, Y), same sign rule as the bracket."""
        return self._pair(other, "kappa")

    def eps_split(self):
        """(A0, A1) with self = A0 + eps * A1."""
        a0, a1 = {}, {}
        for (m, f), c in self.terms.items():
            if m and m[0][0] == EPS:
                a1[(m[1:], f)] = c
            else:
                a0[(m, f)] = c
        return self._new(a0), self._new(a1)

    def __eq__(self, other):
        if isinstance(other, SymbolForm):
            return self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # printing
    def _gen_str(self, g, e) -> str:
        kind = g[0]
        if kind == "eps":
            s = "eps"
        elif kind == "dz":
            s = f"dz{g[1]}"
        elif kind == "dzb":
            s = f"dzb{g[1]}"
        elif kind == "s":
            s = g[1]
        elif kind == "z2":
            s = "z2"
        else:
            s = "rho" if g[1:] == (0, 0) else f"rho[{g[1]},{g[2]}]"
        return s if e == 1 else f"{s}^{e}"

    def _field_str(self, fp) -> str:
        if fp is None:
            return ""
        if fp[0] == "sym":
            return fp[1]
        if fp[0] == "br":
            return f"[{fp[1]}, {fp[2]}]"
        return f"kappa({fp[1]}, {fp[2]})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, f), c in sorted(self.terms.items(), key=lambda kv: str(kv[0])):
            body = "*".join([self._gen_str(g, e) for g, e in m] +
                            ([self._field_str(f)] if f else []))
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


@dataclass
class Derivation:
    """Graded derivation given by its values on generators and field symbols.

    ``on_gen(g)`` and ``on_field(name)`` return a SymbolForm or None (zero).
    """

    ctx: SymbolContext
    parity: int
    on_gen: Callable
    on_field: Callable
    name: str = "D"

    def __call__(self, X: SymbolForm) -> SymbolForm:
        ctx = self.ctx
        out = ctx.zero()
        for (m, f), c in X.terms.items():
            prefix_parity = 0
            for k, (g, e) in enumerate(m):
                dg = self.on_gen(g)
                if dg is not None and not dg.is_zero():
                    sign = (-1) ** (self.parity * prefix_parity)
                    pre = SymbolForm(ctx, {(m[:k], None): 1})
                    rest = ctx.gen(g, e - 1) if e != 1 else ctx.one()
                    post = SymbolForm(ctx, {(m[k + 1:], f): 1})
                    out = out + pre * (rest * e) * dg * post * (sign * c)
                prefix_parity += ctx.gen_parity(g) * e
            if f is not None:
                sign = (-1) ** (self.parity * ctx.mono_parity(m))
                pre = SymbolForm(ctx, {(m, None): 1})
                out = out + pre * self._field(f) * (sign * c)
        return out

    def _sym(self, x: str) -> SymbolForm | None:
        return self.on_field(x)

    def _field(self, fp) -> SymbolForm:
        ctx = self.ctx
        if fp[0] == "sym":
            r = self._sym(fp[1])
            return r if r is not None else ctx.zero()
        kind, x, y = fp
        X = SymbolForm(ctx, {((), ("sym", x)): 1})
        Y = SymbolForm(ctx, {((), ("sym", y)): 1})
        out = ctx.zero()
        dx, dy = self._sym(x), self._sym(y)
        sign = (-1) ** (self.parity * ctx.field_parity[x])
        if dx is not None and not dx.is_zero():
            out = out + dx._pair(Y, kind)
        if dy is not None and not dy.is_zero():
            out = out + X._pair(dy, kind) * sign
        return out


# --------------------------------------------------------------------------
# standard derivations


def _derived_field(ctx: SymbolContext, prefix: str, x: str, shift: int, holo: int = 0):
    name = f"{prefix}({x})"
    if name not in ctx.field_parity:
        ctx.field(name, ctx.field_parity[x] + shift, ctx.field_holo[x] + holo)
    return SymbolForm(ctx, {((), ("sym", name)): 1})


def _derived_scalar(ctx: SymbolContext, prefix: str, x: str, shift: int, holo: int = 0):
    name = f"{prefix}({x})"
    if name not in ctx.scalar_parity:
        ctx.scalar(name, ctx.scalar_parity[x] + shift, ctx.scalar_holo[x] + holo)
    return ctx.gen(SCALAR(name))


def dbar_rule(ctx: SymbolContext):
    def on_gen(g):
        if g[0] == "rho":
            return ctx.gen(RHO(g[1], g[2] + 1)) * ctx.gen(DZB(2))
        if g[0] == "s":
            return None if g[1].startswith("dbar(") else _derived_scalar(ctx, "dbar", g[1], 1)
        return None
    return on_gen


def dbar_field(ctx: SymbolContext):
    def on_field(x):
        if x.startswith("dbar("):
            return None
        return _derived_field(ctx, "dbar", x, 1)
    return on_field


def deformed_differential(ctx: SymbolContext, eps_image: bool = True) -> Derivation:
    """D = dbar + z2 d/de.  With eps_image=False the z2 d/de part is dropped."""
    base = dbar_rule(ctx)

    def on_gen(g):
        if g == EPS:
            return ctx.gen(Z2) if eps_image else None
        return base(g)
    return Derivation(ctx, 1, on_gen, dbar_field(ctx), "D")


def del_operator(ctx: SymbolContext) -> Derivation:
    """Holomorphic de Rham operator on C^2 (e is not differentiated)."""
    def on_gen(g):
        if g[0] == "rho":
            return ctx.gen(RHO(g[1] + 1, g[2])) * ctx.gen(DZ(2))
        if g == Z2:
            return ctx.gen(DZ(2))
        if g[0] == "s":
            if g[1].startswith("del("):
                return None
            return _derived_scalar(ctx, "del", g[1], 1, holo=1)
        return None

    def on_field(x):
        if x.startswith("del("):
            return None
        return _derived_field(ctx, "del", x, 1, holo=1)
    return Derivation(ctx, 1, on_gen, on_field, "del")


def lie_d1(ctx: SymbolContext) -> Derivation:
    """Lie derivative along d/dz1: only objects pulled back from the z1-line move."""
    def on_gen(g):
        if g[0] == "s":
            return _derived_scalar(ctx, "d1", g[1], 0)
        return None

    def on_field(x):
        return _derived_field(ctx, "d1", x, 0)
    return Derivation(ctx, 0, on_gen, on_field, "L1")


def lie_d2(ctx: SymbolContext) -> Derivation:
    """Lie derivative along d/dz2 (kills forms dz2, dzb2 and pulled-back symbols)."""
    def on_gen(g):
        if g[0] == "rho":
            return ctx.gen(RHO(g[1] + 1, g[2]))
        if g == Z2:
            return ctx.one()
        return None
    return Derivation(ctx, 0, on_gen, lambda x: None, "L2")
