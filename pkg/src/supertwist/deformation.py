"""Koszul deformations by f d/de: polynomial complexes, Jacobian rings, bump integrals.

Dolbeault complexes are replaced by their holomorphic polynomial models
C[z_1..z_d] with a degree cap.  A deformation f d/de (f even, no odd
variables) acts by the graded commutator, which is computed with the
superfields engine rather than hard-coded.

Gradings: with n = deg f, give z weight 1, e weight n, d/dz weight -1 and
d/de weight -n.  Then f d/de has weight 0 and every complex splits into
finite weight pieces.  When f is not homogeneous the differential only
lowers weight; pieces are then filtered (weight <= w) and the reported
dimensions are cumulative (dimension of the cohomology of the filtered
piece), to be compared after stabilization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable

from .algebra import SuperLieAlgebra
from .linalg import SparseMatrix, nullspace, rank
from .parallel import pmap
from .superfields import Space, SuperPolynomial, SuperVectorField, vf_bracket
from .symbolform import (DZ, DZB, EPS, RHO, Z2, SymbolContext, SymbolForm, deformed_differential,
                         del_operator, lie_d1, lie_d2)


# --------------------------------------------------------------------------
# polynomial helpers


def monomials(d: int, j: int) -> list:
    """Exponent tuples of total degree j in d variables, lex-descending."""
    if j < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(d), j):
        e = [0] * d
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def monomials_upto(d: int, j: int) -> list:
    return [e for k in range(j + 1) for e in monomials(d, k)]


def _exps_of(f: SuperPolynomial, d: int) -> dict:
    """Even polynomial f as {exponent tuple padded to d: coeff}."""
    names = f.space.even
    for k, name in enumerate(names):
        if name != f"z{k + 1}":
            raise ValueError(f"expected variables z1..z{len(names)}, got {name!r}")
    if len(names) > d:
        if any(any(e[d:]) for e, _ in f.terms):
            raise ValueError(f"polynomial uses more than {d} variables")
    out = {}
    for (e, o), c in f.terms.items():
        if o:
            raise ValueError("f must not involve odd variables")
        e = tuple(e[:d]) + (0,) * (d - len(e[:d]))
        out[e] = c
    return out


def _check_f(f: SuperPolynomial, d: int) -> dict:
    if f.parity not in (0, None) or any(o for _, o in f.terms):
        raise ValueError("f must be even with no odd variables")
    return _exps_of(f, d)


def f_degree(f_exps: dict) -> int:
    return max((sum(e) for e in f_exps), default=0)


def is_homogeneous(f_exps: dict) -> bool:
    return len({sum(e) for e in f_exps}) <= 1


def _lift(f_exps: dict, sp: Space) -> SuperPolynomial:
    return SuperPolynomial(sp, {(e, ()): c for e, c in f_exps.items()})


def _poly_str(e: tuple) -> str:
    parts = []
    for k, x in enumerate(e):
        if x == 1:
            parts.append(f"z{k + 1}")
        elif x > 1:
            parts.append(f"z{k + 1}^{x}")
    return "*".join(parts) or "1"


# --------------------------------------------------------------------------
# graded complexes


@dataclass
class ComplexPiece:
    """One weight piece: bases per row and differentials row -> row+1."""

    bases: dict
    diffs: dict

    def row_ranks(self) -> dict:
        return {r: m.rank() for r, m in self.diffs.items()}

    def cohomology(self) -> dict:
        ranks = self.row_ranks()
        out = {}
        for r, basis in self.bases.items():
            out[r] = len(basis) - ranks.get(r, 0) - ranks.get(r - 1, 0)
        return out

    def d_squared_defects(self) -> int:
        bad = 0
        for r, m in self.diffs.items():
            nxt = self.diffs.get(r + 1)
            if nxt is not None and m.ncols and nxt.ncols:
                bad += (nxt @ m).nnz()
        return bad


@dataclass
class GradedComplex:
    """Finite complex split into weight pieces, rows indexed by e-degree.

    ``offsets[r]`` is the weight of a degree-0 coefficient of the primary
    generator of row r, so degree j in row r sits in weight j + offsets[r].
    """

    label: str
    rows: tuple
    offsets: dict
    cap: int
    filtered: bool
    builder: Callable = field(repr=False)
    pieces: dict = field(default_factory=dict)

    def piece(self, w: int) -> ComplexPiece:
        if w not in self.pieces:
            self.pieces[w] = self.builder(w)
        return self.pieces[w]

    def _weights(self) -> list:
        ws = set()
        for r in self.rows:
            for j in range(self.cap + 1):
                w = j + self.offsets[r]
                ws.add(w)
        return sorted(ws)

    def build(self) -> "GradedComplex":
        ws = [w for w in self._weights() if w not in self.pieces]
        for w, p in zip(ws, pmap(self.builder, ws)):
            self.pieces[w] = p
        return self

    def _h_at(self, w: int) -> dict:
        return self.piece(w).cohomology()

    def cohomology_by_degree(self) -> dict:
        """{row: [dim for degree 0..cap]} (cumulative when filtered)."""
        self.build()
        cache = {w: self._h_at(w) for w in self.pieces}
        return {r: [cache[j + self.offsets[r]].get(r, 0) for j in range(self.cap + 1)]
                for r in self.rows}

    def chain_dims_by_degree(self) -> dict:
        self.build()
        out = {}
        for r in self.rows:
            dims = []
            for j in range(self.cap + 1):
                w = j + self.offsets[r]
                dims.append(len(self.piece(w).bases.get(r, [])))
            out[r] = dims
        return out

    def d_squared_zero(self) -> bool:
        self.build()
        return all(p.d_squared_defects() == 0 for p in self.pieces.values())

    def report(self) -> dict:
        h = self.cohomology_by_degree()
        return {
            "complex": self.label,
            "max_degree": self.cap,
            "dims_kind": "cumulative" if self.filtered else "graded",
            "d_squared_zero": self.d_squared_zero(),
            "chain_dims": {str(r): v for r, v in self.chain_dims_by_degree().items()},
            "cohomology_dims": {str(r): v for r, v in h.items()},
            "stabilized": {str(r): _stable(v) for r, v in h.items()},
        }


def _stable(dims: list) -> bool:
    return len(dims) >= 2 and dims[-1] == dims[-2]


def _degrees(target: int, filtered: bool) -> list:
    if target < 0:
        return []
    return list(range(target + 1)) if filtered else [target]


def _row_basis(d: int, target: int, filtered: bool) -> list:
    return [e for k in _degrees(target, filtered) for e in monomials(d, k)]


def koszul_current_complex(g: SuperLieAlgebra, f: SuperPolynomial, D: int = 8,
                           d: int = 2) -> GradedComplex:
    """e.C[z]⊗g -> C[z]⊗g with differential f d/de (multiplication by f)."""
    if D < 0:
        raise ValueError("degree cap must be nonnegative")
    fe = _check_f(f, d)
    n = f_degree(fe)
    filtered = not is_homogeneous(fe)
    sp = Space.standard(d, 1)
    Qf = SuperVectorField(sp, {d: _lift(fe, sp)})
    eps = SuperPolynomial.var(sp, d)
    dim_g = g.dim

    def build(w: int) -> ComplexPiece:
        lower = _row_basis(d, w - n, filtered)
        upper = _row_basis(d, w, filtered)
        index = {e: k for k, e in enumerate(upper)}
        cols = []
        for e in lower:
            image = Qf(eps * SuperPolynomial(sp, {(e, ()): 1}))
            vec = {}
            for (e2, o), c in image.terms.items():
                if o or e2 not in index:
                    raise ValueError("differential leaves the weight piece")
                vec[index[e2]] = c
            cols.append(vec)
        # tensor with g: block index = monomial * dim_g + basis index
        big = []
        for vec in cols:
            for a in range(dim_g):
                big.append({i * dim_g + a: c for i, c in vec.items()})
        bases = {
            -1: [f"e*{_poly_str(e)} (x) {x}" for e in lower for x in g.names],
            0: [f"{_poly_str(e)} (x) {x}" for e in upper for x in g.names],
        }
        diffs = {-1: SparseMatrix.from_columns(len(upper) * dim_g, big)}
        return ComplexPiece(bases, diffs)

    return GradedComplex(f"current[{g.label or 'g'}; f={f}]", (-1, 0), {-1: n, 0: 0},
                         D, filtered, build)


def _vf_rows(d: int):
    """Row of each (variable index, odd tuple) generator type."""
    def row(v, o):
        if v < d:
            return -1 if o else 0
        return 0 if o else 1
    return row


def koszul_vf_complex(f: SuperPolynomial, D: int = 8, d: int = 2) -> GradedComplex:
    """Vector fields on C^{d|1} with differential [f d/de, -], as three rows.

    Row -1: A e d/dz_i; row 0: A e d/de + A d/dz_i; row 1: A d/de.
    """
    if D < 0:
        raise ValueError("degree cap must be nonnegative")
    fe = _check_f(f, d)
    n = f_degree(fe)
    filtered = not is_homogeneous(fe)
    sp = Space.standard(d, 1)
    Qf = SuperVectorField(sp, {d: _lift(fe, sp)})
    eps_key = (0,)
    row_of = _vf_rows(d)

    def gens(w: int) -> dict:
        # (row, variable index, odd tuple, coefficient degree target)
        out = {-1: [], 0: [], 1: []}
        for i in range(d):
            for e in _row_basis(d, w - n + 1, filtered):
                out[-1].append((i, eps_key, e))
        for e in _row_basis(d, w, filtered):
            out[0].append((d, eps_key, e))
        for i in range(d):
            for e in _row_basis(d, w + 1, filtered):
                out[0].append((i, (), e))
        for e in _row_basis(d, w + n, filtered):
            out[1].append((d, (), e))
        return out

    def label(v, o, e):
        coeff = _poly_str(e)
        if o:
            coeff = "e" if coeff == "1" else f"{coeff}*e"
        target = f"d/dz{v + 1}" if v < d else "d/de"
        return f"{coeff}*{target}"

    def build(w: int) -> ComplexPiece:
        g = gens(w)
        index = {r: {(v, o, e): k for k, (v, o, e) in enumerate(g[r])} for r in g}
        diffs = {}
        for r in (-1, 0):
            cols = []
            for v, o, e in g[r]:
                X = SuperVectorField(sp, {v: SuperPolynomial(sp, {(e, o): 1})})
                vec = {}
                for (v2, (e2, o2)), c in vf_bracket(Qf, X).to_vector().items():
                    if row_of(v2, o2) != r + 1:
                        raise ValueError("differential does not raise e-degree by one")
                    k = index[r + 1].get((v2, o2, e2))
                    if k is None:
                        raise ValueError("differential leaves the weight piece")
                    vec[k] = c
                cols.append(vec)
            diffs[r] = SparseMatrix.from_columns(len(g[r + 1]), cols)
        bases = {r: [label(*x) for x in g[r]] for r in g}
        return ComplexPiece(bases, diffs)

    return GradedComplex(f"vector fields[f={f}]", (-1, 0, 1), {-1: n - 1, 0: -1, 1: -n},
                         D, filtered, build)


# --------------------------------------------------------------------------
# ideal oracles


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _partial(p: dict, i: int) -> dict:
    out = {}
    for e, c in p.items():
        if e[i]:
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = c * e[i]
    return out


def _ideal_span_rank(gens: list, d: int, cap: int, filtered: bool) -> int:
    """Rank of the span of m*g with deg(m*g) == cap (or <= cap when filtered).

    For homogeneous generators the homogeneous piece is exact; filtered
    truncation only sees multiples whose degree stays below the cap.
    """
    vecs = []
    for g in gens:
        if not g:
            continue
        dg = max(sum(e) for e in g)
        for e in _row_basis(d, cap - dg, filtered):
            vecs.append(_poly_mul({e: Fraction(1)}, g))
    return rank(vecs)


@dataclass
class RingDims:
    """Per-degree dimensions with a stabilization flag."""

    label: str
    dims: list
    filtered: bool

    @property
    def stabilized(self) -> bool:
        return _stable(self.dims)

    @property
    def total(self):
        """Total dimension once finite and stabilized, else None."""
        if not self.stabilized:
            return None
        if self.filtered:
            return self.dims[-1]
        return sum(self.dims) if self.dims[-1] == 0 else None

    def to_json(self) -> dict:
        return {
            "ring": self.label,
            "dims": self.dims,
            "dims_kind": "cumulative" if self.filtered else "graded",
            "status": "stabilized" if self.stabilized else "unstabilized",
            "total_dim": self.total if self.total is not None else "infinite or unstabilized",
        }


def _hom_or_filtered(fe: dict):
    return not is_homogeneous(fe)


def quotient_dims(gens: list, d: int, D: int, filtered: bool, label: str) -> RingDims:
    """Per-degree dims of C[z]/(gens) by linear algebra, degrees 0..D.

    Cumulative (degree <= k) when filtered.
    """
    def at(k):
        if k < 0:
            return 0
        size = len(_row_basis(d, k, filtered))
        return size - _ideal_span_rank(gens, d, k, filtered)

    return RingDims(label, pmap(at, range(D + 1)), filtered)


def jacobian_ring(f: SuperPolynomial, D: int = 8, d: int = 2) -> RingDims:
    """Per-degree dims of C[z_1..z_d] / (f, d_1 f, ..., d_d f)."""
    fe = _check_f(f, d)
    gens = [fe] + [_partial(fe, i) for i in range(d)]
    return quotient_dims(gens, d, D, _hom_or_filtered(fe), f"jacobian[{f}]")


def tangent_complex_degree0(f: SuperPolynomial, D: int = 8, d: int = 2) -> RingDims:
    """Per-degree dims of {g : sum g_i d_i f in (f)} / f.A^d.

    Computed as a direct nullspace: pairs (g, h) with sum g_i d_i f = f h,
    projected to g, then divided by the f-multiples.
    """
    fe = _check_f(f, d)
    n = f_degree(fe)
    filtered = _hom_or_filtered(fe)
    grads = [_partial(fe, i) for i in range(d)]

    def at(k):
        if k < 0:
            return 0
        gmon = _row_basis(d, k, filtered)
        hmon = _row_basis(d, k - 1, filtered) if fe else []
        # columns: g_i monomials then h monomials; rows: monomials of the result
        cols = []
        for i in range(d):
            for e in gmon:
                cols.append(_poly_mul({e: Fraction(1)}, grads[i]))
        for e in hmon:
            cols.append({m: -c for m, c in _poly_mul({e: Fraction(1)}, fe).items()})
        keys = sorted({m for c in cols for m in c})
        pos = {m: r for r, m in enumerate(keys)}
        rows = [dict() for _ in keys]
        for j, c in enumerate(cols):
            for m, x in c.items():
                rows[pos[m]][j] = x
        ns = nullspace(rows, len(cols))
        ng = d * len(gmon)
        proj = rank([{j: x for j, x in v.items() if j < ng} for v in ns])
        # f-multiples: g = f * u with deg u <= k - n
        fmult = []
        for i in range(d):
            for e in _row_basis(d, k - n, filtered):
                prod = _poly_mul({e: Fraction(1)}, fe)
                fmult.append({i * len(gmon) + gmon.index(m): c for m, c in prod.items()})
        return proj - rank(fmult)

    return RingDims(f"tangent[{f}]", pmap(at, range(D + 1)), filtered)


# --------------------------------------------------------------------------
# radial bump integral


@dataclass(frozen=True)
class BumpProfile:
    """Radial bump rho = f(s), s = |z_2|^2, with f(0) = 1 and f -> 0."""

    name: str
    f: Callable
    fprime: Callable
    support: float = math.inf
    parameters: tuple = ()

    def validate(self, tol: float = 1e-9) -> None:
        if abs(self.f(0.0) - 1.0) > tol:
            raise ValueError(f"profile {self.name!r} violates f(0) = 1")
        far = self.support if math.isfinite(self.support) else 1e8
        if abs(self.f(far)) > 1e-6:
            raise ValueError(f"profile {self.name!r} does not decay to 0")
        grid = [far * k / 200 for k in range(201)] if math.isfinite(self.support) \
            else [10 ** (k / 20) - 1 for k in range(0, 161)]
        vals = [self.f(s) for s in grid]
        if any(b > a + tol for a, b in zip(vals, vals[1:])):
            raise ValueError(f"profile {self.name!r} is not monotone")


def _compact_f(s):
    return 1 - 3 * s * s + 2 * s ** 3 if s < 1 else 0.0


def _compact_fp(s):
    return -6 * s + 6 * s * s if s < 1 else 0.0


PROFILES = {
    "gaussian": BumpProfile("gaussian", lambda s: math.exp(-s), lambda s: -math.exp(-s)),
    "rational": BumpProfile("rational", lambda s: 1 / (1 + s), lambda s: -1 / (1 + s) ** 2),
    "compact-poly": BumpProfile("compact-poly", _compact_f, _compact_fp, support=1.0),
}


def get_profile(name: str) -> BumpProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}")


class QuadratureError(RuntimeError):
    pass


@dataclass
class BumpIntegral:
    profile: str
    value: complex
    error_estimate: float
    tol: float

    @property
    def ok(self) -> bool:
        return abs(self.value - math.pi * 1j) <= self.tol

    def to_json(self) -> dict:
        return {"profile": self.profile, "real": self.value.real, "imag": self.value.imag,
                "expected_imag": math.pi, "error_estimate": self.error_estimate,
                "tol": self.tol, "ok": self.ok}


def bump_integral(profile, tol: float = 1e-6) -> BumpIntegral:
    """Integral over C of dz^dzbar (rho/z) d rho/dzbar for rho = f(|z|^2).

    With dz^dzbar = -2i dx dy and (rho/z) d rho/dzbar = f f', the radial
    reduction is -2 pi i times the integral of f f' over s in [0, inf).
    """
    from scipy.integrate import quad

    if isinstance(profile, str):
        profile = get_profile(profile)
    if not 0 < tol < 1:
        raise ValueError("tolerance must lie in (0, 1)")
    profile.validate()
    upper = profile.support
    val, err = quad(lambda s: profile.f(s) * profile.fprime(s), 0.0, upper,
                    epsabs=tol / 100, epsrel=tol / 100, limit=200)
    if not math.isfinite(val) or err > tol:
        raise QuadratureError(f"quadrature did not converge for {profile.name!r} "
                              f"(error estimate {err:g})")
    return BumpIntegral(profile.name, complex(0.0, -2 * math.pi * val), 2 * math.pi * err, tol)


# --------------------------------------------------------------------------
# the bump-function map s_rho and its identities




def _c(ctx: SymbolContext) -> SymbolForm:
    """dbar(rho) / z2."""
    return ctx.gen(RHO(0, 1)) * ctx.gen(DZB(2)) * ctx.gen(Z2, -1)


def s_rho(X: SymbolForm) -> SymbolForm:
    """s(X) = rho X - e (dbar rho / z2) X."""
    ctx = X.ctx
    return ctx.gen(RHO()) * X - ctx.gen(EPS) * _c(ctx) * X


@dataclass
class IdentityCertificate:
    """Outcome of a symbolic identity check; residual printed in canonical form."""

    name: str
    parities: tuple
    residual: str
    zero: bool
    control: str = ""
    control_residual: str = ""
    control_nonzero: bool = True
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.zero and self.control_nonzero

    def to_json(self) -> dict:
        return {"identity": self.name, "parities": list(self.parities),
                "residual": self.residual, "zero": self.zero,
                "control": self.control, "control_residual": self.control_residual,
                "control_nonzero": self.control_nonzero, "ok": self.ok,
                "notes": self.notes}


def _cochain_residual(parity: int, eps_image: bool) -> SymbolForm:
    ctx = SymbolContext()
    alpha = ctx.field("alpha", parity)
    D = deformed_differential(ctx, eps_image=eps_image)
    return D(s_rho(alpha)) - s_rho(D(alpha))


def s_rho_cochain_check(parity: int = 0) -> IdentityCertificate:
    """D s(alpha) - s(D alpha) with D = dbar + z2 d/de; control drops D(e) = z2."""
    res = _cochain_residual(parity, True)
    ctl = _cochain_residual(parity, False)
    return IdentityCertificate("D s(alpha) = s(D alpha)", (parity,), str(res), res.is_zero(),
                               "D(e) = 0", str(ctl), not ctl.is_zero())


CORRECTIONS = {
    "rho(rho-1)": lambda ctx: ctx.gen(RHO(), 2) - ctx.gen(RHO()),
    "rho^2": lambda ctx: ctx.gen(RHO(), 2),
    "rho": lambda ctx: ctx.gen(RHO()),
}


def linf_residual(pa: int, pb: int, correction: str = "rho(rho-1)",
                  convention: str = "koszul") -> SymbolForm:
    """[s a, s b] - s[a, b] minus the D-commutator of s2, s2(a, b) = e g/z2 [a, b].

    convention "koszul": D s2 + s2(D a, b) + (-1)^|a| s2(a, D b), the
    commutator of D with a map of odd degree.  "literal": the same with
    minus signs on the last two terms.
    """
    ctx = SymbolContext()
    a = ctx.field("alpha", pa)
    b = ctx.field("beta", pb)
    D = deformed_differential(ctx)
    g = CORRECTIONS[correction](ctx) * ctx.gen(Z2, -1)

    def s2(x, y):
        return ctx.gen(EPS) * g * x.bracket(y)

    lhs = s_rho(a).bracket(s_rho(b)) - s_rho(a.bracket(b))
    sgn = 1 if convention == "koszul" else -1
    rhs = D(s2(a, b)) + (s2(D(a), b) + s2(a, D(b)) * (-1) ** pa) * sgn
    return lhs - rhs


def linf_relation_check(parities=(0, 0), correction: str = "rho(rho-1)") -> IdentityCertificate:
    pa, pb = parities
    res = linf_residual(pa, pb, correction)
    ctl = linf_residual(pa, pb, "rho^2")
    lit = linf_residual(pa, pb, correction, "literal")
    cert = IdentityCertificate("L-infinity relation for (s1, s2)", (pa, pb), str(res),
                               res.is_zero(), "correction rho^2", str(ctl), not ctl.is_zero())
    cert.notes.append(f"minus-sign variant residual: {lit}")
    return cert


# pullbacks of the 4d cocycles along s_rho


RADIAL_TOKEN = "integral over C of dz2^dzb2 (rho/z2) d rho/dzb2 = pi*i"


def _is_z2_gen(g) -> bool:
    return g[0] in ("z2", "rho") or g in (DZ(2), DZB(2))


_TOKEN_FUNCS = ((RHO(0, 0), 1), (RHO(0, 1), 1), (Z2, -1))


@dataclass
class PullbackResult:
    """Coefficient c in s^*(4d cocycle) = c * (2d cocycle)."""

    cocycle: str
    insertion: int
    coefficient: Fraction | None
    z1_integrand: str
    dropped: dict
    terms: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"cocycle": self.cocycle, "insertion": f"dz{self.insertion}",
                "coefficient": None if self.coefficient is None else _frac(self.coefficient), "z1_integrand": self.z1_integrand,
                "radial_integral": RADIAL_TOKEN, "dropped_terms": self.dropped,
                "terms": self.terms}


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def reduce_pullback(integrand: SymbolForm, target: SymbolForm):
    """Integrate over the z2-plane with the radial token; return (k, dropped).

    integrand = k * [dz2 dzb2 rho rho_zb / z2] * target + (terms that vanish
    by form degree).  Raises if some surviving term has an unknown radial
    profile or a z1-part that is not a multiple of the target.
    """
    ctx = integrand.ctx
    dropped = {"z2 form degree": 0, "z1 form degree": 0, "unevaluated": []}
    rest = ctx.zero()
    for (m, f), c in integrand.terms.items():
        if any(g == EPS for g, _ in m):
            raise ValueError("Berezin integration should have removed e")
        z2 = tuple((g, e) for g, e in m if _is_z2_gen(g))
        z1 = tuple((g, e) for g, e in m if not _is_z2_gen(g))
        gens2 = {g for g, _ in z2}
        if DZ(2) not in gens2 or DZB(2) not in gens2:
            dropped["z2 form degree"] += 1
            continue
        holo = sum(e for g, e in z1 if g == DZ(1))
        holo += sum(ctx.scalar_holo[g[1]] * e for g, e in z1 if g[0] == "s")
        if f is not None:
            holo += sum(ctx.field_holo[x] for x in f[1:])
        if holo != 1:
            dropped["z1 form degree"] += 1
            continue
        funcs = tuple((g, e) for g, e in z2 if g[0] in ("rho", "z2"))
        if tuple(sorted(funcs, key=lambda kv: ctx.gen_key(kv[0]))) != \
                tuple(sorted(_TOKEN_FUNCS, key=lambda kv: ctx.gen_key(kv[0]))):
            dropped["unevaluated"].append(str(SymbolForm(ctx, {(m, f): c})))
            continue
        # the z2 block dz2 dzb2 (even) leads the canonical order: no sign
        rest = rest + SymbolForm(ctx, {(z1, f): c})
    if dropped["unevaluated"]:
        return None, dropped
    if rest.is_zero():
        return Fraction(0), dropped
    (key, k), = target.terms.items()
    ratio = None
    for tk, c in rest.terms.items():
        if tk != key:
            raise ValueError(f"z1-integrand {rest} is not a multiple of {target}")
        ratio = c / k
    return ratio, dropped


def _coefficient(k):
    # (2 pi i)^-2 * (pi i) / (2 pi i)^-1 = 1/2
    return None if k is None else k * Fraction(1, 2)


def km_pullback_coefficient(insertion: int = 2, parity: int = 1) -> PullbackResult:
    """Pull back phi(a + e a') = (2 pi i)^-2 int kappa(a ^ del a') ^ dz_i along s_rho.

    The field alpha carries the shifted (odd) parity on which the 2d
    cocycle (2 pi i)^-1 int kappa(alpha del alpha) is a nonzero functional.
    Also replays the split into a dbar(rho^2)/2z2 term and a
    del(rho) dbar(rho) kappa(alpha, alpha) term.
    """
    ctx = SymbolContext()
    alpha = ctx.field("alpha", parity)
    de = del_operator(ctx)
    a0, a1 = s_rho(alpha).eps_split()
    integrand = a0.kappa(de(a1)) * ctx.gen(DZ(insertion))
    target = alpha.kappa(de(alpha))
    k, dropped = reduce_pullback(integrand, target)
    # replay: -dz2 ^ kappa(c alpha, del(rho alpha)) split by the Leibniz rule
    c = _c(ctx)
    rho = ctx.gen(RHO())
    dz = ctx.gen(DZ(insertion))
    t1 = -(dz * (c * alpha).kappa(rho * de(alpha)))
    t2 = -(dz * (c * alpha).kappa(de(rho) * alpha))
    dbar_rho2 = deformed_differential(ctx)(rho * rho)
    expected_t1 = -(dz * dbar_rho2 * ctx.gen(Z2, -1) * Fraction(1, 2)) * target
    k1, _ = reduce_pullback(t1, target)
    terms = {
        "dbar(rho^2)/2z2 term": str(t1),
        "dbar(rho^2)/2z2 term matches": t1 == expected_t1,
        "dbar(rho^2)/2z2 coefficient": _frac(_coefficient(k1)) if k1 is not None else None,
        "del(rho) dbar(rho) kappa(alpha, alpha) term": str(t2),
    }
    return PullbackResult("kac-moody", insertion, _coefficient(k), str(target), dropped, terms)


def jacobian_matrix(components, ctx: SymbolContext) -> list:
    """J[i][j] = L_{d/dz_i} (lambda_j) for lambda = sum_j lambda_j d/dz_j."""
    ops = [lie_d1(ctx), lie_d2(ctx)]
    return [[ops[i](components[j]) for j in range(2)] for i in range(2)]


def vir_pullback_coefficient(insertion: int = 2, parity: int = 1) -> PullbackResult:
    """Pull back psi(xi + e xi') = (2 pi i)^-2 int tr(J xi) ^ del tr(J xi') ^ dz_i.

    The argument is s_rho(xi d/dz1) = rho xi d/dz1 - e (dbar rho / z2) xi d/dz1.
    """
    ctx = SymbolContext()
    xi = ctx.scalar("xi", parity)
    de = del_operator(ctx)
    lam_full = s_rho(xi)
    lam, lam_p = lam_full.eps_split()
    J = jacobian_matrix([lam, ctx.zero()], ctx)
    Jp = jacobian_matrix([lam_p, ctx.zero()], ctx)
    tr, tr_p = J[0][0] + J[1][1], Jp[0][0] + Jp[1][1]
    integrand = tr * de(tr_p) * ctx.gen(DZ(insertion))
    u = lie_d1(ctx)(xi)
    target = u * de(u)
    k, dropped = reduce_pullback(integrand, target)
    terms = {
        "J(lambda)": [[str(x) for x in row] for row in J],
        "J(lambda')": [[str(x) for x in row] for row in Jp],
        "tr J(lambda) ^ del tr J(lambda')": str(tr * de(tr_p)),
    }
    return PullbackResult("virasoro", insertion, _coefficient(k), str(target), dropped, terms)
