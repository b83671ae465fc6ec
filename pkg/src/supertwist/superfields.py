"""Super polynomials, polynomial supervector fields and their brackets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import Q, vec_iadd, vec_scale


@dataclass(frozen=True)
class Space:
    """Coordinates of C^{d|m}: even names then odd names."""

    even: tuple
    odd: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "even", tuple(self.even))
        object.__setattr__(self, "odd", tuple(self.odd))
        if len(set(self.even + self.odd)) != len(self.even) + len(self.odd):
            raise ValueError("variable names must be distinct")

    @classmethod
    def standard(cls, d: int, m: int = 0, even="z", odd="e") -> "Space":
        return cls(tuple(f"{even}{i}" for i in range(1, d + 1)),
                   tuple(f"{odd}{i}" for i in range(1, m + 1)))

    @property
    def names(self) -> tuple:
        return self.even + self.odd

    @property
    def d(self) -> int:
        return len(self.even)

    @property
    def m(self) -> int:
        return len(self.odd)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def var_parity(self, v: int) -> int:
        return 0 if v < self.d else 1


def _merge_odd(a: tuple, b: tuple):
    """Product of sorted odd monomials; returns (sign, merged) or None."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    sb = set(b)
    if any(x in sb for x in a):
        return None
    inv = 0
    for x in a:
        for y in b:
            if y < x:
                inv += 1
    return (-1) ** inv, tuple(sorted(a + b))


class SuperPolynomial:
    """Sparse polynomial in even and odd variables with exact coefficients.

    Terms are keyed by ``(even exponents, sorted odd indices)``; the odd
    indices refer to positions in ``space.odd`` and the monomial is the
    ordered product of those odd variables.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms: dict | None = None):
        self.space = space
        self.terms = {k: Q(v) for k, v in (terms or {}).items() if v}

    # constructors
    @classmethod
    def const(cls, space: Space, c) -> "SuperPolynomial":
        return cls(space, {((0,) * space.d, ()): c})

    @classmethod
    def var(cls, space: Space, name) -> "SuperPolynomial":
        v = name if isinstance(name, int) else space.index(name)
        if v < space.d:
            e = [0] * space.d
            e[v] = 1
            return cls(space, {(tuple(e), ()): 1})
        return cls(space, {((0,) * space.d, (v - space.d,)): 1})

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def parity(self):
        ps = {len(o) % 2 for (_, o) in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def degree(self) -> int:
        """Total degree counting even exponents and odd variables."""
        return max((sum(e) + len(o) for e, o in self.terms), default=-1)

    def even_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def homogeneous_parts(self) -> dict:
        out: dict = {}
        for k, v in self.terms.items():
            out.setdefault(len(k[1]) % 2, {})[k] = v
        return {p: SuperPolynomial(self.space, t) for p, t in out.items()}

    def _check(self, other):
        if other.space != self.space:
            raise ValueError("variable sets differ")

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, SuperPolynomial):
            other = SuperPolynomial.const(self.space, other)
        self._check(other)
        t = dict(self.terms)
        vec_iadd(t, other.terms)
        return SuperPolynomial(self.space, t)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial(self.space, vec_scale(self.terms, -1))

    def __sub__(self, other):
        return self + (-other if isinstance(other, SuperPolynomial) else -Q(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SuperPolynomial):
            return SuperPolynomial(self.space, vec_scale(self.terms, Q(other)))
        self._check(other)
        out: dict = {}
        for (e1, o1), c1 in self.terms.items():
            for (e2, o2), c2 in other.terms.items():
                m = _merge_odd(o1, o2)
                if m is None:
                    continue
                s, o = m
                key = (tuple(a + b for a, b in zip(e1, e2)), o)
                y = out.get(key, 0) + s * c1 * c2
                if y:
                    out[key] = y
                else:
                    out.pop(key, None)
        return SuperPolynomial(self.space, out)

    def __rmul__(self, other):
        return SuperPolynomial(self.space, vec_scale(self.terms, Q(other)))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = SuperPolynomial.const(self.space, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, SuperPolynomial):
            return self.space == other.space and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def derivative(self, v) -> "SuperPolynomial":
        """Left partial derivative with respect to variable index or name."""
        if isinstance(v, str):
            v = self.space.index(v)
        d = self.space.d
        out: dict = {}
        if v < d:
            for (e, o), c in self.terms.items():
                if e[v]:
                    e2 = list(e)
                    e2[v] -= 1
                    out[(tuple(e2), o)] = c * e[v]
        else:
            k = v - d
            for (e, o), c in self.terms.items():
                if k in o:
                    pos = o.index(k)
                    out[(e, o[:pos] + o[pos + 1:])] = c * (-1) ** pos
        return SuperPolynomial(self.space, out)

    def substitute_zero(self, names: Iterable[str]) -> "SuperPolynomial":
        idx = [self.space.index(n) for n in names]
        d = self.space.d
        out = {}
        for (e, o), c in self.terms.items():
            if any((v < d and e[v]) or (v >= d and (v - d) in o) for v in idx):
                continue
            out[(e, o)] = c
        return SuperPolynomial(self.space, out)

    # printing
    def _mono_str(self, e, o) -> str:
        parts = []
        for name, k in zip(self.space.even, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        parts.extend(self.space.odd[k] for k in o)
        return "*".join(parts)

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (-(sum(kv[0][0]) + len(kv[0][1])),
                                      tuple(-x for x in kv[0][0]), kv[0][1]))

    def __str__(self):
        return _join_terms([(c, self._mono_str(e, o)) for (e, o), c in self.sorted_terms()])

    def __repr__(self):
        return f"SuperPolynomial({self})"


def _coef_prefix(c: Fraction, mono: str) -> str:
    a = abs(c)
    if not mono:
        return str(a)
    if a == 1:
        return mono
    return f"{a}*{mono}"


def _join_terms(items) -> str:
    if not items:
        return "0"
    out = ""
    for n, (c, mono) in enumerate(items):
        body = _coef_prefix(c, mono)
        if n == 0:
            out = body if c > 0 else f"-{body}"
        else:
            out += (" + " if c > 0 else " - ") + body
    return out


# --------------------------------------------------------------------------
# vector fields


class SuperVectorField:
    """X = sum_v c_v d/dv with polynomial components (left derivations)."""

    __slots__ = ("space", "components")

    def __init__(self, space: Space, components: dict | None = None):
        self.space = space
        comps = {}
        for v, p in (components or {}).items():
            if isinstance(v, str):
                v = space.index(v)
            if not isinstance(p, SuperPolynomial):
                p = SuperPolynomial.const(space, p)
            if p.space != space:
                raise ValueError("component over a different space")
            if not p.is_zero():
                comps[v] = p
        self.components = comps

    @classmethod
    def partial(cls, space: Space, name) -> "SuperVectorField":
        v = name if isinstance(name, int) else space.index(name)
        return cls(space, {v: SuperPolynomial.const(space, 1)})

    def is_zero(self) -> bool:
        return not self.components

    @property
    def parity(self):
        ps = set()
        for v, p in self.components.items():
            for q in p.homogeneous_parts():
                ps.add((q + self.space.var_parity(v)) % 2)
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def homogeneous_parts(self) -> dict:
        out: dict = {}
        for v, p in self.components.items():
            for q, part in p.homogeneous_parts().items():
                out.setdefault((q + self.space.var_parity(v)) % 2, {})[v] = part
        return {k: SuperVectorField(self.space, c) for k, c in out.items()}

    def __call__(self, f: SuperPolynomial) -> SuperPolynomial:
        if f.space != self.space:
            raise ValueError("variable sets differ")
        out = SuperPolynomial(self.space)
        for v, c in self.components.items():
            df = f.derivative(v)
            if not df.is_zero():
                out = out + c * df
        return out

    def __add__(self, other):
        if other.space != self.space:
            raise ValueError("variable sets differ")
        comps = dict(self.components)
        for v, p in other.components.items():
            comps[v] = comps[v] + p if v in comps else p
        return SuperVectorField(self.space, comps)

    def __neg__(self):
        return SuperVectorField(self.space, {v: -p for v, p in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return SuperVectorField(self.space, {v: p * Q(c) for v, p in self.components.items()})

    __rmul__ = __mul__

    def times(self, f: SuperPolynomial) -> "SuperVectorField":
        """The field f * X (f multiplies each component from the left)."""
        return SuperVectorField(self.space, {v: f * p for v, p in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return self.space == other.space and self.components == other.components

    def __hash__(self):
        return hash(tuple(sorted((v, hash(p)) for v, p in self.components.items())))

    def to_vector(self) -> dict:
        """Flatten into a sparse vector keyed by (variable, monomial)."""
        out = {}
        for v, p in self.components.items():
            for k, c in p.terms.items():
                out[(v, k)] = c
        return out

    def degree(self) -> int:
        return max((p.degree() for p in self.components.values()), default=-1)

    def __str__(self):
        items = []
        for v in sorted(self.components):
            p = self.components[v]
            dname = f"d/d{self.space.names[v]}"
            for (e, o), c in p.sorted_terms():
                mono = p._mono_str(e, o)
                items.append((c, f"{mono}*{dname}" if mono else dname))
        return _join_terms(items)

    def __repr__(self):
        return f"SuperVectorField({self})"


def vf_bracket(X: SuperVectorField, Y: SuperVectorField) -> SuperVectorField:
    """Graded commutator [X, Y] = X Y - (-1)^{|X||Y|} Y X.

    Component-wise: [X, Y]_v = X(Y_v) - (-1)^{|X||Y|} Y(X_v).
    Inhomogeneous fields are split into homogeneous parts.
    """
    if X.space != Y.space:
        raise ValueError("variable sets differ")
    total = SuperVectorField(X.space)
    for px, Xp in X.homogeneous_parts().items():
        for py, Yp in Y.homogeneous_parts().items():
            sign = (-1) ** (px * py)
            comps = {}
            for v in set(Xp.components) | set(Yp.components):
                a = Xp(Yp.components[v]) if v in Yp.components else SuperPolynomial(X.space)
                if v in Xp.components:
                    a = a - Yp(Xp.components[v]) * sign
                comps[v] = a
            total = total + SuperVectorField(X.space, comps)
    return total


def euler_field(space: Space, include_odd: bool = False, odd_weight=1) -> SuperVectorField:
    comps = {v: SuperPolynomial.var(space, v) for v in range(space.d)}
    if include_odd:
        for v in range(space.d, space.d + space.m):
            comps[v] = SuperPolynomial.var(space, v) * Q(odd_weight)
    return SuperVectorField(space, comps)


# --------------------------------------------------------------------------
# homomorphism checks


@dataclass
class HomomorphismReport:
    ok: bool
    pairs_checked: int = 0
    scaling: dict | None = None
    defect: dict | None = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "pairs_checked": self.pairs_checked}
        if self.scaling is not None:
            out["scaling"] = {k: str(v) for k, v in self.scaling.items()}
        if self.defect:
            out["defect"] = self.defect
        return out


def _lin_comb(fields: Sequence, coeffs: dict, space: Space) -> SuperVectorField:
    out = SuperVectorField(space)
    for k, c in coeffs.items():
        out = out + fields[k] * c
    return out


def _ratio(a: SuperVectorField, b: SuperVectorField):
    """c with a == c*b, or None."""
    va, vb = a.to_vector(), b.to_vector()
    if not vb:
        return Fraction(0) if not va else None
    if set(va) != set(vb):
        return None
    k = next(iter(vb))
    c = va[k] / vb[k]
    return c if all(va[x] == c * vb[x] for x in vb) else None


def _solve_scaling(phi: Sequence, A, brackets: dict):
    """Diagonal rescalings lam with [lam_i F_i, lam_j F_j] = lam_k F_k for
    the structure constants of A.  Returns {i: lam_i} or None."""
    n = A.dim
    lam: dict = {}
    # relations lam_i lam_j r = lam_k when [F_i, F_j] = r F_k and [b_i, b_j] = c b_k
    relations = []
    for (i, j), br in brackets.items():
        target = A.bracket_basis(i, j)
        if len(target) != 1:
            continue
        (k, c), = target.items()
        r = _ratio(br, phi[k])
        if r is None or r == 0:
            continue
        relations.append((i, j, k, r / c))
    # eigenvector relations [h, X] = c X fix lam_h outright
    for i, j, k, r in relations:
        if k == j and i != j and i not in lam:
            lam[i] = 1 / r
        elif k == i and i != j and j not in lam:
            lam[j] = 1 / r
    # odd self-brackets next: lam_i^2 r = lam_k fixes lam_k once lam_i is free
    relations.sort(key=lambda t: (t[0] != t[1], t))
    changed = True
    while len(lam) < n:
        changed = False
        for i, j, k, r in relations:
            known = [x in lam for x in (i, j, k)]
            if known[0] and known[1] and not known[2]:
                lam[k] = lam[i] * lam[j] * r
                changed = True
            elif known[2] and known[0] and not known[1] and j != i:
                lam[j] = lam[k] / (lam[i] * r)
                changed = True
            elif known[2] and known[1] and not known[0] and j != i:
                lam[i] = lam[k] / (lam[j] * r)
                changed = True
        if not changed:
            free = next(x for x in range(n) if x not in lam)
            lam[free] = Fraction(1)
    return lam


def check_homomorphism(phi, A, rescale: bool = False) -> HomomorphismReport:
    """Verify [phi(x), phi(y)] = phi([x, y]) on all basis pairs of A.

    ``phi`` is a sequence (or dict by basis name) of fields.  With
    ``rescale=True`` a diagonal normalization lam is solved for first and
    the check is made for x -> lam_x phi(x).
    """
    if isinstance(phi, dict):
        phi = [phi[name] for name in A.names]
    phi = list(phi)
    if len(phi) != A.dim:
        raise ValueError("map must be total on the basis")
    space = phi[0].space
    scaling = None
    if rescale:
        brackets = {(i, j): vf_bracket(phi[i], phi[j])
                    for i in range(A.dim) for j in range(i, A.dim)}
        lam = _solve_scaling(phi, A, brackets)
        phi = [phi[i] * lam[i] for i in range(A.dim)]
        scaling = {A.names[i]: lam[i] for i in range(A.dim)}
    pairs = 0
    for i in range(A.dim):
        for j in range(i, A.dim):
            lhs = vf_bracket(phi[i], phi[j])
            rhs = _lin_comb(phi, A.bracket_basis(i, j), space)
            pairs += 1
            if lhs != rhs:
                return HomomorphismReport(False, pairs, scaling, {
                    "pair": [A.names[i], A.names[j]],
                    "bracket_of_images": str(lhs), "image_of_bracket": str(rhs)})
    return HomomorphismReport(True, pairs, scaling)


# --------------------------------------------------------------------------
# conformal vector fields


def realize_conformal(d: int, metric=None) -> dict:
    """Conformal Killing fields on C^d with metric g (default: identity).

    P_mu = d_mu, M_{mu nu} = x_mu d_nu - x_nu d_mu, Delta = -E,
    K_mu = |x|^2 d_mu - 2 x_mu E, plus the Euler field E itself.
    Indices run 1..d in the names.
    """
    if d < 3:
        raise ValueError("need d >= 3")
    g = _metric(d, metric)
    sp = Space.standard(d, 0, even="x")
    x = [SuperPolynomial.var(sp, i) for i in range(d)]
    lower = [sum((x[n] * g[m][n] for n in range(d)), SuperPolynomial(sp)) for m in range(d)]
    norm = sum((x[m] * lower[m] for m in range(d)), SuperPolynomial(sp))
    E = euler_field(sp)
    dd = [SuperVectorField.partial(sp, i) for i in range(d)]
    out = {}
    for m in range(d):
        out[f"P{m + 1}"] = dd[m]
    for m in range(d):
        for n in range(m + 1, d):
            out[f"M{m + 1}{n + 1}"] = dd[n].times(lower[m]) - dd[m].times(lower[n])
    out["D"] = -E
    out["E"] = E
    for m in range(d):
        out[f"K{m + 1}"] = dd[m].times(norm) - E.times(lower[m] * 2)
    return out


def _metric(d, metric):
    if metric is None:
        return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    g = [[Q(metric[i][j]) for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(d):
            if g[i][j] != g[j][i]:
                raise ValueError("metric must be symmetric")
    return g


def conformal_relation_defects(fields: dict, d: int, metric=None) -> list:
    """Check the conformal relation table; return (failing relations, number checked).

    The table: [D,P]=P, [D,K]=-K, [M_mn,K_r] = g_rn K_m - g_mr K_n,
    [M_mn,P_r] = g_rn P_m - g_mr P_n, [K_m,P_n] = 2M_mn + 2g_mn E,
    [M_mn,M_rs] = g_ms M_nr + g_nr M_ms - g_mr M_ns - g_ns M_mr, and the
    remaining brackets ([P,P], [K,K], [D,M]) vanish.
    """
    g = _metric(d, metric)
    sp = fields["P1"].space
    zero = SuperVectorField(sp)
    idx = range(d)

    def M(m, n):
        if m == n:
            return zero
        if m < n:
            return fields[f"M{m + 1}{n + 1}"]
        return -fields[f"M{n + 1}{m + 1}"]

    P = [fields[f"P{m + 1}"] for m in idx]
    K = [fields[f"K{m + 1}"] for m in idx]
    D, E = fields["D"], fields["E"]
    rels = []
    for m in idx:
        rels.append((f"[D,P{m + 1}]", vf_bracket(D, P[m]), P[m]))
        rels.append((f"[D,K{m + 1}]", vf_bracket(D, K[m]), -K[m]))
        for n in idx:
            rels.append((f"[P{m + 1},P{n + 1}]", vf_bracket(P[m], P[n]), zero))
            rels.append((f"[K{m + 1},K{n + 1}]", vf_bracket(K[m], K[n]), zero))
            rels.append((f"[K{m + 1},P{n + 1}]", vf_bracket(K[m], P[n]),
                         M(m, n) * 2 + E * (2 * g[m][n])))
            if m < n:
                rels.append((f"[D,M{m + 1}{n + 1}]", vf_bracket(D, M(m, n)), zero))
                for r in idx:
                    rels.append((f"[M{m + 1}{n + 1},K{r + 1}]", vf_bracket(M(m, n), K[r]),
                                 K[m] * g[r][n] - K[n] * g[m][r]))
                    rels.append((f"[M{m + 1}{n + 1},P{r + 1}]", vf_bracket(M(m, n), P[r]),
                                 P[m] * g[r][n] - P[n] * g[m][r]))
                    for s in idx:
                        if r < s:
                            rhs = (M(n, r) * g[m][s] + M(m, s) * g[n][r]
                                   - M(n, s) * g[m][r] - M(m, r) * g[n][s])
                            rels.append((f"[M{m + 1}{n + 1},M{r + 1}{s + 1}]",
                                         vf_bracket(M(m, n), M(r, s)), rhs))
    return [(name, str(lhs), str(rhs)) for name, lhs, rhs in rels if lhs != rhs], len(rels)


# --------------------------------------------------------------------------
# coset (flag chart) realizations


def coset_fields(labels_rows: Sequence, index_parity: Sequence[int], chart: dict,
                 space: Space, top: Sequence[int]):
    """Fundamental vector fields of gl(m|n) on the big cell of a super flag.

    The chart is the matrix [1; X] where the rows in ``top`` form the
    identity block and the remaining rows carry coordinates: ``chart`` maps
    (row, col) to a variable name (col indexes the ``top`` block).  For
    g = [[A, B], [C, D]] the linear velocity is dX = C + D X - X A - X B X;
    the field is minus that velocity so that g -> field is a homomorphism.
    Returns a function g (sparse matrix dict) -> SuperVectorField.
    """
    top = list(top)
    tpos = {r: n for n, r in enumerate(top)}
    X = {}
    for (r, c), name in chart.items():
        X[(r, c)] = SuperPolynomial.var(space, name)

    def entry(r, c):
        # entry (r, c) of the full coset matrix, c ranging over the top block
        if r in tpos:
            return SuperPolynomial.const(space, int(tpos[r] == c))
        return X.get((r, c), SuperPolynomial(space))

    def field(g: dict) -> SuperVectorField:
        # velocity of the full matrix gZ, then re-normalize the top block to
        # the identity: dX = (gZ)_rest - X (gZ)_top.  For odd g the Grassmann
        # parameter passes X_{rk}, which costs the parity of that variable.
        parities = {(index_parity[a] + index_parity[b]) % 2 for (a, b) in g}
        if len(parities) > 1:
            raise ValueError("matrix must be homogeneous")
        odd = parities.pop() if parities else 0
        gz = {}
        for (a, b), x in g.items():
            if odd and index_parity[a]:
                # odd matrix units enter the Grassmann envelope with the
                # sign of their row index
                x = -x
            for c in range(len(top)):
                z = entry(b, c)
                if not z.is_zero():
                    key = (a, c)
                    gz[key] = gz.get(key, SuperPolynomial(space)) + z * x
        comps = {}
        for (r, c), name in chart.items():
            vel = gz.get((r, c), SuperPolynomial(space))
            for k, t in enumerate(top):
                gt = gz.get((t, c))
                xk = X.get((r, k))
                if gt is None or xk is None:
                    continue
                sign = -1 if odd and xk.parity == 1 else 1
                vel = vel - xk * gt * sign
            comps[space.index(name)] = -vel
        return SuperVectorField(space, comps)

    return field


# --------------------------------------------------------------------------
# N=1 chiral superspace

# eps_{12} = +1 lowers indices, eps^{12} = -1 raises them
EPS_LOW = ((0, 1), (-1, 0))
EPS_UP = ((0, -1), (1, 0))


def chiral_space() -> Space:
    """C^{4|2}: x^{a ad} named x{a}{ad} and theta^a named th{a} (a, ad in 1, 2)."""
    return Space(("x11", "x12", "x21", "x22"), ("th1", "th2"))


def chiral_n1_fields(literal: bool = False) -> dict:
    """The 24 supervector fields of the chiral N=1 superconformal action.

    Conventions: d_{a ad} = d/dx^{a ad}, d_a = d/dtheta^a, indices lowered
    with EPS_LOW and raised with EPS_UP, |x|^2 = x^{a ad} x_{a ad} / 2 and
    E the bosonic Euler field.  Names: P{a}{ad}, M{a}{b} (a <= b),
    Mb{ad}{bd}, D, R, K{a}{ad}, Q{a}, Qb{ad}, S{a}, Sb{ad}.

    With ``literal=True`` the special conformal and S fields use the
    coefficients K = |x|^2 d^{a ad} - 2 x^{a ad} E + theta^a x^{b ad} d_b and
    S = -x theta d + theta^2 d^a, which do not close.  The default uses
    K = -|x|^2 d^{a ad} + x^{a ad} E + theta^a x^{b ad} d_b and
    S = -x theta d - theta^2 d^a / 2, which do.
    """
    sp = chiral_space()
    r2 = range(2)
    x = [[SuperPolynomial.var(sp, f"x{a + 1}{ad + 1}") for ad in r2] for a in r2]
    th = [SuperPolynomial.var(sp, f"th{a + 1}") for a in r2]
    zero = SuperPolynomial(sp)
    dx = [[SuperVectorField.partial(sp, f"x{a + 1}{ad + 1}") for ad in r2] for a in r2]
    dth = [SuperVectorField.partial(sp, f"th{a + 1}") for a in r2]
    nothing = SuperVectorField(sp)

    def vsum(items):
        out = nothing
        for v in items:
            out = out + v
        return out

    def psum(items):
        out = zero
        for v in items:
            out = out + v
        return out

    # lowered objects
    th_low = [psum(th[b] * EPS_LOW[a][b] for b in r2) for a in r2]
    x_low_a = [[psum(x[b][ad] * EPS_LOW[a][b] for b in r2) for ad in r2] for a in r2]
    x_low_ad = [[psum(x[a][bd] * EPS_LOW[ad][bd] for bd in r2) for ad in r2] for a in r2]
    x_low = [[psum(x_low_a[a][bd] * EPS_LOW[ad][bd] for bd in r2) for ad in r2] for a in r2]
    d_up = [[vsum(dx[b][bd] * (EPS_UP[a][b] * EPS_UP[ad][bd]) for b in r2 for bd in r2)
             for ad in r2] for a in r2]
    dth_up = [vsum(dth[b] * EPS_UP[a][b] for b in r2) for a in r2]
    norm = psum(x[a][ad] * x_low[a][ad] for a in r2 for ad in r2) * Fraction(1, 2)
    theta2 = psum(th[a] * th_low[a] for a in r2)
    E = vsum(dx[a][ad].times(x[a][ad]) for a in r2 for ad in r2)
    Rf = vsum(dth[a].times(th[a]) for a in r2)

    out = {}
    for a in r2:
        for ad in r2:
            out[f"P{a + 1}{ad + 1}"] = dx[a][ad]
    for a in r2:
        for b in r2:
            if a <= b:
                def m_ab(a, b):
                    return (vsum(dx[b][ad].times(x_low_a[a][ad]) for ad in r2)
                            + dth[b].times(th_low[a]))
                out[f"M{a + 1}{b + 1}"] = m_ab(a, b) + m_ab(b, a)
    for ad in r2:
        for bd in r2:
            if ad <= bd:
                def mb(ad, bd):
                    return vsum(dx[a][bd].times(x_low_ad[a][ad]) for a in r2)
                out[f"Mb{ad + 1}{bd + 1}"] = mb(ad, bd) + mb(bd, ad)
    out["D"] = E + Rf * Fraction(1, 2)
    out["R"] = Rf
    for a in r2:
        for ad in r2:
            if literal:
                k = d_up[a][ad].times(norm) - E.times(x[a][ad] * 2)
            else:
                k = E.times(x[a][ad]) - d_up[a][ad].times(norm)
            k = k + vsum(dth[b].times(th[a] * x[b][ad]) for b in r2)
            out[f"K{a + 1}{ad + 1}"] = k
    for a in r2:
        out[f"Q{a + 1}"] = dth[a]
    for ad in r2:
        out[f"Qb{ad + 1}"] = vsum(dx[a][ad].times(th[a]) for a in r2)
    for a in r2:
        s = -vsum(dx[b][ad].times(x[a][ad] * th[b]) for ad in r2 for b in r2)
        c = 1 if literal else Fraction(-1, 2)
        out[f"S{a + 1}"] = s + dth_up[a].times(theta2 * c)
    for ad in r2:
        out[f"Sb{ad + 1}"] = vsum(dth[a].times(x[a][ad]) for a in r2)
    return out


def chiral_coset_fields(N: int = 1):
    """Coset fields of gl(4|N) on the chiral chart [1; x; theta].

    x^{a ad} sits in row ad (dotted block), column a; theta^a_i in odd row i.
    Returns (gl algebra, space, function matrix -> field).
    """
    from .algebra import gl_super, superconformal_labels, superconformal_weights
    G = gl_super(4, N, superconformal_labels(N), superconformal_weights(N))
    if N == 1:
        sp = chiral_space()
        th = {(a, 0): f"th{a + 1}" for a in range(2)}
    else:
        sp = Space(("x11", "x12", "x21", "x22"),
                   tuple(f"th{a + 1}_{i}" for i in range(N) for a in range(2)))
        th = {(a, i): f"th{a + 1}_{i}" for a in range(2) for i in range(N)}
    chart = {}
    for a in range(2):
        for ad in range(2):
            chart[(2 + ad, a)] = f"x{a + 1}{ad + 1}"
    for (a, i), name in th.items():
        chart[(4 + i, a)] = name
    return G, sp, coset_fields(None, G.index_parity, chart, sp, [0, 1])


# expected block of each named field in the matrix presentation:
# rows/cols 0,1 = alpha, 2,3 = alpha-dot, 4 = R index
def _chiral_positions():
    pos = {}
    for a in range(2):
        for ad in range(2):
            pos[f"P{a + 1}{ad + 1}"] = (2 + ad, a)
            pos[f"K{a + 1}{ad + 1}"] = (a, 2 + ad)
        pos[f"Q{a + 1}"] = (4, a)
        pos[f"S{a + 1}"] = (a, 4)
        pos[f"Qb{a + 1}"] = (2 + a, 4)
        pos[f"Sb{a + 1}"] = (4, 2 + a)
    return pos


@dataclass
class ChiralRealization:
    fields: dict           # name -> field (the normalized list)
    algebra: object        # sl(4|1) in the basis adapted to the list
    report: HomomorphismReport
    closure_defects: int
    literal_closure_defects: int
    anticommutator_ok: bool
    position_defects: list


def realize_chiral_n1() -> ChiralRealization:
    """The N=1 chiral realization, matched against sl(4|1) matrices.

    Each listed field F is pulled back through the coset realization to a
    matrix X_F.  Off-diagonal generators must land on the expected matrix
    unit, D on diag(1,1,-1,-1|0), R on diag(1,1,1,1|4), the M's in their
    diagonal blocks.  The algebra is then built on those matrices and the
    homomorphism is checked after solving for the diagonal normalization.
    """
    from .algebra import matrix_algebra
    from .linalg import EchelonBasis
    F = chiral_n1_fields()
    names = list(F)
    from .algebra import sl_super
    G, sp, coset = chiral_coset_fields(1)
    # the identity acts trivially, so pull back through sl(4|1) instead
    S = sl_super(4, 1, G.index_labels)
    solver = EchelonBasis()
    for m in S.matrices:
        if not solver.insert(coset(m).to_vector()):
            raise ArithmeticError("coset realization of sl(4|1) is not injective")
    pos = _chiral_positions()
    dmat = {(0, 0): 1, (1, 1): 1, (2, 2): -1, (3, 3): -1}
    rmat = {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1, (4, 4): 4}
    basis_mats = []
    position_defects = []
    for n in names:
        coords = solver.coordinates(F[n].to_vector())
        X = S.matrix_of(coords)
        if n in pos:
            expected = {pos[n]: Fraction(1)}
        elif n == "D":
            expected = {k: Fraction(v) for k, v in dmat.items()}
        elif n == "R":
            expected = {k: Fraction(v) for k, v in rmat.items()}
        else:
            lo = 0 if n.startswith("M") and not n.startswith("Mb") else 2
            ok = all(lo <= r < lo + 2 and lo <= c < lo + 2 for (r, c) in X)
            if not ok:
                position_defects.append(n)
            k0 = min(X)
            expected = {k: v / X[k0] for k, v in X.items()}
        if _matrix_ratio(X, expected) is None:
            position_defects.append(n)
        basis_mats.append(expected)
    ip = G.index_parity
    A = matrix_algebra(basis_mats, names, ip, G.index_labels,
                       label="sl(4|1) (chiral basis)")
    report = check_homomorphism([F[n] for n in names], A, rescale=True)
    closure = _closure_defects(F)
    literal = _closure_defects(chiral_n1_fields(literal=True))
    anti = all(vf_bracket(F[f"Q{a}"], F[f"Qb{ad}"]) == F[f"P{a}{ad}"]
               for a in (1, 2) for ad in (1, 2))
    return ChiralRealization(F, A, report, closure, literal, anti, position_defects)


def _matrix_ratio(X: dict, Y: dict):
    if set(X) != set(Y) or not X:
        return None
    k = min(X)
    c = X[k] / Y[k]
    return c if all(X[j] == c * Y[j] for j in X) else None


def _closure_defects(F: dict) -> int:
    from .linalg import EchelonBasis
    eb = EchelonBasis()
    names = list(F)
    for n in names:
        eb.insert(F[n].to_vector())
    bad = 0
    for i, a in enumerate(names):
        for b in names[i:]:
            if not eb.contains(vf_bracket(F[a], F[b]).to_vector()):
                bad += 1
    return bad


# --------------------------------------------------------------------------
# twisted realization on C^{2|N-1}


def twisted_space(N: int) -> Space:
    return Space.standard(2, N - 1)


def twisted_fields(N: int) -> dict:
    """Named holomorphic fields on C^{2|N-1}.

    p_i = d/dz_i, m_ij = z_i d/dz_j, k_i = z_i ehat with
    ehat = z d/dz + e d/de, the weight field z d/dz + (1/2) e d/de, odd
    fields d/de_a, e_a d/dz_i, z_i d/de_a, e_a ehat and R-fields
    e_a d/de_b.  For N = 1 ehat is the ordinary Euler field.
    """
    sp = twisted_space(N)
    z = [SuperPolynomial.var(sp, f"z{i}") for i in (1, 2)]
    eps = [SuperPolynomial.var(sp, f"e{a}") for a in range(1, N)]
    dz = [SuperVectorField.partial(sp, f"z{i}") for i in (1, 2)]
    de = [SuperVectorField.partial(sp, f"e{a}") for a in range(1, N)]
    ehat = euler_field(sp, include_odd=True)
    out = {}
    for i in range(2):
        out[f"p{i + 1}"] = dz[i]
    for i in range(2):
        for j in range(2):
            out[f"m{i + 1}{j + 1}"] = dz[j].times(z[i])
    for i in range(2):
        out[f"k{i + 1}"] = ehat.times(z[i])
    out["w"] = euler_field(sp, include_odd=True, odd_weight=Fraction(1, 2))
    for a in range(N - 1):
        out[f"de{a + 1}"] = de[a]
        for i in range(2):
            out[f"e{a + 1}dz{i + 1}"] = dz[i].times(eps[a])
            out[f"z{i + 1}de{a + 1}"] = de[a].times(z[i])
        out[f"e{a + 1}ehat"] = ehat.times(eps[a])
        for b in range(N - 1):
            out[f"r{a + 1}{b + 1}"] = de[b].times(eps[a])
    return out


def twisted_coset(N: int, target):
    """Fields of the target's matrices on the chart [1; z1; z2; e] of lines."""
    sp = twisted_space(N)
    chart = {(1, 0): "z1", (2, 0): "z2"}
    for a in range(1, N):
        chart[(2 + a, 0)] = f"e{a}"
    return coset_fields(None, target.index_parity, chart, sp, [0])


@dataclass
class TwistedRealization:
    N: int
    target: object
    fields: dict                 # target basis name -> field
    identification: object       # IsomorphismCertificate (induced -> target)
    report: HomomorphismReport   # against the induced algebra
    span_dim: int
    named_span_dim: int
    contained_in_named_span: bool


def realize_twisted(N: int) -> TwistedRealization:
    """Realize the twisted algebra on C^{2|N-1} and verify it against the
    induced algebra computed by module twisting."""
    if N not in (1, 2, 3, 4):
        raise ValueError("N must be 1, 2, 3 or 4")
    from .linalg import EchelonBasis
    from .twisting import cohomology, identify_with, superconformal_twist
    A, Qs, target = superconformal_twist(N)
    H = cohomology(A, Qs)
    cert = identify_with(H, target)
    field_of = twisted_coset(N, target)
    fields = {name: field_of(m) for name, m in zip(target.names, target.matrices)}
    tf = [fields[n] for n in target.names]
    if cert.ok:
        phi = [_lin_comb(tf, col, tf[0].space) for col in cert.matrix]
        report = check_homomorphism(phi, H.induced)
    else:
        report = HomomorphismReport(False, 0, defect={"reason": "identification failed"})
    named = EchelonBasis()
    for f in twisted_fields(N).values():
        named.insert(f.to_vector())
    mine = EchelonBasis()
    for f in tf:
        mine.insert(f.to_vector())
    contained = all(named.contains(f.to_vector()) for f in tf)
    return TwistedRealization(N, target, fields, cert, report, len(mine),
                              len(named), contained)
