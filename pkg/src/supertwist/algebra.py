"""Finite-dimensional Lie superalgebras with exact structure constants."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .linalg import EchelonBasis, Q, vec_iadd, vec_scale

# --------------------------------------------------------------------------
# the algebra


class SuperLieAlgebra:
    """Basis, parities, optional Z-grading and sparse structure constants.

    ``structure`` maps ordered pairs ``(i, j)`` with ``i <= j`` to the sparse
    vector ``[b_i, b_j]``; the remaining brackets follow from graded
    antisymmetry.  Matrix algebras additionally carry ``matrices`` (one
    sparse supermatrix per basis element) and ``index_parity``.
    """

    def __init__(self, names: Sequence[str], parity: Sequence[int],
                 structure: dict, zgrading: Sequence[int] | None = None,
                 matrices: Sequence[dict] | None = None,
                 index_labels: Sequence[str] | None = None,
                 index_parity: Sequence[int] | None = None,
                 matrix_relations: Sequence[dict] = (),
                 label: str = ""):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("basis labels must be unique")
        self.parity = tuple(int(p) % 2 for p in parity)
        self.zgrading = tuple(zgrading) if zgrading is not None else None
        self.structure = {}
        for (i, j), v in structure.items():
            v = {k: Q(x) for k, x in v.items() if x}
            if not v:
                continue
            if i > j:
                i, j = j, i
                v = vec_scale(v, -(-1) ** (self.parity[i] * self.parity[j]))
            if i == j and self.parity[i] == 0:
                raise ValueError("even element with nonzero self-bracket")
            self.structure[(i, j)] = v
        self.matrices = tuple(matrices) if matrices is not None else None
        self.index_labels = tuple(index_labels) if index_labels else None
        self.index_parity = tuple(index_parity) if index_parity else None
        self.matrix_relations = tuple(matrix_relations)
        self.label = label
        self._matrix_solver = None

    # basic data
    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def even_dim(self) -> int:
        return self.parity.count(0)

    @property
    def odd_dim(self) -> int:
        return self.parity.count(1)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def basis(self, i) -> "AlgebraElement":
        if isinstance(i, str):
            i = self.index(i)
        return AlgebraElement(self, {i: Fraction(1)})

    def element(self, coeffs: dict) -> "AlgebraElement":
        out = {}
        for k, x in coeffs.items():
            if isinstance(k, str):
                k = self.index(k)
            if x:
                out[k] = Q(x)
        return AlgebraElement(self, out)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    # brackets
    def bracket_basis(self, i: int, j: int) -> dict:
        if i <= j:
            return self.structure.get((i, j), {})
        v = self.structure.get((j, i))
        if not v:
            return {}
        return vec_scale(v, -(-1) ** (self.parity[i] * self.parity[j]))

    def bracket_vectors(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, x in u.items():
            for j, y in v.items():
                b = self.bracket_basis(i, j)
                if b:
                    vec_iadd(out, b, x * y)
        return out

    def bracket(self, x: "AlgebraElement", y: "AlgebraElement") -> "AlgebraElement":
        if x.algebra is not self or y.algebra is not self:
            raise ValueError("elements belong to a different algebra")
        return AlgebraElement(self, self.bracket_vectors(x.coeffs, y.coeffs))

    def vector_parity(self, v: dict):
        ps = {self.parity[i] for i in v}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    # invariants
    def jacobi_defects(self, limit: int | None = None) -> list:
        """Basis triples violating the graded Jacobi identity.

        Uses [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]].
        """
        bad = []
        n = self.dim
        p = self.parity
        for a in range(n):
            for b in range(a, n):
                ab = self.bracket_basis(a, b)
                for c in range(b, n):
                    lhs = self.bracket_vectors({a: 1}, self.bracket_basis(b, c))
                    rhs = self.bracket_vectors(ab, {c: 1})
                    vec_iadd(rhs, self.bracket_vectors(
                        {b: 1}, self.bracket_basis(a, c)), (-1) ** (p[a] * p[b]))
                    if lhs != rhs:
                        bad.append((a, b, c))
                        if limit and len(bad) >= limit:
                            return bad
        return bad

    def check_jacobi(self) -> bool:
        return not self.jacobi_defects(limit=1)

    def parity_defects(self) -> list:
        bad = []
        for (i, j), v in self.structure.items():
            for k in v:
                if self.parity[k] != (self.parity[i] + self.parity[j]) % 2:
                    bad.append((i, j, k))
        return bad

    def grading_defects(self) -> list:
        if self.zgrading is None:
            return []
        g = self.zgrading
        return [(i, j, k) for (i, j), v in self.structure.items()
                for k in v if g[k] != g[i] + g[j]]

    # matrix algebras
    def is_matrix_algebra(self) -> bool:
        return self.matrices is not None

    def matrix_of(self, x) -> dict:
        """Supermatrix (sparse {(r, c): q}) of an element or coefficient dict."""
        if not self.is_matrix_algebra():
            raise ValueError(f"{self.label or 'algebra'} is not a matrix algebra")
        coeffs = x.coeffs if isinstance(x, AlgebraElement) else x
        out: dict = {}
        for i, c in coeffs.items():
            vec_iadd(out, self.matrices[i], c)
        return out

    def coordinates_of_matrix(self, m: dict) -> dict:
        """Coordinates of a supermatrix, modulo ``matrix_relations``."""
        if self._matrix_solver is None:
            eb = EchelonBasis()
            for mat in list(self.matrices) + list(self.matrix_relations):
                if not eb.insert(mat):
                    raise ValueError("basis matrices are dependent")
            self._matrix_solver = eb
        coords = self._matrix_solver.coordinates(m)
        return {k: x for k, x in coords.items() if k < self.dim}

    def summary(self) -> str:
        return f"{self.label or 'algebra'}: dims {self.even_dim}|{self.odd_dim}"

    def __repr__(self):
        return f"<SuperLieAlgebra {self.summary()}>"


@dataclass(frozen=True)
class AlgebraElement:
    algebra: SuperLieAlgebra
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           {k: Q(x) for k, x in self.coeffs.items() if x})

    @property
    def parity(self):
        """0 or 1, or None for inhomogeneous elements (zero counts as even)."""
        return self.algebra.vector_parity(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        return AlgebraElement(self.algebra, _add(self.coeffs, other.coeffs, 1))

    def __sub__(self, other):
        return AlgebraElement(self.algebra, _add(self.coeffs, other.coeffs, -1))

    def __neg__(self):
        return AlgebraElement(self.algebra, vec_scale(self.coeffs, -1))

    def __mul__(self, c):
        return AlgebraElement(self.algebra, vec_scale(self.coeffs, Q(c)))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.algebra is self.algebra
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def bracket(self, other):
        return self.algebra.bracket(self, other)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            name = self.algebra.names[k]
            parts.append(name if c == 1 else f"({c})*{name}")
        return " + ".join(parts)


def _add(u, v, c):
    out = dict(u)
    vec_iadd(out, v, c)
    return out


# --------------------------------------------------------------------------
# supermatrices


def _mat_mul(a: dict, b: dict) -> dict:
    by_row: dict = {}
    for (r, c), x in b.items():
        by_row.setdefault(r, []).append((c, x))
    out: dict = {}
    for (r, k), x in a.items():
        for c, y in by_row.get(k, ()):
            vec_iadd(out, {(r, c): x * y})
    return out


def supercommutator(a: dict, b: dict, pa: int, pb: int) -> dict:
    out = _mat_mul(a, b)
    vec_iadd(out, _mat_mul(b, a), -(-1) ** (pa * pb))
    return out


def matrix_parity(m: dict, index_parity: Sequence[int]):
    ps = {(index_parity[r] + index_parity[c]) % 2 for (r, c) in m}
    if len(ps) > 1:
        return None
    return ps.pop() if ps else 0


def matrix_algebra(basis_matrices: Sequence[dict], names: Sequence[str],
                   index_parity: Sequence[int], index_labels=None,
                   index_weights=None, relations: Sequence[dict] = (),
                   label: str = "") -> SuperLieAlgebra:
    """Subalgebra of gl(m|n) spanned by homogeneous matrices.

    ``relations`` are matrices that are quotiented out (e.g. the identity
    for psl); they must span an ideal.
    """
    mats = [{k: Q(x) for k, x in m.items() if x} for m in basis_matrices]
    parity = []
    for m in mats:
        p = matrix_parity(m, index_parity)
        if p is None:
            raise ValueError("basis matrices must be homogeneous")
        parity.append(p)
    zgrading = None
    if index_weights is not None:
        zgrading = []
        for m in mats:
            ws = {index_weights[r] - index_weights[c] for (r, c) in m}
            if len(ws) != 1:
                zgrading = None
                break
            zgrading.append(ws.pop())
    alg = SuperLieAlgebra(names, parity, {}, zgrading=zgrading, matrices=mats,
                          index_labels=index_labels, index_parity=index_parity,
                          matrix_relations=relations, label=label)
    structure = {}
    for i in range(len(mats)):
        for j in range(i, len(mats)):
            if i == j and parity[i] == 0:
                continue
            br = supercommutator(mats[i], mats[j], parity[i], parity[j])
            if br:
                v = alg.coordinates_of_matrix(br)
                if v:
                    structure[(i, j)] = v
    alg.structure = structure
    return alg


def _default_labels(m: int, n: int) -> list:
    return [f"{k}" for k in range(m)] + [f"{k}'" for k in range(n)]


def _elem_name(labels, r, c):
    return f"e[{labels[r]},{labels[c]}]"


def gl_super(m: int, n: int, labels: Sequence[str] | None = None,
             index_weights: Sequence[int] | None = None) -> SuperLieAlgebra:
    """gl(m|n) in the basis of elementary matrices e_{rc}.

    The first m indices are even, the last n odd.  By default the Z-grading
    of e_{rc} is parity(r) - parity(c).
    """
    if m < 0 or n < 0 or m + n < 1:
        raise ValueError("need m, n >= 0 and m + n >= 1")
    labels = list(labels) if labels is not None else _default_labels(m, n)
    ip = [0] * m + [1] * n
    weights = index_weights if index_weights is not None else ip
    mats, names = [], []
    for r in range(m + n):
        for c in range(m + n):
            mats.append({(r, c): Fraction(1)})
            names.append(_elem_name(labels, r, c))
    return matrix_algebra(mats, names, ip, labels, weights, label=f"gl({m}|{n})")


def _sl_matrices(m: int, n: int, labels):
    ip = [0] * m + [1] * n
    mats, names = [], []
    for r in range(m + n):
        for c in range(m + n):
            if r != c:
                mats.append({(r, c): Fraction(1)})
                names.append(_elem_name(labels, r, c))
    diag = []
    for k in range(m + n - 1):
        sign = (-1) ** (ip[k] + ip[k + 1])
        diag.append(({(k, k): Fraction(1), (k + 1, k + 1): Fraction(-sign)},
                     f"h[{labels[k]}]"))
    if m == n:
        # the identity is supertraceless; it replaces the last Cartan element
        diag[-1] = ({(k, k): Fraction(1) for k in range(m + n)}, "id")
    for mat, name in diag:
        mats.append(mat)
        names.append(name)
    return mats, names, ip


def sl_super(m: int, n: int, labels: Sequence[str] | None = None,
             index_weights: Sequence[int] | None = None) -> SuperLieAlgebra:
    """Supertraceless matrices; for m = n the identity is kept as a basis element."""
    if m < 0 or n < 0 or m + n < 2:
        raise ValueError("sl needs m + n >= 2")
    labels = list(labels) if labels is not None else _default_labels(m, n)
    mats, names, ip = _sl_matrices(m, n, labels)
    weights = index_weights if index_weights is not None else ip
    tag = f"sl({m})" if n == 0 else f"sl({m}|{n})"
    return matrix_algebra(mats, names, ip, labels, weights, label=tag)


def psl_super(m: int, n: int | None = None, labels: Sequence[str] | None = None,
              index_weights: Sequence[int] | None = None) -> SuperLieAlgebra:
    """sl(n|n) modulo its center.  Called as psl_super(n) or psl_super(n, n)."""
    if n is None:
        n = m
    if m != n:
        raise ValueError("psl requires equal blocks n|n")
    labels = list(labels) if labels is not None else _default_labels(m, n)
    mats, names, ip = _sl_matrices(m, n, labels)
    ident = mats.pop()
    names.pop()
    weights = index_weights if index_weights is not None else ip
    return matrix_algebra(mats, names, ip, labels, weights, relations=[ident],
                          label=f"psl({n}|{n})")


def supertrace(x) -> Fraction:
    """tr(even block) - tr(odd block) of a matrix-algebra element."""
    if isinstance(x, AlgebraElement):
        alg = x.algebra
        m = alg.matrix_of(x)
        ip = alg.index_parity
    else:
        m, ip = x
    total = Fraction(0)
    for (r, c), v in m.items():
        if r == c:
            total += v if ip[r] == 0 else -v
    return total


def superconformal_labels(N: int) -> list:
    """Index labels of C^{4|N}: alpha = +,-; alpha-dot = 1d,2d; R-indices 0..N-1."""
    return ["+", "-", "1d", "2d"] + [str(i) for i in range(N)]


def superconformal_weights(N: int) -> list:
    """Index weights giving P weight 2, Q weight 1, M weight 0, S -1, K -2."""
    return [-1, -1, 1, 1] + [0] * N


# --------------------------------------------------------------------------
# supertranslations

# complexified Pauli-type basis with rational entries: 1, s1, i*s2, s3
SIGMA = (
    ((1, 0), (0, 1)),
    ((0, 1), (1, 0)),
    ((0, 1), (-1, 0)),
    ((1, 0), (0, -1)),
)


def supertranslation_algebra(k: int) -> SuperLieAlgebra:
    """The 4d N=k supertranslation algebra t_{N=k}.

    Even P_0..P_3 (weight 2); odd Q[a,i], Qb[ad,i] (weight 1) with
    [Q[a,i], Qb[ad,j]] = delta_ij * sum_mu SIGMA[mu][a][ad] P_mu.

    The Clifford pairing is inverted so that each P_mu comes out with
    coefficient SIGMA-dual; what matters is that it is nondegenerate.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    names = [f"P{mu}" for mu in range(4)]
    names += [f"Q[{a},{i}]" for a in range(2) for i in range(k)]
    names += [f"Qb[{a},{i}]" for a in range(2) for i in range(k)]
    parity = [0] * 4 + [1] * (4 * k)
    zg = [2] * 4 + [1] * (4 * k)
    qi = {(a, i): 4 + a * k + i for a in range(2) for i in range(k)}
    qbi = {(a, i): 4 + 2 * k + a * k + i for a in range(2) for i in range(k)}
    structure = {}
    for a in range(2):
        for ad in range(2):
            v = {mu: Fraction(SIGMA[mu][a][ad]) for mu in range(4) if SIGMA[mu][a][ad]}
            for i in range(k):
                structure[(qi[a, i], qbi[ad, i])] = v
    return SuperLieAlgebra(names, parity, structure, zgrading=zg,
                           label=f"t(N={k})")


# --------------------------------------------------------------------------
# representations


@dataclass
class Representation:
    """Action of a SuperLieAlgebra by sparse supermatrices.

    ``multiplicity`` k stands for the direct sum of k copies of the block;
    traces are scaled by k.  ``expanded()`` materializes the sum.
    """

    algebra: SuperLieAlgebra
    dim: int
    parity: tuple
    action: tuple
    multiplicity: int = 1
    label: str = ""

    @property
    def total_dim(self) -> int:
        return self.dim * self.multiplicity

    def expanded(self) -> "Representation":
        k, d = self.multiplicity, self.dim
        if k == 1:
            return self
        act = []
        for m in self.action:
            out = {}
            for c in range(k):
                for (r, s), x in m.items():
                    out[(r + c * d, s + c * d)] = x
            act.append(out)
        return Representation(self.algebra, k * d, tuple(self.parity) * k,
                              tuple(act), 1, self.label)

    def homomorphism_defects(self, limit=None) -> list:
        A = self.algebra
        bad = []
        for i in range(A.dim):
            for j in range(i, A.dim):
                lhs = supercommutator(self.action[i], self.action[j],
                                      A.parity[i], A.parity[j])
                rhs: dict = {}
                for k, c in A.bracket_basis(i, j).items():
                    vec_iadd(rhs, self.action[k], c)
                if lhs != rhs:
                    bad.append((i, j))
                    if limit and len(bad) >= limit:
                        return bad
        return bad

    def is_valid(self) -> bool:
        return not self.homomorphism_defects(limit=1)


def adjoint(A: SuperLieAlgebra) -> Representation:
    act = []
    for i in range(A.dim):
        m = {}
        for j in range(A.dim):
            for k, x in A.bracket_basis(i, j).items():
                m[(k, j)] = x
        act.append(m)
    return Representation(A, A.dim, A.parity, tuple(act), 1, f"adjoint {A.label}")


def defining(A: SuperLieAlgebra, multiplicity: int = 1) -> Representation:
    """The defining (fundamental) module of a matrix algebra."""
    if not A.is_matrix_algebra():
        raise ValueError("defining module needs a matrix algebra")
    if A.matrix_relations:
        raise ValueError("quotient algebras have no defining module")
    ip = A.index_parity
    tag = "fund" if multiplicity == 1 else f"fund^{multiplicity}"
    return Representation(A, len(ip), tuple(ip), tuple(A.matrices),
                           multiplicity, tag)


def trivial(A: SuperLieAlgebra, dim: int = 0) -> Representation:
    return Representation(A, dim, (0,) * dim, tuple({} for _ in range(A.dim)),
                          1, f"trivial^{dim}")


def su(n: int) -> SuperLieAlgebra:
    """Complexified su(n), i.e. sl(n) over Q in the E_ij, H_i basis."""
    return sl_super(n, 0)


def abelian(dim: int = 1) -> SuperLieAlgebra:
    return SuperLieAlgebra([f"t{i}" for i in range(dim)], [0] * dim, {},
                           zgrading=[0] * dim, label=f"abelian({dim})")


# --------------------------------------------------------------------------
# epsilon extensions


def epsilon_algebra(A: SuperLieAlgebra) -> SuperLieAlgebra:
    """g[eps] = g + eps*g with an odd parameter eps, eps^2 = 0."""
    n = A.dim
    names = list(A.names) + [f"eps*{x}" for x in A.names]
    parity = list(A.parity) + [(p + 1) % 2 for p in A.parity]
    structure = {}
    for i in range(n):
        for j in range(i, n):
            v = A.bracket_basis(i, j)
            if v:
                structure[(i, j)] = v
        for j in range(n):
            # [X, eps Y] = (-1)^{|X|} eps [X, Y]
            v = A.bracket_basis(i, j)
            if v:
                sign = (-1) ** A.parity[i]
                structure[(i, n + j)] = {n + k: sign * x for k, x in v.items()}
    return SuperLieAlgebra(names, parity, structure, label=f"{A.label}[eps]")


def epsilon_module(rep: Representation) -> Representation:
    """V[eps] = V + eps*V as a module over g[eps]."""
    rep = rep.expanded()
    A = rep.algebra
    gE = epsilon_algebra(A)
    d = rep.dim
    parity = tuple(rep.parity) + tuple((p + 1) % 2 for p in rep.parity)
    act = []
    for i in range(A.dim):
        m = {}
        pX = A.parity[i]
        for (r, c), x in rep.action[i].items():
            m[(r, c)] = x
            # X(eps v) = (-1)^{|X|} eps X v
            m[(r + d, c + d)] = (-1) ** pX * x
        act.append(m)
    for i in range(A.dim):
        # (eps X) v = eps (X v); (eps X)(eps v) = 0
        act.append({(r + d, c): x for (r, c), x in rep.action[i].items()})
    return Representation(gE, 2 * d, parity, tuple(act), 1, f"{rep.label}[eps]")


# --------------------------------------------------------------------------
# invariant forms


@dataclass(frozen=True)
class SymmetricTensor:
    """Sparse graded-symmetric tensor keyed by sorted index tuples.

    ``parity`` gives the parity of each index (empty means all even).  Reading
    an unsorted index tuple applies the Koszul sign of the sorting permutation.
    Entries given at construction are taken to be at their sorted keys.
    """

    degree: int
    dim: int
    entries: dict
    parity: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries",
                           {tuple(sorted(k)): Q(v) for k, v in self.entries.items() if v})

    def __getitem__(self, idx):
        v = self.entries.get(tuple(sorted(idx)), Fraction(0))
        if v and self.parity:
            perm = sorted(range(len(idx)), key=lambda a: idx[a])
            v *= _koszul_perm_sign(perm, [self.parity[i] for i in idx])
        return v

    def is_zero(self) -> bool:
        return not self.entries

    def __sub__(self, other):
        out = dict(self.entries)
        vec_iadd(out, other.entries, -1)
        return SymmetricTensor(self.degree, self.dim, out, self.parity)

    def __add__(self, other):
        out = dict(self.entries)
        vec_iadd(out, other.entries, 1)
        return SymmetricTensor(self.degree, self.dim, out, self.parity)

    def __mul__(self, c):
        return SymmetricTensor(self.degree, self.dim, vec_scale(self.entries, Q(c)), self.parity)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, SymmetricTensor) and self.degree == other.degree
                and self.entries == other.entries)

    def ratio_to(self, other: "SymmetricTensor"):
        """c with self == c * other, or None.  Zero over zero gives None."""
        if other.is_zero():
            return None
        k = next(iter(sorted(other.entries)))
        c = self[k] / other[k]
        return c if self == other * c else None

    def to_json(self) -> dict:
        return {",".join(map(str, k)): str(v) for k, v in sorted(self.entries.items())}


def _str_of_product(mats, index_parity) -> Fraction:
    cur = mats[0]
    for m in mats[1:]:
        cur = _mat_mul(cur, m)
        if not cur:
            return Fraction(0)
    return supertrace((cur, index_parity))


def _koszul_perm_sign(perm, parities) -> int:
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and parities[perm[a]] and parities[perm[b]]:
                sign = -sign
    return sign


def trace_form(rep: Representation, degree: int) -> SymmetricTensor:
    """The graded-symmetrized supertrace str(rho(x_1)...rho(x_d))."""
    if degree not in (2, 3):
        raise ValueError("degree must be 2 or 3")
    A = rep.algebra
    if rep.dim == 0:
        return SymmetricTensor(degree, A.dim, {}, A.parity if A.odd_dim else ())
    entries = {}
    for idx in itertools.combinations_with_replacement(range(A.dim), degree):
        ps = [A.parity[i] for i in idx]
        total = Fraction(0)
        for perm in itertools.permutations(range(degree)):
            mats = [rep.action[idx[p]] for p in perm]
            if not all(mats):
                continue
            total += _koszul_perm_sign(perm, ps) * _str_of_product(mats, rep.parity)
        if total:
            entries[idx] = total * rep.multiplicity / factorial(degree)
    return SymmetricTensor(degree, A.dim, entries, A.parity if A.odd_dim else ())


def kappa_gv(g: SuperLieAlgebra, V: Representation) -> SymmetricTensor:
    """Tr_adj(X^2) - Tr_V(X^2)."""
    if g.odd_dim:
        raise ValueError("kappa_gv expects an ordinary (purely even) Lie algebra")
    if V.algebra is not g:
        raise ValueError("representation is over a different algebra")
    return trace_form(adjoint(g), 2) - trace_form(V, 2)


def invariance_defects(T: SymmetricTensor, A: SuperLieAlgebra) -> list:
    """Basis triples with T([z,x],y) + (-1)^{|z||x|} T(x,[z,y]) != 0."""
    bad = []
    p = A.parity
    for z in range(A.dim):
        for x in range(A.dim):
            zx = A.bracket_basis(z, x)
            for y in range(x, A.dim):
                zy = A.bracket_basis(z, y)
                s = sum((c * T[(k, y)] for k, c in zx.items()), Fraction(0))
                s += (-1) ** (p[z] * p[x]) * sum((c * T[(x, k)] for k, c in zy.items()),
                                                  Fraction(0))
                if s:
                    bad.append((z, x, y))
    return bad
