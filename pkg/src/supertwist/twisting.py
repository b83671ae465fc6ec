"""Square-zero supercharges, the ad_Q differential and its cohomology."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgebraElement, SuperLieAlgebra
from .linalg import EchelonBasis, SparseMatrix, nullspace, vec_iadd


def _require_odd(Q: AlgebraElement) -> None:
    if Q.is_zero():
        return
    if Q.parity != 1:
        raise ValueError("supercharge must be odd")


def is_maurer_cartan(Q: AlgebraElement) -> bool:
    """True iff [Q, Q] = 0 exactly.  Even input is rejected."""
    _require_odd(Q)
    return Q.bracket(Q).is_zero()


def ad_differential(A: SuperLieAlgebra, Q: AlgebraElement) -> SparseMatrix:
    """Matrix of [Q, -] in the basis of A (columns are images of basis vectors)."""
    if Q.algebra is not A:
        raise ValueError("Q is not an element of A")
    if not is_maurer_cartan(Q):
        raise ValueError("[Q, Q] != 0; not a Maurer-Cartan element")
    cols = [A.bracket_vectors(Q.coeffs, {j: 1}) for j in range(A.dim)]
    return SparseMatrix.from_columns(A.dim, cols)


# --------------------------------------------------------------------------
# supercharge classification


@dataclass
class SuperchargeClass:
    element: AlgebraElement
    image_rank: int

    @property
    def holomorphic(self) -> bool:
        return self.image_rank == 2

    @property
    def kind(self) -> str:
        return {0: "trivial", 2: "holomorphic", 4: "topological"}.get(
            self.image_rank, "other")


def classify_supercharge(Q: AlgebraElement) -> SuperchargeClass:
    """Rank of [Q, -] from the odd part into the translations.

    The translations are the basis elements of Z-grading 2 (weight of P).
    """
    A = Q.algebra
    _require_odd(Q)
    if not Q.bracket(Q).is_zero():
        raise ValueError("supercharge is not square-zero")
    odd = [i for i in range(A.dim) if A.parity[i] == 1]
    images = [A.bracket_vectors(Q.coeffs, {j: 1}) for j in odd]
    eb = EchelonBasis()
    for v in images:
        eb.insert(v)
    return SuperchargeClass(Q, len(eb))


def chiral_supercharge(T: SuperLieAlgebra, q: dict, qbar: dict | None = None) -> AlgebraElement:
    """Q = sum q[a,i] Q[a,i] + sum qbar[ad,i] Qb[ad,i] in t_{N=k}."""
    coeffs = {f"Q[{a},{i}]": x for (a, i), x in q.items()}
    for (a, i), x in (qbar or {}).items():
        coeffs[f"Qb[{a},{i}]"] = x
    return T.element(coeffs)


# --------------------------------------------------------------------------
# cohomology


@dataclass
class CohomologyResult:
    algebra: SuperLieAlgebra
    Q: AlgebraElement
    representatives: list
    induced: SuperLieAlgebra
    kernel_dim: int
    image_dim: int
    image: list = field(repr=False, default_factory=list)

    @property
    def even_dim(self) -> int:
        return self.induced.even_dim

    @property
    def odd_dim(self) -> int:
        return self.induced.odd_dim

    @property
    def dims(self) -> tuple:
        return (self.even_dim, self.odd_dim)

    def class_coordinates(self, v: dict) -> dict:
        """Coordinates of a closed vector in the basis of representatives."""
        solver = self._solver()
        coords = solver.coordinates(v)
        k = len(self.image)
        return {i - k: x for i, x in coords.items() if i >= k}

    def _solver(self) -> EchelonBasis:
        if getattr(self, "_eb", None) is None:
            eb = EchelonBasis()
            for v in self.image:
                eb.insert(v)
            for r in self.representatives:
                eb.insert(r.coeffs)
            self._eb = eb
        return self._eb


def _blocks(A: SuperLieAlgebra) -> dict:
    key = (lambda i: (A.parity[i], A.zgrading[i])) if A.zgrading else (lambda i: (A.parity[i],))
    out: dict = {}
    for i in range(A.dim):
        out.setdefault(key(i), []).append(i)
    return out


def cohomology(A: SuperLieAlgebra, Q: AlgebraElement, pivot_order=None) -> CohomologyResult:
    """H(A, ad_Q) with its induced bracket.

    Kernel and image are computed block by block (parity and Z-grading), so
    every representative is homogeneous.  ``pivot_order`` permutes the column
    order used for pivoting; any permutation gives an isomorphic result.
    """
    d = ad_differential(A, Q)
    order = list(pivot_order) if pivot_order is not None else list(range(A.dim))
    rank_in_order = {c: r for r, c in enumerate(order)}
    rows = d.rows()
    image_basis = EchelonBasis(order)
    for c in d.cols:
        image_basis.insert(c)
    image = list(image_basis.accepted)

    kernel = []
    for cols in _blocks(A).values():
        cols = sorted(cols, key=rank_in_order.__getitem__)
        sub_rows = [{j: r[j] for j in cols if j in r} for r in rows]
        sub_rows = [r for r in sub_rows if r]
        kernel.extend(nullspace(sub_rows, A.dim, col_order=cols))

    # representatives: kernel vectors independent modulo the image
    eb = EchelonBasis(order)
    for v in image:
        eb.insert(v)
    reps = []
    for v in kernel:
        if eb.insert(v):
            reps.append(v)
    reps.sort(key=lambda v: rank_in_order[min(v, key=rank_in_order.__getitem__)])
    reps = [_normalize(v, rank_in_order) for v in reps]

    names, parity, zg = [], [], []
    for v in reps:
        lead = min(v, key=rank_in_order.__getitem__)
        name = f"[{A.names[lead]}]"
        while name in names:
            name += "'"
        names.append(name)
        parity.append(A.vector_parity(v))
        if A.zgrading is not None:
            zg.append(A.zgrading[lead])
    result = CohomologyResult(A, Q, [AlgebraElement(A, v) for v in reps],
                              None, len(kernel),
                              len(image), image)
    structure = {}
    for i in range(len(reps)):
        for j in range(i, len(reps)):
            if i == j and parity[i] == 0:
                continue
            br = A.bracket_vectors(reps[i], reps[j])
            if not br:
                continue
            if d.apply(br):
                raise ArithmeticError("bracket of closed elements is not closed")
            coords = result.class_coordinates(br)
            if coords:
                structure[(i, j)] = coords
    induced = SuperLieAlgebra(names, parity, structure,
                              zgrading=zg if A.zgrading is not None else None,
                              label=f"H({A.label}, Q)")
    if not induced.check_jacobi():
        raise ArithmeticError("induced bracket violates the Jacobi identity")
    result.induced = induced
    return result


def _normalize(v: dict, rank_in_order: dict) -> dict:
    lead = min(v, key=rank_in_order.__getitem__)
    c = v[lead]
    return {k: x / c for k, x in v.items()}


def euler_characteristic(A: SuperLieAlgebra) -> int:
    return A.even_dim - A.odd_dim


# --------------------------------------------------------------------------
# identification with a target algebra


@dataclass
class IsomorphismCertificate:
    ok: bool
    matrix: list = field(default_factory=list)   # columns: images of source basis
    pairs_checked: int = 0
    self_pairs_checked: int = 0
    mismatch: dict | None = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "pairs_checked": self.pairs_checked,
               "self_pairs_checked": self.self_pairs_checked}
        if self.mismatch:
            out["mismatch"] = self.mismatch
        if self.matrix:
            out["matrix"] = [{str(k): str(x) for k, x in sorted(c.items())}
                             for c in self.matrix]
        return out


def verify_isomorphism(columns: list, source: SuperLieAlgebra,
                       target: SuperLieAlgebra) -> IsomorphismCertificate:
    """Check that the linear map (column j = image of source basis j) is a
    parity-preserving, bracket-preserving bijection."""
    if (source.even_dim, source.odd_dim) != (target.even_dim, target.odd_dim):
        return IsomorphismCertificate(False, mismatch={
            "reason": "dimension mismatch",
            "source": [source.even_dim, source.odd_dim],
            "target": [target.even_dim, target.odd_dim]})
    for j, c in enumerate(columns):
        if c and target.vector_parity(c) != source.parity[j]:
            return IsomorphismCertificate(False, columns, mismatch={
                "reason": "parity not preserved", "basis": source.names[j]})
    eb = EchelonBasis()
    for c in columns:
        eb.insert(c)
    if len(eb) != target.dim:
        return IsomorphismCertificate(False, columns, mismatch={
            "reason": "not bijective", "rank": len(eb)})
    pairs = selfs = 0
    for i in range(source.dim):
        for j in range(i, source.dim):
            lhs = target.bracket_vectors(columns[i], columns[j])
            rhs: dict = {}
            for k, x in source.bracket_basis(i, j).items():
                vec_iadd(rhs, columns[k], x)
            if lhs != rhs:
                return IsomorphismCertificate(False, columns, pairs, selfs, mismatch={
                    "reason": "bracket mismatch",
                    "pair": [source.names[i], source.names[j]],
                    "image_of_bracket": {target.names[k]: str(x) for k, x in sorted(rhs.items())},
                    "bracket_of_images": {target.names[k]: str(x) for k, x in sorted(lhs.items())}})
            if i == j:
                selfs += 1
            else:
                pairs += 1
    return IsomorphismCertificate(True, columns, pairs, selfs)


def deletion_map(A: SuperLieAlgebra, target: SuperLieAlgebra,
                 delete=("+", "0")):
    """Linear map on matrices deleting the rows and columns of the given
    indices; returns a function from A-vectors to target-vectors."""
    if not (A.is_matrix_algebra() and target.is_matrix_algebra()):
        raise ValueError("deletion map needs matrix algebras")
    labels = A.index_labels
    dead = {labels.index(x) for x in delete}
    keep = [k for k in range(len(labels)) if k not in dead]
    new_index = {k: n for n, k in enumerate(keep)}
    if len(keep) != len(target.index_parity):
        raise ValueError("target has the wrong matrix size")
    for k in keep:
        if A.index_parity[k] != target.index_parity[new_index[k]]:
            raise ValueError("index parities do not match after deletion")

    def apply(v: dict) -> dict:
        m = A.matrix_of(v)
        out = {(new_index[r], new_index[c]): x for (r, c), x in m.items()
               if r in new_index and c in new_index}
        return target.coordinates_of_matrix(out)

    return apply


def identify_with(H: CohomologyResult, target: SuperLieAlgebra,
                  delete=("+", "0")) -> IsomorphismCertificate:
    """Identify H with the target via the index-deletion map.

    A representative of the class of e_{mu nu} (mu != +, nu != 0) goes to
    e_{mu nu} with the + and 0 rows/columns removed; the class of
    e_{00} + e_{++} goes to zero in the diagonal, which is what the
    deletion does.  The result is verified, not assumed.
    """
    if H.dims != (target.even_dim, target.odd_dim):
        return IsomorphismCertificate(False, mismatch={
            "reason": "dimension mismatch", "source": list(H.dims),
            "target": [target.even_dim, target.odd_dim]})
    try:
        phi = deletion_map(H.algebra, target, delete)
        columns = [phi(r.coeffs) for r in H.representatives]
    except ValueError as exc:
        return IsomorphismCertificate(False, mismatch={"reason": str(exc)})
    return verify_isomorphism(columns, H.induced, target)


def compose_identifications(c1: IsomorphismCertificate, c2: IsomorphismCertificate,
                            H1: CohomologyResult, H2: CohomologyResult,
                            target: SuperLieAlgebra) -> IsomorphismCertificate:
    """Verify phi2^{-1} o phi1 : H1.induced -> H2.induced."""
    eb = EchelonBasis()
    for c in c2.matrix:
        eb.insert(c)
    columns = [eb.coordinates(c) for c in c1.matrix]
    return verify_isomorphism(columns, H1.induced, H2.induced)


def superconformal_twist(N: int):
    """(A, Q, target) for the holomorphic twist of the 4d N superconformal algebra."""
    from .algebra import psl_super, sl_super, superconformal_labels, superconformal_weights
    labels = superconformal_labels(N)
    weights = superconformal_weights(N)
    if N == 4:
        A = psl_super(4, 4, labels, weights)
        target = psl_super(3, 3, ["-", "1d", "2d", "1", "2", "3"])
    else:
        A = sl_super(4, N, labels, weights)
        tl = ["-", "1d", "2d"] + [str(i) for i in range(1, N)]
        target = sl_super(3, N - 1, tl)
    Q = A.basis("e[0,+]")
    return A, Q, target
