from fractions import Fraction

from hypothesis import given, strategies as st

from supertwist.linalg import EchelonBasis, SparseMatrix, nullspace, rank, span_basis


def _det(rows):
    # cofactor expansion: an independent oracle for small square matrices
    n = len(rows)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * _det(minor)
    return total


def _to_vec(row):
    return {j: Fraction(x) for j, x in enumerate(row) if x}


small = st.integers(-3, 3)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_full_rank_iff_nonzero_determinant(rows):
    r = rank(_to_vec(row) for row in rows)
    assert (r == 3) == (_det([[Fraction(x) for x in row] for row in rows]) != 0)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_nullity(rows):
    vecs = [_to_vec(r) for r in rows]
    ns = nullspace(vecs, 4)
    assert rank(vecs) + len(ns) == 4
    for v in ns:
        for row in vecs:
            assert sum(row.get(k, 0) * x for k, x in v.items()) == 0


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_of_transpose(rows):
    cols = [[r[j] for r in rows] for j in range(4)]
    assert rank(_to_vec(r) for r in rows) == rank(_to_vec(c) for c in cols)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(small, min_size=4, max_size=4))
def test_coordinates_round_trip(rows, coeffs):
    eb = EchelonBasis()
    for r in rows:
        eb.insert(_to_vec(r))
    target: dict = {}
    for c, v in zip(coeffs, eb.accepted):
        for k, x in v.items():
            target[k] = target.get(k, 0) + c * x
    target = {k: x for k, x in target.items() if x}
    coords = eb.coordinates(target)
    back: dict = {}
    for i, c in coords.items():
        for k, x in eb.accepted[i].items():
            back[k] = back.get(k, 0) + c * x
    assert {k: x for k, x in back.items() if x} == target


def test_span_basis_keeps_input_order():
    vs = [{0: 1}, {0: 2}, {1: 1}, {0: 1, 1: 1}]
    assert span_basis(vs) == [{0: 1}, {1: 1}]


def test_sparse_matrix_product_and_rank():
    A = SparseMatrix.from_dense([[1, 2], [3, 4]])
    B = SparseMatrix.from_dense([[0, 1], [1, 0]])
    assert (A @ B).to_dense() == [[2, 1], [4, 3]]
    assert A.rank() == 2
    assert SparseMatrix.from_dense([[1, 2], [2, 4]]).nullspace() == [{0: -2, 1: 1}]
