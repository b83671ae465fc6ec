import pytest
from hypothesis import given, settings, strategies as st

from supertwist.algebra import (adjoint, defining, epsilon_algebra, epsilon_module, invariance_defects,
                                kappa_gv, psl_super, sl_super, su, supertranslation_algebra,
                                trace_form, trivial)


@pytest.mark.parametrize("m,n", [(2, 0), (3, 0), (2, 1), (3, 1), (4, 1), (2, 2)])
def test_sl_is_a_lie_superalgebra(m, n):
    A = sl_super(m, n)
    assert A.dim == (m + n) ** 2 - 1
    assert (A.even_dim, A.odd_dim) == (m * m + n * n - 1, 2 * m * n)
    assert A.check_jacobi()
    assert not A.parity_defects()


def test_psl_dimension_and_jacobi():
    A = psl_super(3, 3)
    assert (A.even_dim, A.odd_dim) == (16, 18)
    assert A.check_jacobi()


def test_supertranslations():
    T = supertranslation_algebra(2)
    assert (T.even_dim, T.odd_dim) == (4, 8)
    assert T.check_jacobi()
    assert not T.grading_defects()


@pytest.mark.parametrize("A", [su(2), su(3), sl_super(2, 1)])
def test_adjoint_and_defining_are_representations(A):
    assert adjoint(A).is_valid()
    assert defining(A).is_valid()


def test_fund_multiplicity_scales_traces():
    g = su(3)
    one = trace_form(defining(g), 2)
    assert trace_form(defining(g, 4), 2) == one * 4
    assert trace_form(defining(g, 4).expanded(), 2) == one * 4


@pytest.mark.parametrize("N", [2, 3])
def test_kappa_vanishes_exactly_at_twice_the_rank(N):
    g = su(N)
    for nf in range(1, 9):
        assert kappa_gv(g, defining(g, nf)).is_zero() == (nf == 2 * N)


def test_kappa_ratio_is_dual_coxeter_shift():
    # Tr_adj = 2N Tr_fund for sl(N), so kappa(fund^k) = (2N - k) Tr_fund
    for N in (2, 3):
        g = su(N)
        tf = trace_form(defining(g), 2)
        for k in range(0, 8):
            kap = kappa_gv(g, defining(g, k) if k else trivial(g, 0))
            if k == 2 * N:
                assert kap.is_zero()
            else:
                assert kap.ratio_to(tf) == 2 * N - k


@pytest.mark.parametrize("g", [su(2), su(3)])
def test_trace_forms_are_invariant(g):
    for rep in (adjoint(g), defining(g)):
        assert not invariance_defects(trace_form(rep, 2), g)


@pytest.mark.parametrize("g,k", [(su(2), 1), (su(2), 4), (su(3), 2), (sl_super(2, 1), 1)])
def test_degree_three_traces_vanish_after_eps_extension(g, k):
    gE = epsilon_algebra(g)
    assert gE.check_jacobi()
    assert trace_form(adjoint(gE), 3).is_zero()
    VE = epsilon_module(defining(g, k))
    assert VE.is_valid()
    assert trace_form(VE, 3).is_zero()


def test_degree_three_trace_is_nonzero_before_extension():
    # control: su(3) has a nonzero cubic Casimir on the fundamental
    assert not trace_form(defining(su(3)), 3).is_zero()


def test_kappa_rejects_mismatched_and_super_input():
    with pytest.raises(ValueError):
        kappa_gv(su(2), defining(su(3)))
    A = sl_super(2, 1)
    with pytest.raises(ValueError):
        kappa_gv(A, defining(A))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7))
def test_bracket_graded_antisymmetry(i, j):
    A = sl_super(2, 1)
    i, j = i % A.dim, j % A.dim
    sign = -(-1) ** (A.parity[i] * A.parity[j])
    assert A.bracket_basis(j, i) == {x: sign * c for x, c in A.bracket_basis(i, j).items()}
