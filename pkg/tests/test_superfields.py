import pytest
from hypothesis import given, settings, strategies as st

from supertwist.superfields import (Space, SuperPolynomial, SuperVectorField,
                                    conformal_relation_defects, euler_field,
                                    realize_chiral_n1, realize_conformal, realize_twisted,
                                    vf_bracket)

SP = Space.standard(2, 2)
coeff = st.integers(-3, 3)


@st.composite
def homogeneous_polys(draw, parity):
    terms = {}
    for _ in range(draw(st.integers(0, 3))):
        e = (draw(st.integers(0, 2)), draw(st.integers(0, 2)))
        o = draw(st.sampled_from([(), (0, 1)] if parity == 0 else [(0,), (1,)]))
        terms[(e, o)] = draw(coeff)
    return SuperPolynomial(SP, terms)


@st.composite
def fields(draw):
    p = draw(st.integers(0, 1))
    comps = {}
    for v in range(4):
        # component of d/dv has parity p + |v|
        comps[v] = draw(homogeneous_polys((p + SP.var_parity(v)) % 2))
    return SuperVectorField(SP, comps)


def _par(X):
    return X.parity or 0



@settings(max_examples=40, deadline=None)
@given(fields(), fields())
def test_graded_antisymmetry(X, Y):
    s = -(-1) ** (_par(X) * _par(Y))
    assert vf_bracket(Y, X) == vf_bracket(X, Y) * s


@settings(max_examples=25, deadline=None)
@given(fields(), fields(), fields())
def test_graded_jacobi(X, Y, Z):
    px, py, pz = _par(X), _par(Y), _par(Z)
    total = (vf_bracket(X, vf_bracket(Y, Z)) * (-1) ** (px * pz)
             + vf_bracket(Y, vf_bracket(Z, X)) * (-1) ** (py * px)
             + vf_bracket(Z, vf_bracket(X, Y)) * (-1) ** (pz * py))
    assert total.is_zero()


@settings(max_examples=40, deadline=None)
@given(fields(), fields(), homogeneous_polys(0))
def test_bracket_acts_as_commutator(X, Y, f):
    lhs = vf_bracket(X, Y)(f)
    rhs = X(Y(f)) - Y(X(f)) * (-1) ** (_par(X) * _par(Y))
    assert lhs == rhs


def test_euler_field_measures_degree():
    E = euler_field(SP)
    f = SuperPolynomial(SP, {((2, 1), ()): 1})
    assert E(f) == f * 3


@pytest.mark.parametrize("d", [3, 4, 5])
def test_conformal_relations(d):
    bad, checked = conformal_relation_defects(realize_conformal(d), d)
    assert checked > 0 and not bad


def test_conformal_control_detects_wrong_sign():
    F = dict(realize_conformal(4))
    F["K1"] = -F["K1"]
    bad, _ = conformal_relation_defects(F, 4)
    assert bad


def test_chiral_n1_realization():
    C = realize_chiral_n1()
    assert len(C.fields) == 24
    assert C.closure_defects == 0
    assert C.report.ok
    assert C.anticommutator_ok
    assert not C.position_defects


def test_literal_chiral_coefficients_do_not_close():
    assert realize_chiral_n1().literal_closure_defects > 0


@pytest.mark.parametrize("N", [1, 2, 4])
def test_twisted_realization(N):
    T = realize_twisted(N)
    assert T.identification.ok
    assert T.report.ok
    assert T.span_dim == T.target.dim


def test_odd_derivative_of_eps_times_weight_field():
    # e-hat = z1 d/dz1 + z2 d/dz2 + eps d/deps; eps * e-hat loses its eps d/deps part
    sp = Space(("z1", "z2"), ("eps",))
    euler = euler_field(sp)
    ehat = euler_field(sp, include_odd=True)
    eps = SuperPolynomial.var(sp, "eps")
    d_eps = SuperVectorField.partial(sp, "eps")
    assert vf_bracket(d_eps, ehat.times(eps)) == euler
    assert vf_bracket(d_eps, ehat.times(eps)) != ehat
