from fractions import Fraction

import pytest

from supertwist.algebra import su, abelian
from supertwist.deformation import (PROFILES, QuadratureError, bump_integral, get_profile,
                                    jacobian_matrix, jacobian_ring, km_pullback_coefficient,
                                    koszul_current_complex, koszul_vf_complex,
                                    linf_relation_check, linf_residual, monomials,
                                    s_rho, s_rho_cochain_check, tangent_complex_degree0,
                                    vir_pullback_coefficient)
from supertwist.symbolform import SymbolContext
from supertwist.syntax import parse_poly

D = 6


def test_monomial_counts():
    assert [len(monomials(2, j)) for j in range(5)] == [1, 2, 3, 4, 5]
    assert len(monomials(3, 2)) == 6


@pytest.mark.parametrize("g", [su(2), abelian(1)])
def test_localization_to_the_line(g):
    C = koszul_current_complex(g, parse_poly("z2"), D=D)
    assert C.d_squared_zero()
    h = C.cohomology_by_degree()
    # C[z1] (x) g has dim g in each degree
    assert h[0] == [g.dim] * (D + 1)
    assert h[-1] == [0] * (D + 1)


def test_current_complex_unit_is_acyclic():
    h = koszul_current_complex(su(2), parse_poly("1"), D=4).cohomology_by_degree()
    assert not any(h[0]) and not any(h[-1])


def test_current_complex_zero_differential():
    C = koszul_current_complex(su(2), parse_poly("0*z1"), D=3)
    assert C.cohomology_by_degree() == {r: v for r, v in C.chain_dims_by_degree().items()}


def _quotient_by_power(n):
    # C[z1, z2]/(z2^k) has min(j + 1, k) monomials in degree j
    k = n - 1
    return [min(j + 1, k) for j in range(D + 1)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_powers_of_z2(n):
    f = parse_poly(f"z2^{n}")
    h = koszul_vf_complex(f, D=D).cohomology_by_degree()
    assert h[1] == _quotient_by_power(n)


HAND = {
    "z2": [0] * (D + 1),
    "z1*z2": [1] + [0] * D,
    "z1^2+z2^2": [1] + [0] * D,
    "z1^2*z2+z2^3": [1, 2, 1] + [0] * (D - 2),
}


@pytest.mark.parametrize("text", sorted(HAND))
def test_jacobian_oracle_against_hand_values(text):
    assert jacobian_ring(parse_poly(text), D=D).dims == HAND[text]


@pytest.mark.parametrize("text", ["z2", "z2^2", "z2^3", "z1*z2", "z1^2+z2^2", "z1^2*z2+z2^3"])
def test_vf_complex_matches_jacobian_ring(text):
    f = parse_poly(text)
    C = koszul_vf_complex(f, D=D)
    assert C.d_squared_zero()
    h = C.cohomology_by_degree()
    assert h[1] == jacobian_ring(f, D=D).dims
    assert h[0] == tangent_complex_degree0(f, D=D).dims
    assert not any(h[-1])


def test_vf_complex_extremes():
    assert not any(koszul_vf_complex(parse_poly("1"), D=3).cohomology_by_degree()[1])
    full = koszul_vf_complex(parse_poly("0*z1"), D=3)
    assert full.cohomology_by_degree()[1] == full.chain_dims_by_degree()[1]


def test_bad_polynomials_rejected():
    with pytest.raises(ValueError):
        koszul_vf_complex(parse_poly("e1*z1"))


@pytest.mark.parametrize("name", sorted(PROFILES))
def test_bump_integral(name):
    r = bump_integral(name, 1e-6)
    assert r.ok
    assert abs(r.value - 3.141592653589793j) < 1e-6


def test_profiles_validate():
    for p in PROFILES.values():
        p.validate()


def test_bump_integral_arguments():
    with pytest.raises(ValueError):
        bump_integral("gaussian", 2.0)
    with pytest.raises(ValueError):
        get_profile("nope")
    assert issubclass(QuadratureError, RuntimeError)


@pytest.mark.parametrize("parity", [0, 1])
def test_s_rho_is_a_cochain_map(parity):
    c = s_rho_cochain_check(parity)
    assert c.zero and c.control_nonzero


@pytest.mark.parametrize("pa,pb", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_linf_relation(pa, pb):
    c = linf_relation_check((pa, pb))
    assert c.zero
    assert c.control_nonzero


@pytest.mark.parametrize("wrong", ["rho^2", "rho"])
def test_linf_wrong_corrections_fail(wrong):
    assert not linf_residual(0, 1, wrong).is_zero()


def test_s_rho_leading_part():
    ctx = SymbolContext()
    a = ctx.field("alpha", 0)
    a0, a1 = s_rho(a).eps_split()
    assert str(a0) == "rho*alpha"
    assert not a1.is_zero()


def test_kac_moody_pullback():
    r = km_pullback_coefficient()
    assert r.coefficient == Fraction(-1, 2)
    assert r.terms["dbar(rho^2)/2z2 term matches"]
    assert r.terms["del(rho) dbar(rho) kappa(alpha, alpha) term"] == "0"


def test_virasoro_pullback():
    assert vir_pullback_coefficient().coefficient == Fraction(-1, 2)


@pytest.mark.parametrize("fn", [km_pullback_coefficient, vir_pullback_coefficient])
def test_dz1_insertion_vanishes(fn):
    r = fn(insertion=1)
    assert r.coefficient == 0
    assert r.dropped["z2 form degree"] > 0


def test_jacobian_matrix_of_lambda():
    ctx = SymbolContext()
    xi = ctx.scalar("xi", 1)
    lam, _ = s_rho(xi).eps_split()
    J = jacobian_matrix([lam, ctx.zero()], ctx)
    assert [[str(x) for x in row] for row in J] == [["d1(xi)*rho", "0"], ["xi*rho[1,0]", "0"]]
