import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from supertwist.algebra import (SymmetricTensor, adjoint, defining, kappa_gv, sl_super, su,
                                trace_form, trivial)
from supertwist.vertex import (BRSTRefusal, FockTruncation, LaurentMode, ZeroMode,
                               bc_betagamma_system, brst_anomaly, brst_cohomology,
                               brst_current, brst_setup, km_antisymmetry_defects,
                               km_cocycle_defects, km_current_check, km_residue_cocycle,
                               q_matrix, q_squared_defect, residue, skew_ope,
                               vir_cocycle_defects, vir_residue_cocycle, witt_bracket, wick_ope)

G = su(2)
KAPPA = trace_form(adjoint(G), 2)


# residue cocycles


def _numeric_residue(fn, n=256):
    # (1/2 pi i) contour integral over the unit circle, trapezoid rule
    total = 0
    for k in range(n):
        z = cmath.exp(2j * cmath.pi * k / n)
        total += fn(z) * z
    return total / n


@pytest.mark.parametrize("m,n", [(1, -1), (2, -2), (-3, 3), (2, -1), (0, 0), (4, 1)])
def test_km_residue_against_contour_integral(m, n):
    h = G.names.index("h[0]")
    exact = km_residue_cocycle(h, m, h, n, KAPPA)
    approx = _numeric_residue(lambda z: m * z ** (m - 1) * z ** n) * KAPPA[(h, h)]
    assert abs(exact - approx) < 1e-9


def test_km_formula():
    for i in range(G.dim):
        for j in range(G.dim):
            for m in range(-5, 6):
                for n in range(-5, 6):
                    expect = KAPPA[(i, j)] * m if m + n == 0 else 0
                    assert km_residue_cocycle(i, m, j, n, KAPPA) == expect


def test_km_example_value():
    h = G.names.index("h[0]")
    assert km_residue_cocycle(h, 1, h, -1, KAPPA) == KAPPA[(h, h)]


def test_km_two_cocycle():
    assert not km_cocycle_defects(G, KAPPA, 5)
    assert not km_antisymmetry_defects(G, KAPPA, 5)


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
def test_km_two_cocycle_superalgebra(m, n):
    # odd-odd entries of the supertrace form are antisymmetric
    g = sl_super(m, n)
    kap = trace_form(defining(g, 1), 2)
    assert not km_cocycle_defects(g, kap, 3)
    assert not km_antisymmetry_defects(g, kap, 3)
    odd = [i for i in range(g.dim) if g.parity[i]]
    assert any(kap[(i, j)] for i in odd for j in odd)
    assert all(kap[(j, i)] == -kap[(i, j)] for i in odd for j in odd)


def test_km_non_invariant_form_fails():
    bad = SymmetricTensor(2, G.dim, {(0, 0): 1, (2, 2): 1})
    assert km_cocycle_defects(G, bad, 2)


def test_vir_values():
    for m in range(-5, 6):
        assert vir_residue_cocycle(m, -m) == m - m ** 3
        assert vir_residue_cocycle(m, -m, normalized=True) == Fraction(m - m ** 3, 24)
    for m in (-1, 0, 1):
        assert vir_residue_cocycle(m, -m) == 0
    assert all(vir_residue_cocycle(m, n) == 0
               for m in range(-5, 6) for n in range(-5, 6) if m + n)


def test_vir_against_contour_integral():
    for m in (2, 3, -4):
        f2 = lambda z: (m + 1) * m * z ** (m - 1) * (-m + 1) * z ** (-m)
        assert abs(vir_residue_cocycle(m, -m) - _numeric_residue(f2)) < 1e-9


def test_witt_bracket():
    for m in range(-3, 4):
        for n in range(-3, 4):
            expect = {m + n: Fraction(n - m)} if n != m else {}
            assert witt_bracket(m, n) == expect


def test_vir_two_cocycle():
    assert not vir_cocycle_defects(5)
    assert not vir_cocycle_defects(5, normalized=True)


def test_laurent_helpers():
    assert residue({-1: 3, 2: 1}) == 3
    assert LaurentMode.of(0, 2).vector == {0: 1}


# Wick engine


S = bc_betagamma_system(1, 1)


def _g(name, d=0):
    return S.gen(name, 0, d)


def test_basic_ope():
    assert wick_ope(_g("gamma"), _g("beta")) == {1: S.one()}
    assert wick_ope(_g("beta"), _g("gamma")) == {1: -S.one()}
    assert wick_ope(_g("a"), _g("b")) == {1: S.one()}
    assert wick_ope(_g("b"), _g("a")) == {1: S.one()}
    assert wick_ope(_g("gamma", 1), _g("beta")) == {2: -S.one()}
    assert wick_ope(_g("gamma"), _g("gamma")) == {}


@pytest.mark.parametrize("pair,c", [(("beta", "gamma"), 2), (("b", "a"), -2)])
def test_free_field_central_charges(pair, c):
    x, y = pair
    T = _g(x) * _g(y, 1) * -1
    ope = wick_ope(T, T)
    assert ope[4] == S.one() * Fraction(c, 2)
    assert 3 not in ope
    assert ope[2] == T * 2
    assert ope[1] == T.derivative()


GENS = [("a", 0), ("b", 0), ("gamma", 0), ("beta", 0), ("a", 1), ("gamma", 1), ("beta", 1)]


@st.composite
def monomials(draw):
    out = S.one() * draw(st.integers(1, 3))
    for name, d in draw(st.lists(st.sampled_from(GENS), min_size=1, max_size=3)):
        out = out * _g(name, d)
    return out


@settings(max_examples=60, deadline=None)
@given(monomials(), monomials())
def test_skew_symmetry(A, B):
    if A.is_zero() or B.is_zero():
        return
    assert skew_ope(wick_ope(A, B), A.parity, B.parity) == wick_ope(B, A)


def test_composite_algebra():
    a, b = _g("a"), _g("b")
    assert (a * a).is_zero()
    assert a * b == b * a * -1
    assert (_g("gamma") * _g("beta")).weight == 1
    assert (a * b).ghost_number == 0


def test_unknown_generator():
    with pytest.raises(ValueError):
        S.gen("c")


# currents, anomaly, BRST


@pytest.mark.parametrize("N,nf", [(2, 1), (2, 3), (3, 2)])
def test_matter_currents_form_kac_moody(N, nf):
    g = su(N)
    r = km_current_check(g, defining(g, nf))
    assert r.bracket_ok and not r.higher_poles
    assert r.level_over_trace == -1


def test_brst_current_weight_and_ghost_number():
    _, J = brst_current(G, defining(G, 2))
    assert J.weight == 1 and J.ghost_number == 1 and J.parity == 1


@pytest.mark.parametrize("N", [2, 3])
def test_anomaly_proportional_to_kappa(N):
    g = su(N)
    constants = set()
    for nf in range(1, 2 * N + 3):
        r = brst_anomaly(g, defining(g, nf))
        assert r.classical_residue == 0
        assert r.vanishes == (nf == 2 * N)
        assert r.proportional
        if r.constant is not None:
            constants.add(r.constant)
    assert constants == {1}


def test_wrong_ghost_sign_leaves_classical_terms():
    assert brst_anomaly(G, defining(G, 4), ghost_coeff=Fraction(1, 2)).classical_residue > 0


def test_anomaly_for_pure_ghosts():
    r = brst_anomaly(G, trivial(G, 0))
    assert r.tensor == kappa_gv(G, trivial(G, 0))


def test_fock_mode_algebra():
    s2 = bc_betagamma_system(1, 1)
    F = FockTruncation(s2, 2)
    _, st1 = F.create(("beta", 0, -1), ())
    _, st2 = F.create(("gamma", 0, 0), st1)
    # [gamma_1, beta_{-1}] = 1
    assert F.annihilate(("gamma", 0, 1), st2) == [(1, ((("gamma", 0, 0), 1),))]
    # beta(z) gamma(w) ~ -1/(z-w) gives beta_0 gamma_0 |0> = -|0>
    _, g0 = F.create(("gamma", 0, 0), ())
    assert F.annihilate(("beta", 0, 0), g0) == [(-1, ())]


def test_fock_state_counts():
    s2 = bc_betagamma_system(1, 1)
    F = FockTruncation(s2, 1)
    # weight 0: 1, a_0; weight 1 with charge 0: beta_{-1} gamma_0, a_{-1}, b_{-1} times {1, a_0}
    assert len(F.states) == 2 * (1 + 3)


def _brst_q(nf, W=1):
    _, J, F = brst_setup(G, defining(G, nf), W)
    return F, q_matrix(J, F)


def test_q_squared_zero_at_nf4():
    F, Qm = _brst_q(4)
    assert q_squared_defect(Qm)["nonzero_entries"] == 0


def test_q_squared_nonzero_at_nf3():
    F, Qm = _brst_q(3)
    assert q_squared_defect(Qm)["nonzero_entries"] > 0


def test_refusal_reports_defect():
    with pytest.raises(BRSTRefusal) as exc:
        brst_cohomology(G, defining(G, 3), 1)
    rep = exc.value.report
    assert rep["q_squared"]["nonzero_entries"] > 0
    assert rep["anomaly"]["anomaly_vanishes"] is False


def test_weight_zero_cohomology_is_lie_algebra_cohomology():
    r = brst_cohomology(G, defining(G, 4), 1)
    # H*(sl2) = H*(S^3)
    assert [r.dims[(0, k)] for k in range(4)] == [1, 0, 0, 1]
    assert r.extra["vacuum_is_cocycle"]


def test_euler_characteristic_matches_chain_count():
    r = brst_cohomology(G, defining(G, 4), 1)
    _, _, F = brst_setup(G, defining(G, 4), 1)
    for w in (0, 1):
        chains = sum((-1) ** F.attr(s, "ghost") for s in F.states if F.weight(s) == w)
        coh = sum((-1) ** gh * d for (ww, gh), d in r.dims.items() if ww == w)
        assert chains == coh


def test_zero_mode_preserves_weight():
    _, J, F = brst_setup(G, defining(G, 4), 1)
    op = ZeroMode(J, F)
    for s in F.states[:50]:
        for t in op(s):
            assert F.weight(t) == F.weight(s)
            assert F.attr(t, "ghost") == F.attr(s, "ghost") + 1


@pytest.mark.parametrize("nf,zero", [(4, True), (3, False)])
def test_q_squared_independent_of_matter_weights(nf, zero):
    half = Fraction(1, 2)
    _, J, F = brst_setup(G, defining(G, nf), 1, weights=(0, 1, half, half))
    assert (q_squared_defect(q_matrix(J, F))["nonzero_entries"] == 0) == zero
