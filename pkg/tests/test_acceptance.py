"""Acceptance criteria; each test prints one PASS/FAIL line.

Run ``python3 tests/test_acceptance.py`` for the bare summary.
"""

import itertools
import time
from fractions import Fraction

import pytest

from supertwist.algebra import (adjoint, defining, epsilon_algebra, epsilon_module, kappa_gv,
                                sl_super, su, supertranslation_algebra, trace_form)


def c01_twist():
    from supertwist.twisting import cohomology, identify_with, superconformal_twist
    t0 = time.perf_counter()
    expected = {1: (8, 0), 2: (9, 6), 4: (16, 18)}
    got, ok = {}, True
    for N, dims in expected.items():
        A, Q, target = superconformal_twist(N)
        H = cohomology(A, Q)
        got[N] = f"{H.even_dim}|{H.odd_dim}"
        ok &= H.dims == dims and identify_with(H, target).ok
    dt = time.perf_counter() - t0
    return ok and dt < 5, f"dims {got}, identified, {dt:.2f}s"


def c02_conformal():
    from supertwist.superfields import conformal_relation_defects, realize_conformal
    bad, checked = conformal_relation_defects(realize_conformal(4), 4)
    return not bad, f"{checked} relations in d=4, {len(bad)} defects"


def c03_chiral():
    from supertwist.superfields import realize_chiral_n1
    C = realize_chiral_n1()
    ok = (len(C.fields) == 24 and C.closure_defects == 0 and C.report.ok
          and C.anticommutator_ok)
    return ok, (f"{len(C.fields)} fields, closure defects {C.closure_defects}, "
                f"homomorphism {C.report.ok}, {{Q,Qb}}=P {C.anticommutator_ok}")


def c04_twisted_realization():
    from supertwist.superfields import realize_twisted
    res = {N: realize_twisted(N) for N in (1, 2, 4)}
    ok = all(T.identification.ok and T.report.ok for T in res.values())
    return ok, "homomorphism from the induced algebra for N=1,2,4"


def c05_supercharges():
    from supertwist.twisting import chiral_supercharge, classify_supercharge, is_maurer_cartan
    T = supertranslation_algebra(1)
    ranks = set()
    count = 0
    for q0, q1, b0, b1 in itertools.product(range(-2, 3), repeat=4):
        Q = chiral_supercharge(T, {(0, 0): q0, (1, 0): q1}, {(0, 0): b0, (1, 0): b1})
        if Q.is_zero() or not is_maurer_cartan(Q):
            continue
        count += 1
        ranks.add(classify_supercharge(Q).image_rank)
    return ranks == {2} and count > 0, f"{count} square-zero supercharges, image ranks {ranks}"


def c06_localization():
    from supertwist.deformation import koszul_current_complex
    from supertwist.syntax import parse_poly
    g, D = su(2), 8
    C = koszul_current_complex(g, parse_poly("z2"), D=D)
    h = C.cohomology_by_degree()
    ok = C.d_squared_zero() and h[0] == [g.dim] * (D + 1) and not any(h[-1])
    return ok, f"H^0 per degree {h[0]}, H^-1 zero, oracle dim g = {g.dim}"


def c07_jacobian():
    from supertwist.deformation import jacobian_ring, koszul_vf_complex
    from supertwist.syntax import parse_poly
    D = 8
    ok = True
    for text in ("z2", "z2^2", "z2^3", "z1*z2", "z1^2+z2^2"):
        f = parse_poly(text)
        h = koszul_vf_complex(f, D=D).cohomology_by_degree()
        jac = jacobian_ring(f, D=D)
        ok &= h[1] == jac.dims and jac.stabilized
    for n in (2, 3, 4):
        h = koszul_vf_complex(parse_poly(f"z2^{n}"), D=D).cohomology_by_degree()
        ok &= h[1] == [min(j + 1, n - 1) for j in range(D + 1)]
    return ok, "degree +1 cohomology equals the Jacobian ring for all five f up to D=8"


def c08_linf():
    from supertwist.deformation import linf_relation_check
    certs = [linf_relation_check((a, b)) for a in (0, 1) for b in (0, 1)]
    ok = all(c.zero for c in certs) and all(c.control_nonzero for c in certs)
    return ok, "residual 0 for parities 00, 01, 10, 11; rho^2 control nonzero"


def c09_pullback():
    from supertwist.deformation import (PROFILES, bump_integral, km_pullback_coefficient,
                                        vir_pullback_coefficient)
    half = Fraction(-1, 2)
    km, vir = km_pullback_coefficient(), vir_pullback_coefficient()
    ok = km.coefficient == half and vir.coefficient == half
    ok &= km_pullback_coefficient(insertion=1).coefficient == 0
    ok &= vir_pullback_coefficient(insertion=1).coefficient == 0
    times = []
    for name in PROFILES:
        t0 = time.perf_counter()
        r = bump_integral(name, 1e-6)
        times.append(time.perf_counter() - t0)
        ok &= r.ok and abs(r.value - 3.141592653589793j) < 1e-6
    ok &= len(PROFILES) >= 3 and max(times) < 1
    return ok, (f"km {km.coefficient}, vir {vir.coefficient}, dz1 insertions 0, "
                f"{len(PROFILES)} profiles give pi*i (max {max(times):.3f}s)")


def c10_cocycles():
    from supertwist.vertex import (km_cocycle_defects, km_residue_cocycle, vir_cocycle_defects,
                                   vir_residue_cocycle)
    g = su(2)
    kap = trace_form(adjoint(g), 2)
    rng = range(-5, 6)
    ok = all(km_residue_cocycle(i, m, j, n, kap) == (kap[(i, j)] * m if m + n == 0 else 0)
             for i in range(g.dim) for j in range(g.dim) for m in rng for n in rng)
    ok &= all(vir_residue_cocycle(m, n) == 0 for m in rng for n in rng if m + n)
    ok &= all(vir_residue_cocycle(m, -m) == m - m ** 3 for m in rng)
    ok &= all(vir_residue_cocycle(m, -m) == 0 for m in (-1, 0, 1))
    ok &= not km_cocycle_defects(g, kap, 5) and not vir_cocycle_defects(5)
    return ok, "KM = kappa*m*delta, Vir = m - m^3 on m+n=0, 2-cocycle identities for |m|,|n|,|k|<=5"


def c11_anomaly():
    from supertwist.vertex import brst_anomaly
    ok = True
    constants = set()
    for N in (2, 3):
        g = su(N)
        for nf in range(1, 9):
            V = defining(g, nf)
            zero = kappa_gv(g, V).is_zero()
            ok &= zero == (nf == 2 * N)
            r = brst_anomaly(g, V)
            ok &= r.proportional and r.vanishes == zero
            if r.constant is not None:
                constants.add(r.constant)
    ok &= len(constants) == 1
    return ok, f"kappa = 0 iff N_f = 2 N_c; anomaly / kappa = {sorted(map(str, constants))}"


def c12_brst():
    from supertwist.vertex import BRSTRefusal, brst_cohomology
    g = su(2)
    t0 = time.perf_counter()
    r = brst_cohomology(g, defining(g, 4), 2)
    dt = time.perf_counter() - t0
    ok = r.q_squared_zero and dt < 60
    try:
        brst_cohomology(g, defining(g, 3), 2)
        refused, defect = False, None
    except BRSTRefusal as exc:
        refused, defect = True, exc.report["q_squared"]
    ok &= refused and defect["nonzero_entries"] > 0
    return ok, (f"N_f=4: Q^2=0 on {r.n_states} states in {dt:.1f}s; N_f=3 refused, "
                f"Q^2 nonzero entries {defect and defect['nonzero_entries']}")


def c13_cubic_traces():
    cases = [(su(2), 1), (su(2), 4), (su(3), 1), (su(3), 6), (sl_super(2, 1), 1)]
    ok = True
    for g, k in cases:
        ok &= trace_form(adjoint(epsilon_algebra(g)), 3).is_zero()
        ok &= trace_form(epsilon_module(defining(g, k)), 3).is_zero()
        ok &= trace_form(epsilon_module(adjoint(g)), 3).is_zero()
    return ok, f"zero cubic trace forms on g[eps], V[eps] for {len(cases)} (g, V) pairs"


CRITERIA = [c01_twist, c02_conformal, c03_chiral, c04_twisted_realization, c05_supercharges,
            c06_localization, c07_jacobian, c08_linf, c09_pullback, c10_cocycles, c11_anomaly,
            c12_brst, c13_cubic_traces]


def _line(k, fn):
    ok, detail = fn()
    return ok, f"criterion {k:2d} {'PASS' if ok else 'FAIL'}: {fn.__name__[4:]}: {detail}"


@pytest.mark.parametrize("k", range(1, len(CRITERIA) + 1))
def test_criterion(k, capsys):
    ok, line = _line(k, CRITERIA[k - 1])
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    for k, fn in enumerate(CRITERIA, 1):
        print(_line(k, fn)[1])
