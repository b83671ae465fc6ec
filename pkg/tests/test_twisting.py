import itertools

import pytest

from supertwist.algebra import sl_super, supertranslation_algebra
from supertwist.twisting import (ad_differential, chiral_supercharge, classify_supercharge,
                                 cohomology, euler_characteristic, identify_with,
                                 is_maurer_cartan, superconformal_twist)

EXPECTED = {1: (8, 0), 2: (9, 6), 4: (16, 18)}


@pytest.fixture(scope="module", params=[1, 2, 4])
def twist(request):
    N = request.param
    A, Q, target = superconformal_twist(N)
    return N, A, Q, target, cohomology(A, Q)


def test_dims(twist):
    N, A, Q, target, H = twist
    assert H.dims == EXPECTED[N]


def test_super_euler_characteristic_is_preserved(twist):
    # sdim is an invariant of passing to cohomology
    N, A, Q, target, H = twist
    assert euler_characteristic(A) == H.even_dim - H.odd_dim


def test_kernel_minus_image(twist):
    N, A, Q, target, H = twist
    assert H.kernel_dim - H.image_dim == sum(H.dims)


def test_representatives_are_closed(twist):
    N, A, Q, target, H = twist
    for r in H.representatives:
        assert Q.bracket(r).is_zero()


def test_induced_bracket_is_lie(twist):
    assert twist[4].induced.check_jacobi()


def test_identification(twist):
    N, A, Q, target, H = twist
    cert = identify_with(H, target)
    assert cert.ok
    assert cert.pairs_checked > 0


def test_identification_with_wrong_target_fails():
    A, Q, _ = superconformal_twist(2)
    H = cohomology(A, Q)
    assert not identify_with(H, sl_super(3, 2)).ok


def test_differential_squares_to_zero():
    A, Q, _ = superconformal_twist(2)
    d = ad_differential(A, Q)
    assert (d @ d).is_zero()


def test_maurer_cartan_rejects_even():
    A, _, _ = superconformal_twist(1)
    with pytest.raises(ValueError):
        is_maurer_cartan(A.basis(A.names[A.parity.index(0)]))


def test_non_square_zero_supercharge():
    T = supertranslation_algebra(1)
    Q = chiral_supercharge(T, {(0, 0): 1}, {(0, 0): 1})
    assert not is_maurer_cartan(Q)
    with pytest.raises(ValueError):
        classify_supercharge(Q)


def test_square_zero_chiral_supercharges_are_holomorphic():
    T = supertranslation_algebra(1)
    grid = range(-2, 3)
    seen = 0
    for q0, q1, b0, b1 in itertools.product(grid, repeat=4):
        Q = chiral_supercharge(T, {(0, 0): q0, (1, 0): q1}, {(0, 0): b0, (1, 0): b1})
        if Q.is_zero() or not is_maurer_cartan(Q):
            continue
        seen += 1
        assert classify_supercharge(Q).image_rank == 2
    assert seen == 2 * (5 ** 2 - 1)
