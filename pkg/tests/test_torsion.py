from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcfrey.factor import primes_up_to
from abcfrey.frey import WeierstrassModel, frey_model
from abcfrey.maps import PreconditionError, TorsionFamily, table
from abcfrey.torsion import (
    INFINITY,
    ChangeOfVariables,
    RationalPoint,
    UndefinedParameter,
    add_points,
    certify_torsion,
    count_points,
    frey_curve_of,
    frey_to_universal,
    good_primes,
    halvable,
    multiply,
    negate,
    point_order,
    tabulated_cov,
    torsion_upper_bound,
    transform,
    universal_curve,
    universal_curve_tabulated,
    verify_cov,
)

T = TorsionFamily
SEEDS = {T.C2xC2: (4, 121), T.C2xC4: (32, 49), T.C2xC6: (432, 299693), T.C2xC8: (4, 121)}


def brute_count(m: WeierstrassModel, p: int) -> int:
    a1, a2, a3, a4, a6 = (int(c) % p for c in m.coefficients)
    n = 1
    for x in range(p):
        rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                n += 1
    return n


def test_universal_curve_tabulated_c2x4_example():
    m = universal_curve_tabulated(T.C2xC4, 2)
    assert m.coefficients == (0, -6, -6, 0, 0)
    assert str(m) == "y^2 - 6y = x^3 - 6x^2"


def test_tabulated_c2x4_lacks_rational_two_torsion():
    # 2-torsion points have 2y + a1 x + a3 = 0, i.e. y = 3 here: x^3 - 6x^2 + 9 = 0
    cubic = [c for c in range(-20, 21) if c**3 - 6 * c**2 + 9 == 0]
    assert cubic == []


def test_universal_curve_c2x4_has_order_four_point():
    for t in (2, 3, Fraction(5, 2), -4):
        m = universal_curve(T.C2xC4, t)
        assert point_order(m, RationalPoint(0, 0)) == 4


@pytest.mark.parametrize("fam,order", [(T.C2xC6, 6), (T.C2xC8, 8)])
def test_universal_generator_orders(fam, order):
    for t in (Fraction(7, 2), 6, Fraction(11, 3)):
        assert point_order(universal_curve(fam, t), RationalPoint(0, 0)) == order


def test_universal_c2x2_coefficients():
    t = Fraction(3, 7)
    m = universal_curve(T.C2xC2, t)
    assert m.a2 == t**4 - 12 * t**3 + 6 * t**2 - 12 * t + 1
    assert m.a4 == -8 * t * (t - 1) ** 4 * (t**2 + 1)


def test_universal_curve_poles():
    with pytest.raises(UndefinedParameter):
        universal_curve(T.C2xC6, 3)
    with pytest.raises(UndefinedParameter):
        universal_curve(T.C2xC4, 1)
    with pytest.raises(UndefinedParameter):
        universal_curve(T.C2xC2, 1)  # singular


def test_transform_identity():
    m = frey_model(5, 11)
    assert transform(m, ChangeOfVariables(1)) == m


def test_transform_c2x2_scaling():
    x, y = 4, 121
    F = frey_curve_of(T.C2xC2, x, y)
    assert transform(F, ChangeOfVariables(x**2)) == universal_curve(T.C2xC2, Fraction(y, x))


def test_transform_c2x6_seed():
    x, y = 432, 299693
    cov = tabulated_cov(T.C2xC6, x, y)
    assert cov.t == Fraction(9 * x + y, x + y)
    assert transform(frey_curve_of(T.C2xC6, x, y), cov) == universal_curve(T.C2xC6, cov.t)


def test_c2x8_table_maps_universal_to_frey():
    x, y = 4, 121
    cov = tabulated_cov(T.C2xC8, x, y)
    assert transform(universal_curve(T.C2xC8, cov.t), cov) == frey_curve_of(T.C2xC8, x, y)


def test_verify_cov_examples():
    assert verify_cov(T.C2xC4, 32, 49)
    assert verify_cov(T.C2xC8, 4, 121)
    assert not verify_cov(T.C2xC4, 32, 49, tabulated_model=True)
    with pytest.raises(PreconditionError):
        verify_cov(T.C2xC2, 3, 5)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(T)), st.integers(1, 300), st.integers(0, 300))
def test_verify_cov_random(fam, k, m):
    x = 6 * k if fam is T.C2xC6 else 2 * k
    y = 2 * m + 1
    from math import gcd

    if gcd(x, y) != 1:
        return
    A, B, _ = table(fam).evaluate(x, y)
    if A <= 0 or B <= 0:
        return
    try:
        assert verify_cov(fam, x, y)
    except UndefinedParameter:
        pass


def test_cov_inverse_roundtrip():
    cov = ChangeOfVariables(Fraction(2, 3), 5, Fraction(-1, 2), 7)
    m = frey_model(3, 13)
    assert transform(transform(m, cov), cov.inverse()) == m
    P = RationalPoint(0, 0)
    assert cov.backward(cov.forward(P)) == P


def test_add_points_examples():
    F = frey_model(9834496, 1896129)
    P = RationalPoint(0, 0)
    assert add_points(F, P, INFINITY) == P
    assert add_points(F, P, P) == INFINITY
    gen = frey_to_universal(T.C2xC4, 32, 49).backward(RationalPoint(0, 0))
    two = add_points(F, gen, gen)
    assert point_order(F, two) == 2


def test_off_curve_rejected():
    with pytest.raises(ValueError):
        add_points(frey_model(1, 8), RationalPoint(1, 1), INFINITY)


def test_point_order_examples():
    A, B = 9834496, 1896129
    F = frey_model(A, B)
    assert point_order(F, RationalPoint(0, 0)) == 2
    assert point_order(F, RationalPoint(A, 0)) == 2
    assert point_order(F, RationalPoint(-B, 0)) == 2
    x, y = SEEDS[T.C2xC6]
    F6 = frey_curve_of(T.C2xC6, x, y)
    gen = frey_to_universal(T.C2xC6, x, y).backward(RationalPoint(0, 0))
    assert point_order(F6, gen) == 6


def test_point_order_infinite():
    m = WeierstrassModel(0, 0, 1, -1, 0)  # rank one, (0, 0) has infinite order
    assert point_order(m, RationalPoint(0, 0), 20) is None


def test_group_law_properties():
    m = WeierstrassModel(0, 0, 1, -1, 0)
    P = RationalPoint(0, 0)
    pts = [multiply(m, P, k) for k in range(-4, 5)]
    for X in pts:
        assert add_points(m, X, negate(m, X)) == INFINITY
        for Y in pts[:5]:
            assert add_points(m, X, Y) == add_points(m, Y, X)
            for Z in pts[:3]:
                assert add_points(m, add_points(m, X, Y), Z) == add_points(m, X, add_points(m, Y, Z))


def test_upper_bound_c2x4_two_primes():
    F = frey_curve_of(T.C2xC4, 32, 49)
    bound, counts = torsion_upper_bound(F, [11, 23])
    assert bound == 8 and counts == [(11, 16), (23, 24)]
    for p, n in counts:
        assert brute_count(F, p) == n


def test_upper_bound_c2x2_seed():
    # point counts alone cannot get below 8: the curve is 2-isogenous to one with C2 x C4
    F = frey_curve_of(T.C2xC2, 4, 121)
    bound, _ = torsion_upper_bound(F, good_primes(F, 12))
    assert bound == 8
    rep = certify_torsion(T.C2xC2, 4, 121)
    assert rep.count_bound == 8 and rep.upper_bound == 4 and rep.certified


def test_bad_prime_rejected():
    F = frey_model(1, 8)
    with pytest.raises(ValueError):
        torsion_upper_bound(F, [3])
    with pytest.raises(ValueError):
        count_points(F, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 200), st.integers(1, 200), st.sampled_from([p for p in primes_up_to(60) if p > 2]))
def test_count_points_oracle(x, y, p):
    from math import gcd

    if gcd(x, y) != 1:
        return
    m = frey_model(x, y)
    if m.discriminant % p == 0:
        return
    assert count_points(m, p) == brute_count(m, p)


def test_halving():
    F = frey_curve_of(T.C2xC4, 32, 49)
    A, B, _ = table(T.C2xC4).evaluate(32, 49)
    roots = (Fraction(0), Fraction(A), Fraction(-B))
    gen = frey_to_universal(T.C2xC4, 32, 49).backward(RationalPoint(0, 0))
    assert halvable(roots, add_points(F, gen, gen))
    assert not halvable(roots, gen)


@pytest.mark.parametrize("fam", list(T), ids=lambda f: f.slug)
def test_certify_seeds(fam):
    x, y = SEEDS[fam]
    rep = certify_torsion(fam, x, y)
    assert rep.certified, rep.notes
    assert rep.upper_bound == 4 * fam.N
    orders = sorted(n for _, n in rep.exhibited)
    assert orders[:3] == [2, 2, 2] and orders[-1] == 2 * fam.N
    assert rep.count_bound % (4 * fam.N) == 0
    assert len(rep.counts) >= 2
    js = rep.to_json()
    assert js["claimed"] == f"C2xC{2 * fam.N}"
