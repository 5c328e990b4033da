from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcfrey.factor import factor, radical
from abcfrey.frey import (
    CurveInvariants,
    DegenerateCurve,
    WeierstrassModel,
    c4_cross_check,
    c4_szpiro_positivity,
    frey_model,
    is_good_curve,
    minimal_invariants,
    standard_invariants,
)
from abcfrey.maps import PreconditionError, TorsionFamily, table

from .conftest import FAMILIES, valid_pairs

T = TorsionFamily
rationals = st.fractions(-100, 100, max_denominator=12)


def test_frey_model_examples():
    m = frey_model(1, 8)
    assert m.coefficients == (0, 7, 0, -8, 0)
    assert str(m) == "y^2 = x^3 + 7x^2 - 8x"
    with pytest.raises(PreconditionError):
        frey_model(2, 2)
    m = frey_model(9834496, 1896129)
    assert m.a2 == 1896129 - 9834496


def test_singular_model_rejected():
    with pytest.raises(DegenerateCurve):
        WeierstrassModel(0, 0, 0, 0, 0)


@given(st.integers(1, 10**9), st.integers(1, 10**9))
def test_frey_invariants(x, y):
    if gcd(x, y) != 1:
        return
    m = frey_model(x, y)
    assert m.c4 == 16 * (x * x + x * y + y * y) > 0
    assert m.discriminant == 16 * (x * y * (x + y)) ** 2 > 0


@given(rationals, rationals, rationals, rationals, rationals)
def test_defining_identities(a1, a2, a3, a4, a6):
    try:
        m = WeierstrassModel(a1, a2, a3, a4, a6)
    except DegenerateCurve:
        return
    inv = standard_invariants(m)
    assert 1728 * inv["discriminant"] == inv["c4"] ** 3 - inv["c6"] ** 2
    assert 4 * inv["b8"] == inv["b2"] * inv["b6"] - inv["b4"] ** 2


def test_sigma_examples():
    inv = minimal_invariants(9834496, 1896129)
    assert abs(float(inv.sigma_m) - 7.4219) < 1e-3
    inv = minimal_invariants(56751904, 187388721)
    assert abs(float(inv.sigma_m) - 6.4204) < 1e-3
    assert is_good_curve(inv)


def test_c4_min_matches_table_value():
    tb = table(T.C2xC4)
    A, B, _ = tb.evaluate(32, 49)
    inv = minimal_invariants(A, B)
    assert inv.c4_min == 32**8 + 14 * 32**4 * 49**4 + 49**8
    assert inv.szpiro_numerator == inv.c4_min**3


def test_good_curve_is_exact():
    inv = minimal_invariants(16, 9)
    N = inv.conductor_value
    assert is_good_curve(inv) == (inv.c4_min**3 > N**6)


def test_good_curve_boundary_is_strict():
    inv = CurveInvariants(0, 0, 36, 0, 27, factor(6), factor(6))
    assert inv.szpiro_numerator == inv.conductor_value**6
    assert not is_good_curve(inv)


def test_conductor_drops_two_when_v2_is_four():
    inv = minimal_invariants(16, 9)
    assert inv.delta_min == (16 * 9 * 25 // 16) ** 2
    assert inv.conductor_value == 15 and radical(inv.abc) == 30
    assert inv.conductor_equals_rad_abc is False


def test_non_canonical_input():
    with pytest.raises(PreconditionError):
        minimal_invariants(1, 8)
    inv = minimal_invariants(1, 8, strict=False)
    assert not inv.canonical and inv.c4_min == frey_model(1, 8).c4


@settings(max_examples=200)
@given(st.integers(1, 10**6), st.integers(0, 10**6))
def test_minimal_model_integrality(k, m):
    x, y = 16 * k, 4 * m + 1
    if gcd(x, y) != 1:
        return
    fm = frey_model(x, y)
    assert fm.c4 % 16 == 0 and fm.c6 % 64 == 0 and fm.discriminant % 4096 == 0


@settings(max_examples=100)
@given(st.integers(1, 10**5), st.integers(0, 10**5))
def test_conductor_divides_rad_abc(k, m):
    x, y = 16 * k, 4 * m + 1
    if gcd(x, y) != 1:
        return
    inv = minimal_invariants(x, y)
    rad = radical(inv.abc)
    assert rad % inv.conductor_value == 0 and rad // inv.conductor_value in (1, 2)
    assert (is_good_curve(inv)) == (inv.sigma_m > 6)


def test_c4_cross_check_examples():
    assert c4_cross_check(T.C2xC4, 32, 49)
    assert c4_cross_check(T.C2xC6, 432, 299693)
    assert c4_cross_check(T.C2xC2, 4, 121)
    assert table(T.C2xC2).c4(a=4, b=121) == 4**8 + 60 * 4**6 * 121**2 + 134 * 4**4 * 121**4 + 60 * 4**2 * 121**6 + 121**8


@settings(max_examples=200)
@given(st.data())
def test_c4_cross_check_random(data):
    fam = data.draw(st.sampled_from(FAMILIES))
    x, y = data.draw(valid_pairs(fam, 10**5))
    A, B, _ = table(fam).evaluate(x, y)
    if B <= 0:
        return
    assert c4_cross_check(fam, x, y)


def test_c4_szpiro_positivity(family):
    assert c4_szpiro_positivity(family).positive


def test_pipeline_curve_json():
    inv = minimal_invariants(9834496, 1896129)
    js = inv.to_json()
    assert js["sigma_m"] == "7.4219" and js["good"] is True and js["conductor_complete"]
    assert Fraction(js["delta_min"]) == inv.delta_min


def test_tabulated_c4_is_minimal_c4_at_seeds(family, seed):
    A, B, _ = table(family).evaluate(*seed)
    inv = minimal_invariants(A, B)
    assert inv.c4_min == table(family).c4.evaluate({"a": seed[0], "b": seed[1]})
