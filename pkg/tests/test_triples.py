from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcfrey.factor import FactorBudget, FactoredInteger, RadicalUnavailable, factor
from abcfrey.maps import TorsionFamily as T
from abcfrey.triples import (
    ABCTriple,
    SeedError,
    is_good,
    iterate,
    make_triple,
    quality,
    validate_seed,
)


def test_make_triple_examples():
    assert make_triple(32, 49).values == (32, 49, 81)
    assert make_triple(1, 8).values == (1, 8, 9)
    with pytest.raises(ValueError):
        make_triple(2, 4)
    with pytest.raises(ValueError):
        make_triple(0, 3)


def test_triple_invariants():
    with pytest.raises(ValueError):
        ABCTriple(factor(1), factor(2), factor(4))
    with pytest.raises(ValueError):
        ABCTriple(factor(2), factor(4), factor(6))


def test_quality_examples():
    assert abs(quality(make_triple(32, 49)) - 1.1757) < 5e-5
    assert abs(quality(make_triple(4, 121)) - 1.0272) < 5e-5
    q = quality(make_triple(1, 8))
    with mpmath.workdps(60):
        assert abs(q - mpmath.log(9) / mpmath.log(6)) < mpmath.mpf(10) ** -40
    assert abs(q - 1.2263) < 5e-5


def test_quality_unavailable():
    big = (2**61 - 1) * (2**89 - 1)
    P = ABCTriple(factor(1), FactoredInteger(big, (), big), factor(big + 1))
    assert quality(P) is None
    with pytest.raises(RadicalUnavailable):
        is_good(P)


def test_is_good_examples():
    assert is_good(make_triple(1, 8))
    assert not is_good(make_triple(1, 2))
    for k in range(1, 6):
        assert is_good(make_triple(1, 9**k - 1))


def test_validate_seed_examples():
    assert validate_seed(T.C2xC4, make_triple(32, 49)).ok
    rep = validate_seed(T.C2xC6, make_triple(432, 299693))
    assert rep.ok and rep.checks["a = 0 mod 3"]
    rep = validate_seed(T.C2xC8, make_triple(2, 7))
    assert rep.checks["b/a > theta"] and not rep.checks["b = 1 mod 4"]
    assert not rep.ok


def test_c2x6_requires_three_divides_a():
    # 3 | b instead of 3 | a is rejected
    rep = validate_seed(T.C2xC6, make_triple(128, 2187))
    assert not rep.checks["a = 0 mod 3"]


def test_iterate_examples():
    qs = [float(r.quality) for r in iterate(T.C2xC4, make_triple(32, 49), 2)]
    assert qs == pytest.approx([1.2425, 1.0531], abs=1e-3)
    qs = [float(r.quality) for r in iterate(T.C2xC8, make_triple(4, 121), 2)]
    assert qs == pytest.approx([1.0331, 1.0040], abs=1e-3)


def test_iterate_reports():
    reps = iterate(T.C2xC2, make_triple(4, 121), 2)
    assert [r.j for r in reps] == [1, 2]
    for r in reps:
        assert r.is_good and r.rad_lt_absD and all(r.congruences.values())
        assert r.is_good == (r.quality > 1)
        assert r.rad_lt_absD == (r.rad_value < abs(r.D_value))
        a, b, c = r.triple.values
        assert r.ratio == Fraction(b, a)
    # the ratio drops below the threshold at step 2; recorded, not fatal
    assert reps[0].ratio_exceeds_theta and not reps[1].ratio_exceeds_theta
    js = reps[0].to_json()
    assert js["quality"] == "1.0755" and js["triple"]["a"]["value"] == "56751904"


def test_iterate_negative_d_uses_absolute_value():
    # C2xC4 step 1 has b < a, so D(a1, b1) = b1^4 - a1^4 < 0
    reps = iterate(T.C2xC4, make_triple(32, 49), 2)
    assert reps[1].D_value < 0 and reps[1].rad_lt_absD


def test_iterate_seed_failure_and_override():
    with pytest.raises(SeedError):
        iterate(T.C2xC2, make_triple(2, 3), 1)
    reps = iterate(T.C2xC2, make_triple(2, 3), 1, force=True)
    assert reps[0].seed_overridden


def test_iterate_zero_steps():
    assert iterate(T.C2xC4, make_triple(32, 49), 0) == []
    with pytest.raises(ValueError):
        iterate(T.C2xC4, make_triple(32, 49), -1)


def test_iterate_budget_exhaustion_marks_unavailable():
    tiny = FactorBudget(trial_bound=50, rho_iterations=0)
    reps = iterate(T.C2xC8, make_triple(4, 121), 2, tiny)
    assert reps[-1].quality is None and reps[-1].is_good is None and reps[-1].rad_lt_absD is None


@settings(max_examples=300)
@given(st.integers(1, 10**5), st.integers(1, 10**5))
def test_good_iff_quality_above_one(x, y):
    from math import gcd

    if gcd(x, y) != 1:
        return
    P = make_triple(x, y)
    q = quality(P)
    assert is_good(P) == (q > 1)
