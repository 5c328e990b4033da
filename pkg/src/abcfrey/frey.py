"""Frey curves y^2 = x(x - a)(x + b): invariants, minimal model, Szpiro ratios."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .factor import DEFAULT_BUDGET, FactorBudget, FactoredInteger, RadicalUnavailable, factor_pieces, product, radical
from .maps import PreconditionError, TorsionFamily, table

PRECISION = 50


class DegenerateCurve(ValueError):
    pass


def _num(x):
    """Keep integers as int; other rationals as Fraction."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    a1: int | Fraction = 0
    a2: int | Fraction = 0
    a3: int | Fraction = 0
    a4: int | Fraction = 0
    a6: int | Fraction = 0

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, _num(getattr(self, name)))
        if self.discriminant == 0:
            raise DegenerateCurve(f"singular model {self.coefficients}")

    @property
    def coefficients(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.coefficients
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @property
    def c4(self):
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coefficients)

    def contains(self, x, y) -> bool:
        a1, a2, a3, a4, a6 = self.coefficients
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def __str__(self):
        def term(c, mono):
            if c == 0:
                return ""
            c = Fraction(c)
            sign = " - " if c < 0 else " + "
            mag = abs(c)
            coef = "" if (mag == 1 and mono) else str(mag)
            return f"{sign}{coef}{mono}"

        a1, a2, a3, a4, a6 = self.coefficients
        lhs = "y^2" + term(a1, "xy") + term(a3, "y")
        rhs = "x^3" + term(a2, "x^2") + term(a4, "x") + term(a6, "")
        return f"{lhs} = {rhs}"


def frey_model(a: int, b: int) -> WeierstrassModel:
    """The curve y^2 = x(x - a)(x + b)."""
    if a < 1 or b < 1:
        raise PreconditionError("frey_model needs a, b >= 1")
    if gcd(a, b) != 1:
        raise PreconditionError(f"gcd({a}, {b}) = {gcd(a, b)} != 1")
    return WeierstrassModel(0, b - a, 0, -a * b, 0)


def standard_invariants(m: WeierstrassModel) -> dict:
    return {k: getattr(m, k) for k in ("b2", "b4", "b6", "b8", "c4", "c6", "discriminant")}


@dataclass(frozen=True)
class CurveInvariants:
    a: int
    b: int
    c4_min: int
    c6_min: int
    delta_min: int
    conductor: FactoredInteger
    abc: FactoredInteger
    canonical: bool = True

    def __post_init__(self):
        if 1728 * self.delta_min != self.c4_min**3 - self.c6_min**2:
            raise ArithmeticError("1728 delta != c4^3 - c6^2")

    @property
    def complete(self) -> bool:
        return self.conductor.complete

    @property
    def conductor_value(self) -> int:
        return radical(self.conductor)

    @property
    def szpiro_numerator(self) -> int:
        """max(|c4^3|, c6^2)."""
        return max(abs(self.c4_min) ** 3, self.c6_min**2)

    def _ratio(self, value: int):
        if not self.complete:
            return None
        with mpmath.workdps(PRECISION):
            return mpmath.log(value) / mpmath.log(self.conductor_value)

    @property
    def sigma_m(self):
        """log max(|c4^3|, c6^2) / log N as an mpf, or None if N is unknown."""
        return self._ratio(self.szpiro_numerator)

    @property
    def sigma(self):
        return self._ratio(abs(self.delta_min))

    @property
    def conductor_equals_rad_abc(self) -> bool | None:
        if not (self.complete and self.abc.complete):
            return None
        return self.conductor_value == radical(self.abc)

    def to_json(self) -> dict:
        def fmt(x):
            return None if x is None else f"{float(x):.4f}"

        out = {
            "c4_min": str(self.c4_min),
            "c6_min": str(self.c6_min),
            "delta_min": str(self.delta_min),
            "conductor": str(self.conductor_value) if self.complete else None,
            "conductor_primes": [str(p) for p in self.conductor.primes],
            "conductor_complete": self.complete,
            "conductor_equals_rad_abc": self.conductor_equals_rad_abc,
            "canonical": self.canonical,
            "sigma_m": fmt(self.sigma_m),
            "sigma": fmt(self.sigma),
            "good": is_good_curve(self) if self.complete else None,
        }
        return out


def minimal_invariants(a, b, budget: FactorBudget = DEFAULT_BUDGET, cache=None,
                       strict: bool = True, c: FactoredInteger | None = None) -> CurveInvariants:
    """Invariants of a minimal model of y^2 = x(x - a)(x + b).

    ``a`` and ``b`` may be ints or FactoredIntegers; passing factorizations
    avoids refactoring (likewise ``c`` for a + b).  Under a = 0 mod 16, b = 1 mod 4 the scaling u = 2
    gives a minimal, semistable model and the conductor is rad(delta_min).
    Other inputs raise unless ``strict`` is false, in which case the naive
    model is used and flagged non-canonical.
    """
    fa = a if isinstance(a, FactoredInteger) else None
    fb = b if isinstance(b, FactoredInteger) else None
    a, b = int(a), int(b)
    m = frey_model(a, b)
    c4, c6, disc = m.c4, m.c6, m.discriminant
    canonical = a % 16 == 0 and b % 4 == 1
    if canonical:
        c4, c6, disc = c4 // 16, c6 // 64, disc // 4096
    elif strict:
        raise PreconditionError(
            f"non-canonical Frey input: need a = 0 mod 16 and b = 1 mod 4, got {a % 16}, {b % 4}"
        )
    if c is not None and c.value != a + b:
        raise ValueError("c must equal a + b")
    known = [f for f in (fa, fb, c) if f is not None]
    pieces = [x for x, f in ((a, fa), (b, fb), (a + b, c)) if f is None]
    facs = factor_pieces(pieces, known, budget, cache)
    abc = product([*known, *facs])
    # |delta_min| = (abc / 16)^2 or 16 (abc)^2; its primes are those of abc
    # except possibly 2.
    two_divides = abs(disc) % 2 == 0
    primes = [(p, 1) for p in abc.primes if p != 2 or two_divides]
    rest = 1
    for p, _ in primes:
        rest *= p
    conductor = FactoredInteger(rest * abc.cofactor, tuple(primes), abc.cofactor)
    return CurveInvariants(a, b, c4, c6, disc, conductor, abc, canonical)


def is_good_curve(inv: CurveInvariants) -> bool:
    """sigma_m > 6, decided without logarithms: max(|c4^3|, c6^2) > N^6."""
    if not inv.complete:
        raise RadicalUnavailable(inv.conductor.cofactor)
    return inv.szpiro_numerator > inv.conductor_value**6


def c4_cross_check(fam: TorsionFamily, a: int, b: int) -> bool:
    """16 * tabulated c4(a, b) equals c4 of y^2 = x(x - A)(x + B), A = A(a,b), B = B(a,b).

    This is a polynomial identity, so signs of A and B do not matter; for
    pipeline inputs (A, B > 0, A = 0 mod 16, B = 1 mod 4) the right-hand side
    is 16 times the c4 of the minimal model.
    """
    tb = table(fam)
    A, B, _ = tb.evaluate(a, b)
    c4 = (B - A) ** 2 * 16 + 48 * A * B  # b2^2 - 24 b4 with a2 = B - A, a4 = -AB
    return c4 == 16 * tb.c4.evaluate({"a": a, "b": b})


def c4_szpiro_positivity(fam: TorsionFamily, threshold=None):
    """Certificate that c4(1,t)^3 - D(1,t)^6 > 0 for t > threshold.

    The threshold defaults to the tabulated constant of the family.
    """
    from .roots import certify_positive_on

    tb = table(fam)
    h = tb.at_one(tb.c4) ** 3 - tb.at_one(tb.D) ** 6
    return certify_positive_on(h, tb.theta_tabulated if threshold is None else threshold)
