"""Torsion certification for the Frey curves of each family.

Upper bound: gcd of #E(F_p) over small odd primes of good reduction,
sharpened at 2 by an exact halving test (on a curve with full rational
2-torsion, a point is in 2E(Q) iff x - e_i is a square for every root e_i).
Lower bound: explicit points whose orders are checked with the group law.
The order-2N point comes from the universal curve X_t(T) by pulling its
point (0, 0) back through an admissible change of variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .factor import primes_up_to
from .frey import DegenerateCurve, WeierstrassModel, frey_model
from .maps import PreconditionError, TorsionFamily, check_map_preconditions, table

COUNT_LIMIT = 10**5


class UndefinedParameter(ValueError):
    """t hits a pole of the universal family or makes the curve singular."""


# --------------------------------------------------------------------------
# points and the group law


@dataclass(frozen=True)
class RationalPoint:
    x: Fraction | None = None
    y: Fraction | None = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_json(self):
        if self.is_infinity:
            return "infinity"
        return [str(self.x), str(self.y)]

    def __str__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = RationalPoint()


def _check_on(m: WeierstrassModel, P: RationalPoint):
    if not P.is_infinity and not m.contains(P.x, P.y):
        raise ValueError(f"point {P} is not on {m}")


def negate(m: WeierstrassModel, P: RationalPoint) -> RationalPoint:
    if P.is_infinity:
        return P
    return RationalPoint(P.x, -P.y - m.a1 * P.x - m.a3)


def add_points(m: WeierstrassModel, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
    _check_on(m, P)
    _check_on(m, Q)
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, a6 = m.coefficients
    if P.x == Q.x:
        if P.y + Q.y + a1 * Q.x + a3 == 0:
            return INFINITY
        den = 2 * P.y + a1 * P.x + a3
        lam = (3 * P.x**2 + 2 * a2 * P.x + a4 - a1 * P.y) / den
        nu = (-(P.x**3) + a4 * P.x + 2 * a6 - a3 * P.y) / den
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
        nu = (P.y * Q.x - Q.y * P.x) / (Q.x - P.x)
    x3 = lam * lam + a1 * lam - a2 - P.x - Q.x
    y3 = -(lam + a1) * x3 - nu - a3
    return RationalPoint(x3, y3)


def multiply(m: WeierstrassModel, P: RationalPoint, k: int) -> RationalPoint:
    if k < 0:
        return multiply(m, negate(m, P), -k)
    out, base = INFINITY, P
    while k:
        if k & 1:
            out = add_points(m, out, base)
        base = add_points(m, base, base)
        k >>= 1
    return out


def point_order(m: WeierstrassModel, P: RationalPoint, bound: int = 16) -> int | None:
    """Least n <= bound with nP = O, or None if there is none."""
    _check_on(m, P)
    Q = P
    for n in range(1, bound + 1):
        if Q.is_infinity:
            return n
        Q = add_points(m, Q, P)
    return None


# --------------------------------------------------------------------------
# changes of variables


@dataclass(frozen=True)
class ChangeOfVariables:
    """Old coordinates (x, y) = (u^2 x' + r, u^3 y' + s u^2 x' + w)."""

    u: Fraction
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    w: Fraction = Fraction(0)
    t: Fraction | None = None

    def __post_init__(self):
        for name in ("u", "r", "s", "w"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.u == 0:
            raise ValueError("u must be nonzero")

    def inverse(self) -> ChangeOfVariables:
        u, r, s, w = self.u, self.r, self.s, self.w
        return ChangeOfVariables(1 / u, -r / u**2, -s / u, (r * s - w) / u**3, self.t)

    def forward(self, P: RationalPoint) -> RationalPoint:
        """Image on the new model of a point of the old model."""
        if P.is_infinity:
            return P
        u, r, s, w = self.u, self.r, self.s, self.w
        x = (P.x - r) / u**2
        return RationalPoint(x, (P.y - s * u**2 * x - w) / u**3)

    def backward(self, P: RationalPoint) -> RationalPoint:
        """Old-model point corresponding to a point of the new model."""
        if P.is_infinity:
            return P
        u, r, s, w = self.u, self.r, self.s, self.w
        return RationalPoint(u**2 * P.x + r, u**3 * P.y + s * u**2 * P.x + w)


def transform(m: WeierstrassModel, cov: ChangeOfVariables) -> WeierstrassModel:
    a1, a2, a3, a4, a6 = (Fraction(c) for c in m.coefficients)
    u, r, s, w = cov.u, cov.r, cov.s, cov.w
    return WeierstrassModel(
        (a1 + 2 * s) / u,
        (a2 - s * a1 + 3 * r - s * s) / u**2,
        (a3 + r * a1 + 2 * w) / u**3,
        (a4 - s * a3 + 2 * r * a2 - (w + r * s) * a1 + 3 * r * r - 2 * s * w) / u**4,
        (a6 + r * a4 + r * r * a2 + r**3 - w * a3 - w * w - r * w * a1) / u**6,
    )


def tabulated_cov(fam: TorsionFamily, a, b) -> ChangeOfVariables:
    """(u, r, s, w, t) exactly as tabulated for (a, b).

    For N = 1, 2, 3 this maps the Frey curve of (A(a,b), B(a,b)) onto the
    universal curve; for N = 4 it maps the universal curve onto the Frey curve.
    """
    a, b = Fraction(a), Fraction(b)
    if fam is TorsionFamily.C2xC2:
        return ChangeOfVariables(a**2, t=b / a)
    if fam is TorsionFamily.C2xC4:
        d = (a - b) ** 2
        return ChangeOfVariables(2 * d, -2 * a * b * d, d, -2 * a * b * d * (a**2 + b**2), b / a)
    if fam is TorsionFamily.C2xC6:
        return ChangeOfVariables(
            9 * a**2 - b**2,
            -4 * a**2 * (a + b) * (b - 3 * a),
            5 * a**2 - b**2,
            36 * a**6 - 40 * a**4 * b**2 + 4 * a**2 * b**4,
            (9 * a + b) / (a + b),
        )
    q = b**2 - 2 * a * b - a**2
    return ChangeOfVariables(
        1 / (2 * a * (a + b) * q),
        a * b * (a**2 + b**2) / ((a + b) ** 2 * q),
        (a**4 + 4 * a**3 * b - b**4) / (2 * a * (a + b) * q),
        a * b**2 * (a**2 + b**2) ** 2 / ((a + b) ** 3 * q**2),
        a / (2 * (b - a)),
    )


def frey_to_universal(fam: TorsionFamily, a, b) -> ChangeOfVariables:
    """Change of variables from the Frey curve onto X_t(T)."""
    cov = tabulated_cov(fam, a, b)
    if fam is TorsionFamily.C2xC8:
        return cov.inverse()
    return cov


# --------------------------------------------------------------------------
# universal curves


def _kubert(f: Fraction, g: Fraction) -> WeierstrassModel:
    # y^2 + (1 - g) xy - f y = x^3 - f x^2
    return WeierstrassModel(1 - g, -f, -f, 0, 0)


def _guard(den, fam, t):
    if den == 0:
        raise UndefinedParameter(f"{fam}: t = {t} is a pole")


def universal_curve(fam: TorsionFamily, t) -> WeierstrassModel:
    """X_t(T).

    The C2 x C4 entry uses f = t(t^2 + 1) / (2(t - 1)^4), g = 0: this is the
    model the tabulated change of variables actually reaches, and it has a
    rational point of order 4 at (0, 0).  See ``universal_curve_tabulated``.
    """
    t = Fraction(t)
    try:
        if fam is TorsionFamily.C2xC2:
            return WeierstrassModel(
                0, t**4 - 12 * t**3 + 6 * t**2 - 12 * t + 1, 0, -8 * t * (t - 1) ** 4 * (t**2 + 1), 0
            )
        if fam is TorsionFamily.C2xC4:
            _guard(t - 1, fam, t)
            return _kubert(t * (t**2 + 1) / (2 * (t - 1) ** 4), Fraction(0))
        if fam is TorsionFamily.C2xC6:
            _guard((t + 3) * (t - 3), fam, t)
            f = (-2 * t**3 + 14 * t**2 - 22 * t + 10) / ((t + 3) ** 2 * (t - 3) ** 2)
            return _kubert(f, (-2 * t + 10) / ((t + 3) * (t - 3)))
        _guard(t * (4 * t + 1) * (8 * t**2 - 1), fam, t)
        num = 16 * t**3 + 16 * t**2 + 6 * t + 1
        return _kubert(num / (8 * t**2 - 1) ** 2, num / (2 * t * (4 * t + 1) * (8 * t**2 - 1)))
    except DegenerateCurve as exc:
        raise UndefinedParameter(f"{fam}: t = {t} gives a singular curve") from exc


def universal_curve_tabulated(fam: TorsionFamily, t) -> WeierstrassModel:
    """X_t(T) with the tabulated C2 x C4 row (f = (2t^4 - 7t^3 + ...) / (2(t-1)^4), g = 1).

    That model does not carry rational 2-torsion for general t; it is kept
    only to document the discrepancy.  Other families agree with
    ``universal_curve``.
    """
    t = Fraction(t)
    if fam is not TorsionFamily.C2xC4:
        return universal_curve(fam, t)
    _guard(t - 1, fam, t)
    try:
        return _kubert((2 * t**4 - 7 * t**3 + 12 * t**2 - 7 * t + 2) / (2 * (t - 1) ** 4), Fraction(1))
    except DegenerateCurve as exc:
        raise UndefinedParameter(f"{fam}: t = {t} gives a singular curve") from exc


def frey_curve_of(fam: TorsionFamily, a: int, b: int) -> WeierstrassModel:
    A, B, _ = table(fam).evaluate(a, b)
    return frey_model(A, B)


def verify_cov(fam: TorsionFamily, a: int, b: int, tabulated_model: bool = False) -> bool:
    """transform(F, cov) == X_t exactly, F the Frey curve of the image triple."""
    check_map_preconditions(fam, a, b)
    cov = frey_to_universal(fam, a, b)
    image = transform(frey_curve_of(fam, a, b), cov)
    target = (universal_curve_tabulated if tabulated_model else universal_curve)(fam, cov.t)
    return image == target


# --------------------------------------------------------------------------
# counting points mod p


def count_points(m: WeierstrassModel, p: int) -> int:
    """#E(F_p) for an integral model and an odd prime p of good reduction."""
    if p == 2 or not m.is_integral():
        raise ValueError("need an odd prime and an integral model")
    if m.discriminant % p == 0:
        raise ValueError(f"bad reduction at {p}")
    b2, b4, b6 = int(m.b2) % p, int(m.b4) % p, int(m.b6) % p
    squares = bytearray(p)
    for y in range(1, (p + 1) // 2):
        squares[y * y % p] = 1
    total = p + 1
    for x in range(p):
        v = (((4 * x + b2) * x + 2 * b4) * x + b6) % p
        if v:
            total += 1 if squares[v] else -1
    return total


def good_primes(m: WeierstrassModel, count: int, start: int = 3, limit: int = COUNT_LIMIT):
    disc = int(m.discriminant)
    out = []
    for p in primes_up_to(limit):
        if p < start or p == 2 or disc % p == 0:
            continue
        out.append(p)
        if len(out) == count:
            break
    return out


def torsion_upper_bound(m: WeierstrassModel, primes) -> tuple[int, list[tuple[int, int]]]:
    """gcd of #E(F_p) over the given odd primes of good reduction."""
    counts = []
    g = 0
    for p in primes:
        if p == 2 or int(m.discriminant) % p == 0:
            raise ValueError(f"{p} divides 2 * discriminant")
        n = count_points(m, p)
        counts.append((p, n))
        g = gcd(g, n)
    return g, counts


# --------------------------------------------------------------------------
# halving


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def halvable(roots: tuple, P: RationalPoint) -> bool:
    """Whether P is in 2E(Q) for y^2 = (x - e1)(x - e2)(x - e3), e_i rational."""
    if P.is_infinity:
        return True
    diffs = []
    for i, e in enumerate(roots):
        d = P.x - e
        if d == 0:
            d = Fraction(1)
            for j, other in enumerate(roots):
                if j != i:
                    d *= e - other
        diffs.append(d)
    return all(_is_rational_square(d) for d in diffs)


# --------------------------------------------------------------------------
# certification


@dataclass
class TorsionReport:
    family: TorsionFamily
    a: int
    b: int
    claimed: tuple[int, int]
    count_bound: int = 0
    counts: list = field(default_factory=list)
    upper_bound: int = 0
    halving: list = field(default_factory=list)
    exhibited: list = field(default_factory=list)
    certified: bool = False
    notes: list = field(default_factory=list)

    @property
    def claimed_order(self) -> int:
        return self.claimed[0] * self.claimed[1]

    def to_json(self) -> dict:
        return {
            "family": self.family.label,
            "claimed": f"C{self.claimed[0]}xC{self.claimed[1]}",
            "count_bound": self.count_bound,
            "point_counts": [{"p": p, "count": n} for p, n in self.counts],
            "upper_bound": self.upper_bound,
            "halving": [{"point": P.to_json(), "halvable": h} for P, h in self.halving],
            "exhibited": [{"point": P.to_json(), "order": n} for P, n in self.exhibited],
            "certified": self.certified,
            "notes": list(self.notes),
        }


def _odd(n: int) -> int:
    while n and n % 2 == 0:
        n //= 2
    return n


def _two_part(n: int) -> int:
    return n // _odd(n)


def certify_torsion(fam: TorsionFamily, a: int, b: int, min_primes: int = 3,
                    max_primes: int = 12) -> TorsionReport:
    """Certify that the Frey curve of (A(a,b), B(a,b)) has torsion C2 x C2N."""
    check_map_preconditions(fam, a, b)
    N = fam.N
    A, B, _ = table(fam).evaluate(a, b)
    if A <= 0 or B <= 0:
        raise PreconditionError(f"{fam}: image triple not positive at ({a}, {b})")
    F = frey_model(A, B)
    rep = TorsionReport(fam, a, b, (2, 2 * N))
    roots = (Fraction(0), Fraction(A), Fraction(-B))

    two_torsion = [RationalPoint(e, 0) for e in roots]
    for P in two_torsion:
        rep.exhibited.append((P, point_order(F, P, 2)))

    cov = frey_to_universal(fam, a, b)
    gen = cov.backward(RationalPoint(0, 0))
    if not F.contains(gen.x, gen.y):
        rep.notes.append("pulled-back generator is not on the Frey curve")
        return rep
    order = point_order(F, gen, 16)
    rep.exhibited.append((gen, order))
    if order != 2 * N:
        rep.notes.append(f"pulled-back generator has order {order}, expected {2 * N}")

    # upper bound from point counts; stop once it cannot shrink further
    g, counts = 0, []
    for p in good_primes(F, max_primes):
        n = count_points(F, p)
        counts.append((p, n))
        g = gcd(g, n)
        if len(counts) >= min_primes and g == 4 * N:
            break
    rep.count_bound, rep.counts = g, counts

    # subgroup H = <gen, P2> with P2 a 2-torsion point outside <gen>
    cyc = [multiply(F, gen, i) for i in range(order or 1)]
    P2 = next((P for P in two_torsion if P not in cyc), None)
    H = set(cyc)
    if P2 is not None:
        H |= {add_points(F, P, P2) for P in cyc}
    H2 = [P for P in H if point_order(F, P, 16) in (1, 2, 4, 8, 16)]
    doubled = {add_points(F, P, P) for P in H2}
    rep.halving = [(P, halvable(roots, P)) for P in H2 if P not in doubled]
    two_exact = not any(h for _, h in rep.halving)
    if two_exact:
        rep.upper_bound = len(H2) * _odd(g)
    else:
        rep.upper_bound = g
        rep.notes.append("a point of the exhibited 2-part is halvable over Q")
    if g % len(H) != 0:
        rep.notes.append(f"count bound {g} not divisible by exhibited order {len(H)}")
    rep.certified = (
        order == 2 * N
        and P2 is not None
        and len(H) == 4 * N
        and rep.upper_bound == 4 * N
        and g % (4 * N) == 0
    )
    return rep
