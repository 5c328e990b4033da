"""Real root isolation with Sturm sequences.

Everything here is exact: polynomials are converted to primitive integer
coefficient lists and Sturm chains are built from signed pseudo-remainders,
so endpoints and counts never depend on floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .polynomial import UPoly


def _primitive(coeffs: list[int]) -> list[int]:
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    if g == 0:
        return []
    return [c // g for c in coeffs]


def _strip(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _derivative(coeffs: list[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _prem(f: list[int], g: list[int]) -> tuple[list[int], int]:
    """Pseudo-remainder of f by g, and the power of lc(g) it was scaled by."""
    r = list(f)
    n = len(g) - 1
    lc = g[-1]
    k = 0
    while len(r) - 1 >= n and r:
        d = len(r) - 1
        top = r[-1]
        r = [lc * c for c in r]
        for i, gc in enumerate(g):
            r[d - n + i] -= top * gc
        _strip(r)
        k += 1
    return r, k


def _int_gcd(f: list[int], g: list[int]) -> list[int]:
    f, g = _primitive(f), _primitive(g)
    while g:
        r, _ = _prem(f, g)
        f, g = g, _primitive(r)
    if f and f[-1] < 0:
        f = [-c for c in f]
    return f


def _exact_div(f: list[int], g: list[int]) -> list[int]:
    # g divides f over Q; result rescaled to a primitive integer polynomial.
    fq = UPoly(f)
    q, rem = divmod(fq, UPoly(g))
    assert rem.is_zero()
    return q.primitive()


def square_free_part(p: UPoly) -> list[int]:
    """Primitive integer coefficients of p / gcd(p, p')."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    f = p.primitive()
    if len(f) <= 2:
        return f
    g = _int_gcd(f, _derivative(f))
    if len(g) <= 1:
        return f
    return _exact_div(f, g)


def sturm_chain(p: UPoly) -> list[list[int]]:
    """Sturm sequence of the square-free part of p (primitive integer rows).

    Each row equals the classical Sturm polynomial up to a positive factor,
    which leaves every sign pattern unchanged.
    """
    f0 = square_free_part(p)
    chain = [f0]
    f1 = _primitive(_derivative(f0))
    if not f1:
        return chain
    chain.append(f1)
    while len(chain[-1]) > 1:
        f, g = chain[-2], chain[-1]
        r, k = _prem(f, g)
        if not r:
            break
        # prem = lc(g)^k * rem, so sign(rem) = sign(prem) * sign(lc(g))^k
        sign = -1 if (g[-1] < 0 and k % 2) else 1
        chain.append(_primitive([-sign * c for c in r]))
    return chain


def _sign_at(coeffs: list[int], x) -> int:
    if x == math.inf:
        return (coeffs[-1] > 0) - (coeffs[-1] < 0)
    if x == -math.inf:
        s = (coeffs[-1] > 0) - (coeffs[-1] < 0)
        return s if (len(coeffs) - 1) % 2 == 0 else -s
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    n = len(coeffs) - 1
    acc = 0
    for i, c in enumerate(coeffs):
        acc += c * num**i * den ** (n - i)
    return (acc > 0) - (acc < 0)


def _variations(chain, x) -> int:
    signs = [s for s in (_sign_at(f, x) for f in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _coerce_endpoint(x, default):
    if x is None:
        return default
    if isinstance(x, float) and math.isinf(x):
        return x
    return Fraction(x)


def sturm_count(p: UPoly, lo=None, hi=None, chain=None) -> int:
    """Number of distinct real roots of p in (lo, hi]; ``None`` means infinite."""
    if p.is_zero():
        raise ValueError("zero polynomial has no Sturm sequence")
    lo = _coerce_endpoint(lo, -math.inf)
    hi = _coerce_endpoint(hi, math.inf)
    if lo >= hi:
        return 0
    chain = chain or sturm_chain(p)
    return _variations(chain, lo) - _variations(chain, hi)


def root_bound(p: UPoly) -> Fraction:
    """Cauchy bound: every real root lies strictly inside (-M, M)."""
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class IsolatingInterval:
    """Interval (lo, hi] holding exactly one root when ``contains_root``.

    ``exact`` is set when the root was hit exactly by a bisection point.
    """

    lo: Fraction
    hi: Fraction
    contains_root: bool = True
    exact: Fraction | None = None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        return float(self.midpoint)

    def decimal(self, digits: int = 6) -> str:
        """Midpoint to ``digits`` decimals; display only."""
        x = self.exact if self.exact is not None else self.midpoint
        scaled = round(x * 10**digits)
        sign = "-" if scaled < 0 else ""
        scaled = abs(scaled)
        return f"{sign}{scaled // 10**digits}.{scaled % 10**digits:0{digits}d}"

    def __contains__(self, x):
        return self.lo < x <= self.hi


def greatest_real_root(p: UPoly, eps=Fraction(1, 10**6)) -> IsolatingInterval:
    """Isolate the largest real root of p in an interval of width < eps."""
    chain = sturm_chain(p)
    eps = Fraction(eps)
    m = root_bound(p)
    lo, hi = -m, m
    if sturm_count(p, lo, hi, chain) == 0:
        raise ValueError("polynomial has no real roots")
    f0 = chain[0]
    # invariant: no roots in (hi, inf), at least one root in (lo, hi]
    while True:
        if _sign_at(f0, hi) == 0:
            return IsolatingInterval(hi - eps / 2, hi, True, exact=hi)
        if hi - lo < eps and sturm_count(p, lo, hi, chain) == 1:
            return IsolatingInterval(lo, hi)
        mid = (lo + hi) / 2
        if sturm_count(p, mid, hi, chain) >= 1:
            lo = mid
        else:
            hi = mid


def isolate_real_roots(p: UPoly, lo=None, hi=None, eps=Fraction(1, 2**10)):
    """Disjoint isolating intervals for every distinct root of p in (lo, hi]."""
    chain = sturm_chain(p)
    m = root_bound(p)
    lo = Fraction(-m) if lo is None else Fraction(lo)
    hi = Fraction(m) if hi is None else Fraction(hi)
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = sturm_count(p, a, b, chain)
        if n == 0:
            continue
        if n == 1 and b - a < eps:
            exact = b if _sign_at(chain[0], b) == 0 else None
            out.append(IsolatingInterval(a, b, True, exact))
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(out, key=lambda iv: iv.lo)


@dataclass(frozen=True)
class PositivityCertificate:
    """Outcome of a positivity check of p on (lo, hi).

    When ``positive`` is true the Sturm count on the interval is zero and
    ``sample`` is a point where p was evaluated positive.  Otherwise
    ``witness`` (if found) is a rational point in the interval with p <= 0,
    and ``roots`` lists isolating intervals for the offending roots.
    """

    positive: bool
    lo: Fraction
    hi: Fraction | None
    root_count: int
    sample: Fraction | None = None
    witness: Fraction | None = None
    roots: tuple = ()

    def __bool__(self):
        return self.positive


def _witness(p: UPoly, lo: Fraction, hi: Fraction | None, roots) -> Fraction | None:
    top = hi if hi is not None else root_bound(p) + abs(lo) + 1
    # small integers first, they make the readable witnesses
    start = math.floor(lo) + 1
    for k in range(start, min(math.ceil(top), start + 64)):
        x = Fraction(k)
        if lo < x and (hi is None or x < hi) and p(x) <= 0:
            return x
    candidates = []
    for iv in roots:
        if iv.exact is not None:
            candidates.append(iv.exact)
        candidates.extend([iv.lo, iv.hi, iv.midpoint])
    edges = [lo] + [iv.midpoint for iv in roots] + ([hi] if hi is not None else [top])
    candidates.extend((u + v) / 2 for u, v in zip(edges, edges[1:]))
    for x in candidates:
        if lo < x and (hi is None or x < hi) and p(x) <= 0:
            return x
    return None


def certify_positive_on(p: UPoly, lo, hi=None) -> PositivityCertificate:
    """Decide whether p > 0 everywhere on the open interval (lo, hi).

    ``hi=None`` means the unbounded interval (lo, inf), which additionally
    needs a positive leading coefficient.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    lo = Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    chain = sturm_chain(p)
    if hi is None:
        count = sturm_count(p, lo, None, chain)
        sample = lo + 1
    else:
        if hi <= lo:
            raise ValueError("empty interval")
        count = sturm_count(p, lo, hi, chain) - (1 if p(hi) == 0 else 0)
        sample = (lo + hi) / 2
    ok = count == 0 and p(sample) > 0 and (hi is not None or p.lc > 0)
    if ok:
        return PositivityCertificate(True, lo, hi, 0, sample=sample)
    roots = ()
    if count:
        roots = tuple(
            iv
            for iv in isolate_real_roots(p, lo, hi if hi is not None else root_bound(p))
            if not (hi is not None and iv.exact == hi)
        )
    return PositivityCertificate(
        False, lo, hi, count, sample=sample, witness=_witness(p, lo, hi, roots), roots=roots
    )
