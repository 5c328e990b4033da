"""Exact polynomial arithmetic.

``MPoly`` is a sparse polynomial in Z[a, b, r, s]; ``UPoly`` is a dense
univariate polynomial with ``Fraction`` coefficients.  Both are immutable
values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

VARIABLES = ("a", "b", "r", "s")
_INDEX = {v: i for i, v in enumerate(VARIABLES)}
_ZERO_EXP = (0, 0, 0, 0)


def _grlex_key(exp):
    return (sum(exp), exp)


class MPoly:
    """Sparse multivariate polynomial with integer coefficients.

    Terms are stored as ``{(e_a, e_b, e_r, e_s): coeff}`` with no zero
    coefficients, so two polynomials are equal iff their term maps are.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, int] | None = None):
        clean = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != 4 or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent vector {exp!r}")
                c = int(c)
                if c:
                    clean[tuple(exp)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, c: int) -> MPoly:
        return cls({_ZERO_EXP: c})

    @classmethod
    def var(cls, name: str) -> MPoly:
        exp = [0, 0, 0, 0]
        exp[_INDEX[name]] = 1
        return cls({tuple(exp): 1})

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, MPoly):
            return other
        if isinstance(other, int):
            return cls.const(other)
        return NotImplemented

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for exp, c in other._terms.items():
            out[exp] = out.get(exp, 0) + c
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def variables(self) -> set[str]:
        used = set()
        for exp in self._terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(VARIABLES[i])
        return used

    def content(self) -> int:
        """Gcd of all coefficients (0 for the zero polynomial)."""
        from math import gcd

        g = 0
        for c in self._terms.values():
            g = gcd(g, c)
        return g

    def evaluate(self, point: Mapping[str, int | Fraction]):
        """Exact value at ``point``; unassigned variables count as 0."""
        vals = [point.get(v, 0) for v in VARIABLES]
        total = 0
        for exp, c in self._terms.items():
            term = c
            for v, e in zip(vals, exp):
                if e:
                    term *= v**e
            total += term
        return total

    def __call__(self, a=0, b=0, r=0, s=0):
        return self.evaluate({"a": a, "b": b, "r": r, "s": s})

    def specialize(self, fixed: Mapping[str, int | Fraction], free: str) -> UPoly:
        """Substitute rationals for ``fixed`` and return a polynomial in ``free``."""
        if free not in _INDEX:
            raise ValueError(f"unknown variable {free!r}")
        if free in fixed:
            raise ValueError("free variable is also fixed")
        stray = self.variables() - set(fixed) - {free}
        if stray:
            raise ValueError(f"unassigned variables: {sorted(stray)}")
        fi = _INDEX[free]
        coeffs: dict[int, Fraction] = {}
        for exp, c in self._terms.items():
            term = Fraction(c)
            for i, e in enumerate(exp):
                if e and i != fi:
                    term *= Fraction(fixed[VARIABLES[i]]) ** e
            coeffs[exp[fi]] = coeffs.get(exp[fi], Fraction(0)) + term
        if not coeffs:
            return UPoly([])
        dense = [Fraction(0)] * (max(coeffs) + 1)
        for d, c in coeffs.items():
            dense[d] = c
        return UPoly(dense)

    def homogeneous_degree(self, vars: Iterable[str] = ("a", "b")):
        """Common total degree in ``vars``, or ``None`` if not homogeneous.

        The zero polynomial has no degree and reports ``None``.
        """
        idx = [_INDEX[v] for v in vars]
        if self.variables() - set(vars):
            return None
        degrees = {sum(exp[i] for i in idx) for exp in self._terms}
        if len(degrees) != 1:
            return None
        return degrees.pop()

    def __repr__(self):
        if not self._terms:
            return "MPoly(0)"
        return f"MPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(VARIABLES, exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class UPoly:
    """Dense univariate polynomial over Q, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def t(cls) -> UPoly:
        return cls([0, 1])

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, UPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return cls([other])
        return NotImplemented

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        x = self.coeffs + (0,) * (n - len(self.coeffs))
        y = other.coeffs + (0,) * (n - len(other.coeffs))
        return UPoly(p + q for p, q in zip(x, y))

    __radd__ = __add__

    def __neg__(self):
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return UPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, p in enumerate(self.coeffs):
            if p:
                for j, q in enumerate(other.coeffs):
                    out[i + j] += p * q
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = UPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: UPoly):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lc
            if c:
                quot[k - dq] = c
                for i, oc in enumerate(other.coeffs):
                    rem[k - dq + i] -= c * oc
        return UPoly(quot), UPoly(rem[:dq] if dq > 0 else [])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, Fraction) or not self.coeffs else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> UPoly:
        return UPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> UPoly:
        if self.is_zero():
            return self
        return UPoly(c / self.lc for c in self.coeffs)

    def primitive(self) -> list[int]:
        """Integer coefficients of the positive rescaling with content 1."""
        from math import gcd, lcm

        if not self.coeffs:
            return []
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        return [c // g for c in ints]

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts).replace("+ -", "- ")


def gcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd over Q (zero if both inputs are zero)."""
    while not q.is_zero():
        p, q = q, p % q
    return p.monic()
