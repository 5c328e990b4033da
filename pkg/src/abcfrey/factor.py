"""Primality, staged factorization, radicals and factored-integer algebra.

Pipeline per composite: trial division up to ``trial_bound``, perfect power
detection, Brent's variant of Pollard rho, then (optionally) Lenstra ECM on
Montgomery curves with a baby-step/giant-step second stage.  A factorization
that runs out of budget is returned with a composite ``cofactor`` instead of
raising.
"""

from __future__ import annotations

import json
import math
import os
import random
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpz

DETERMINISTIC_LIMIT = 2**64
# Bases proven sufficient for every n < 3.3e24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class RadicalUnavailable(ArithmeticError):
    """Raised when a radical is requested from an incomplete factorization."""

    def __init__(self, cofactor: int):
        super().__init__(f"radical unavailable: unfactored cofactor {cofactor}")
        self.cofactor = cofactor


# --------------------------------------------------------------------------
# primality


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return tuple(i for i, v in enumerate(sieve) if v)


def _miller_rabin(n: int, base: int) -> bool:
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality test.

    Deterministic below 2**64 (Miller-Rabin with the first twelve prime
    bases).  Above that a Baillie-PSW test is used, so ``True`` means
    "probable prime"; see :func:`is_probable_only`.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < DETERMINISTIC_LIMIT:
        return all(_miller_rabin(n, b) for b in _MR_BASES)
    if not _miller_rabin(n, 2):
        return False
    if gmpy2.is_square(n):
        return False
    return bool(gmpy2.is_strong_selfridge_prp(mpz(n)))


def is_probable_only(p: int) -> bool:
    """True when a prime verdict for p is probabilistic rather than proven."""
    return p >= DETERMINISTIC_LIMIT


# --------------------------------------------------------------------------
# budget


@dataclass(frozen=True)
class FactorBudget:
    """Limits for one :func:`factor` call.

    ``rho_iterations`` and ``ecm_curves`` apply to each composite that
    reaches the corresponding stage; ``wall_clock_limit`` (seconds, ``None``
    for no limit) bounds the whole call.  ``ecm_curves=0`` disables ECM.
    """

    trial_bound: int = 10**6
    rho_iterations: int = 2 * 10**6
    ecm_curves: int = 0
    wall_clock_limit: float | None = None
    seed: int = 0

    def __post_init__(self):
        for name in ("trial_bound", "rho_iterations", "ecm_curves"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.wall_clock_limit is not None and self.wall_clock_limit < 0:
            raise ValueError("wall_clock_limit must be non-negative")

    @classmethod
    def deep(cls, **kw) -> FactorBudget:
        kw.setdefault("rho_iterations", 4 * 10**6)
        kw.setdefault("ecm_curves", 800)
        return cls(**kw)


DEFAULT_BUDGET = FactorBudget()


class _Deadline:
    def __init__(self, seconds):
        self.end = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self.end is not None and time.monotonic() > self.end


# --------------------------------------------------------------------------
# factored integers


@dataclass(frozen=True)
class FactoredInteger:
    """Positive integer with a (possibly partial) prime factorization.

    ``value == cofactor * prod(p**e)``; ``cofactor`` is 1 exactly when the
    factorization is complete, otherwise a composite nobody managed to split.
    """

    value: int
    factors: tuple[tuple[int, int], ...] = ()
    cofactor: int = 1

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("FactoredInteger needs a positive value")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        prod = self.cofactor
        for p, e in self.factors:
            if e < 1:
                raise ValueError("exponents must be positive")
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factorization does not reassemble to {self.value}")

    @classmethod
    def from_dict(cls, d: dict[int, int], cofactor: int = 1) -> FactoredInteger:
        value = cofactor
        for p, e in d.items():
            value *= p**e
        return cls(value, tuple(sorted((int(p), int(e)) for p, e in d.items() if e)), cofactor)

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def probable_primes(self) -> tuple[int, ...]:
        return tuple(p for p in self.primes if is_probable_only(p))

    def radical(self) -> int:
        return radical(self)

    def __pow__(self, k: int) -> FactoredInteger:
        if k < 0:
            raise ValueError("negative power")
        if k == 0:
            return ONE
        return FactoredInteger(
            self.value**k, tuple((p, e * k) for p, e in self.factors), self.cofactor**k
        )

    def __mul__(self, other: FactoredInteger) -> FactoredInteger:
        return product([self, other])

    def __int__(self):
        return self.value

    def __str__(self):
        parts = [str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors]
        if self.cofactor != 1:
            parts.append(f"[{self.cofactor}]")
        return "*".join(parts) or "1"

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "factors": [[str(p), e] for p, e in self.factors],
            "cofactor": str(self.cofactor),
            "complete": self.complete,
        }

    @classmethod
    def from_json(cls, d: dict) -> FactoredInteger:
        return cls(int(d["value"]), tuple((int(p), int(e)) for p, e in d["factors"]), int(d["cofactor"]))


ONE = FactoredInteger(1)


def radical(f: FactoredInteger) -> int:
    """Product of the distinct primes of a complete factorization."""
    if not f.complete:
        raise RadicalUnavailable(f.cofactor)
    return math.prod(f.primes)


def product(fs) -> FactoredInteger:
    """Multiply factorizations, merging exponents.

    Listed primes that divide a leftover cofactor are pulled out of it, so
    the result never hides a known prime inside the cofactor.
    """
    exps: dict[int, int] = {}
    cof = 1
    for f in fs:
        for p, e in f.factors:
            exps[p] = exps.get(p, 0) + e
        cof *= f.cofactor
    if cof > 1:
        for p in list(exps):
            while cof % p == 0:
                cof //= p
                exps[p] += 1
    return FactoredInteger.from_dict(exps, cof)


# --------------------------------------------------------------------------
# factoring stages


def _trial(n: int, bound: int, exps: dict[int, int]) -> int:
    if n == 1:
        return 1
    primes = primes_up_to(bound)
    limit = math.isqrt(n)
    covered = False
    for p in primes:
        if p > limit:
            covered = True
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            exps[p] = exps.get(p, 0) + e
            limit = math.isqrt(n)
    if n > 1 and (covered or (primes and n < primes[-1] ** 2)):
        # no prime factor up to sqrt(n): n is prime
        exps[n] = exps.get(n, 0) + 1
        return 1
    return n


def perfect_power(n: int) -> tuple[int, int]:
    """Return (root, k) with root**k == n and k maximal (k=1 if none)."""
    best = (n, 1)
    if n < 4:
        return best
    for k in range(2, n.bit_length() + 1):
        root, exact = gmpy2.iroot(mpz(n), k)
        if exact:
            best = (int(root), k)
        if root < 2:
            break
    return best


def pollard_brent(n: int, iterations: int, rng: random.Random, deadline: _Deadline | None = None):
    """One nontrivial factor of composite n, or None within the iteration cap."""
    if n % 2 == 0:
        return 2
    N = mpz(n)
    spent = 0
    while spent < iterations:
        y = mpz(rng.randrange(1, n))
        c = mpz(rng.randrange(1, n))
        m = 128
        g = r = q = mpz(1)
        x = ys = y
        while g == 1 and spent < iterations:
            x = y
            for _ in range(r):
                y = (y * y + c) % N
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % N
                    q = q * abs(x - y) % N
                g = gmpy2.gcd(q, N)
                k += m
            spent += r
            r *= 2
            if deadline is not None and deadline.expired():
                return None
        if g == N:
            # backtrack one step at a time from the saved point
            g = mpz(1)
            while g == 1:
                ys = (ys * ys + c) % N
                g = gmpy2.gcd(abs(x - ys), N)
        if 1 < g < N:
            return int(g)
    return None


def _ecm_schedule(i: int) -> int:
    if i < 25:
        return 2000
    if i < 115:
        return 11000
    if i < 415:
        return 50000
    return 250000


@lru_cache(maxsize=8)
def _stage1_multiplier(b1: int) -> int:
    k = 1
    for p in primes_up_to(b1):
        pk = p
        while pk * p <= b1:
            pk *= p
        k *= pk
    return k


@lru_cache(maxsize=4)
def _prime_flags(limit: int) -> bytearray:
    flags = bytearray(limit + 1)
    for p in primes_up_to(limit):
        flags[p] = 1
    return flags


class _FoundFactor(Exception):
    def __init__(self, g):
        self.g = int(g)


def _xdbl(X, Z, a24, N):
    s = (X + Z) ** 2 % N
    d = (X - Z) ** 2 % N
    t = s - d
    return s * d % N, t * (d + a24 * t) % N


def _xadd(X1, Z1, X2, Z2, Xd, Zd, N):
    u = (X1 - Z1) * (X2 + Z2)
    v = (X1 + Z1) * (X2 - Z2)
    return Zd * ((u + v) ** 2 % N) % N, Xd * ((u - v) ** 2 % N) % N


def _ladder(k: int, X, Z, a24, N):
    X1, Z1 = X, Z
    X2, Z2 = _xdbl(X, Z, a24, N)
    for bit in bin(k)[3:]:
        if bit == "1":
            X1, Z1 = _xadd(X2, Z2, X1, Z1, X, Z, N)
            X2, Z2 = _xdbl(X2, Z2, a24, N)
        else:
            X2, Z2 = _xadd(X1, Z1, X2, Z2, X, Z, N)
            X1, Z1 = _xdbl(X1, Z1, a24, N)
    return X1, Z1


def _inverse(x, N):
    g = gmpy2.gcd(x, N)
    if g != 1:
        raise _FoundFactor(g)
    return gmpy2.invert(x, N)


def ecm_one_curve(n: int, b1: int, rng: random.Random, b2: int | None = None):
    """Run one ECM curve (Suyama parametrization); return a factor or None."""
    N = mpz(n)
    b2 = b2 or 100 * b1
    try:
        sigma = mpz(rng.randrange(6, n - 1))
        u = (sigma * sigma - 5) % N
        v = 4 * sigma % N
        X = pow(u, 3, N)
        Z = pow(v, 3, N)
        num = pow(v - u, 3, N) * (3 * u + v) % N
        den = 16 * pow(u, 3, N) * v % N
        a24 = num * _inverse(den, N) % N
        X, Z = _ladder(_stage1_multiplier(b1), X, Z, a24, N)
        g = gmpy2.gcd(Z, N)
        if g != 1:
            return int(g) if g != N else None
        # stage 2: primes q = m*D +- j with gcd(j, D) = 1
        D = 2310
        flags = _prime_flags(b2 + D)
        babies = {}
        X2, Z2 = _xdbl(X, Z, a24, N)
        prev, cur = (X, Z), (X, Z)
        babies[1] = cur
        # odd multiples: (j+2)Q = jQ + 2Q, difference (j-2)Q
        prev2 = None
        j = 1
        while j + 2 < D // 2:
            if j == 1:
                nxt = _xadd(cur[0], cur[1], X2, Z2, X, Z, N)  # 3Q, diff Q
            else:
                nxt = _xadd(cur[0], cur[1], X2, Z2, prev2[0], prev2[1], N)
            prev2, cur = cur, nxt
            j += 2
            if math.gcd(j, D) == 1:
                babies[j] = cur
        XD, ZD = _ladder(D, X, Z, a24, N)
        m = max(b1 // D, 1)
        G = _ladder(m * D, X, Z, a24, N)
        Gprev = _ladder((m - 1) * D, X, Z, a24, N) if m > 1 else None
        acc = mpz(1)
        while m * D - D // 2 <= b2:
            gx, gz = G
            base = m * D
            for j, (bx, bz) in babies.items():
                lo, hi = base - j, base + j
                if (b1 < lo <= b2 and flags[lo]) or (b1 < hi <= b2 and flags[hi]):
                    acc = acc * (gx * bz - bx * gz) % N
            if Gprev is None:
                Gnext = _xdbl(XD, ZD, a24, N)
            else:
                Gnext = _xadd(G[0], G[1], XD, ZD, Gprev[0], Gprev[1], N)
            Gprev, G = G, Gnext
            m += 1
        g = gmpy2.gcd(acc, N)
        if 1 < g < N:
            return int(g)
        return None
    except _FoundFactor as exc:
        return exc.g if 1 < exc.g < n else None


def _split(n: int, budget: FactorBudget, rng: random.Random, deadline: _Deadline):
    """Nontrivial factor of composite n using rho then ECM, or None."""
    d = pollard_brent(n, budget.rho_iterations, rng, deadline)
    if d:
        return d
    for i in range(budget.ecm_curves):
        if deadline.expired():
            return None
        d = ecm_one_curve(n, _ecm_schedule(i), rng)
        if d:
            return d
    return None


def factor(n: int, budget: FactorBudget = DEFAULT_BUDGET, cache: FactorCache | None = None) -> FactoredInteger:
    """Factor n >= 1 within ``budget``; incomplete results keep a cofactor."""
    n = int(n)
    if n < 1:
        raise ValueError("factor() needs a positive integer")
    if cache is not None:
        hit = cache.get(n)
        if hit is not None:
            return hit
    deadline = _Deadline(budget.wall_clock_limit)
    rng = None
    exps: dict[int, int] = {}
    rest = _trial(n, budget.trial_bound, exps)
    stuck = 1
    work = [(rest, 1)] if rest > 1 else []
    while work:
        m, mult = work.pop()
        if is_prime(m):
            exps[m] = exps.get(m, 0) + mult
            continue
        root, k = perfect_power(m)
        if k > 1:
            work.append((root, mult * k))
            continue
        if rng is None:
            rng = random.Random(budget.seed ^ (n & 0xFFFFFFFF))
        d = None if deadline.expired() else _split(m, budget, rng, deadline)
        if d is None:
            stuck *= m**mult
            continue
        work.append((d, mult))
        work.append((m // d, mult))
    result = FactoredInteger.from_dict(exps, stuck)
    if stuck > 1:
        result = product([result])  # re-normalize cofactor against listed primes
    if cache is not None and result.complete:
        cache.put(result)
    return result


def factor_trial_division(n: int) -> dict[int, int]:
    """Naive reference factorization (for small n and for tests)."""
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def strip_known(n: int, known) -> tuple[dict[int, int], int]:
    """Divide out every prime listed in ``known`` factorizations from n."""
    exps: dict[int, int] = {}
    for f in known:
        if math.gcd(n, f.value) == 1:
            continue
        for p in f.primes:
            while n % p == 0:
                n //= p
                exps[p] = exps.get(p, 0) + 1
    return exps, n


def _factor_job(args):
    n, budget = args
    return factor(n, budget)


def factor_pieces(pieces, known=(), budget: FactorBudget = DEFAULT_BUDGET,
                  cache: FactorCache | None = None, workers: int = 1) -> list[FactoredInteger]:
    """Factor each positive piece, reusing primes already known.

    Pieces are processed in order; each finished piece joins the known pool
    for the ones after it.  With ``workers > 1`` the residues left after
    stripping ``known`` are factored in a process pool instead.
    """
    known = list(known)
    if workers > 1:
        stripped = [strip_known(int(p), known) for p in pieces]
        todo = [(rest, budget) for _, rest in stripped]
        cached = [cache.get(rest) if cache is not None else None for rest, _ in todo]
        jobs = [t for t, c in zip(todo, cached) if c is None]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = iter(list(pool.map(_factor_job, jobs)))
        out = []
        for (exps, _), hit in zip(stripped, cached):
            rest_f = hit if hit is not None else next(done)
            if cache is not None and hit is None and rest_f.complete:
                cache.put(rest_f)
            out.append(product([FactoredInteger.from_dict(exps), rest_f]))
        return out
    out = []
    for p in pieces:
        p = int(p)
        if p < 1:
            raise ValueError("pieces must be positive")
        exps, rest = strip_known(p, known)
        f = product([FactoredInteger.from_dict(exps), factor(rest, budget, cache)])
        out.append(f)
        known.append(f)
    return out


# --------------------------------------------------------------------------
# persistent cache


class FactorCache:
    """Append-only JSON-lines cache of complete factorizations.

    Each line is a one-entry object ``{"<n>": [["<p>", e], ...]}``.  The file
    is read on first use; new entries are appended with a single write.
    Only values above ``min_value`` are stored.
    """

    def __init__(self, path: str | os.PathLike | None, min_value: int = 10**12):
        self.path = os.fspath(path) if path is not None else None
        self.min_value = min_value
        self._data: dict[int, tuple] | None = None
        self._lock = threading.Lock()

    def _load(self):
        data = {}
        if self.path and os.path.exists(self.path):
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        entry = json.loads(line)
                    except json.JSONDecodeError:
                        continue  # torn final line from an interrupted write
                    for k, v in entry.items():
                        data[int(k)] = tuple((int(p), int(e)) for p, e in v)
        self._data = data

    def __len__(self):
        with self._lock:
            if self._data is None:
                self._load()
            return len(self._data)

    def get(self, n: int) -> FactoredInteger | None:
        with self._lock:
            if self._data is None:
                self._load()
            facs = self._data.get(int(n))
        if facs is None:
            return None
        # a hand-edited or corrupted file must not smuggle in composites
        try:
            f = FactoredInteger(int(n), facs)
        except ValueError:
            return None
        if not all(is_prime(p) for p in f.primes):
            return None
        return f

    def clear(self):
        with self._lock:
            self._data = {}
            if self.path and os.path.exists(self.path):
                os.remove(self.path)

    def put(self, f: FactoredInteger):
        if not f.complete or f.value < self.min_value:
            return
        with self._lock:
            if self._data is None:
                self._load()
            if f.value in self._data:
                return
            self._data[f.value] = f.factors
            if self.path:
                line = json.dumps({str(f.value): [[str(p), e] for p, e in f.factors]})
                os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
                    fh.flush()
