"""ABC triples, their quality, and the recursive good-triple sequences."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import mpmath

from .factor import DEFAULT_BUDGET, FactorBudget, FactoredInteger, RadicalUnavailable, factor, product, radical
from .maps import PreconditionError, TorsionFamily, apply_map, table

PRECISION = 50


class SeedError(PreconditionError):
    def __init__(self, report: SeedReport):
        failed = ", ".join(name for name, ok in report.checks.items() if not ok)
        super().__init__(f"{report.family}: seed ({report.a}, {report.b}) fails: {failed}")
        self.report = report


@dataclass(frozen=True)
class ABCTriple:
    a: FactoredInteger
    b: FactoredInteger
    c: FactoredInteger

    def __post_init__(self):
        a, b, c = self.a.value, self.b.value, self.c.value
        if a + b != c:
            raise ValueError(f"{a} + {b} != {c}")
        if gcd(a, b) != 1:
            raise ValueError(f"gcd({a}, {b}) != 1")

    @property
    def values(self) -> tuple[int, int, int]:
        return self.a.value, self.b.value, self.c.value

    @property
    def complete(self) -> bool:
        return self.a.complete and self.b.complete and self.c.complete

    @property
    def abc(self) -> FactoredInteger:
        return product([self.a, self.b, self.c])

    def rad(self) -> int:
        return radical(self.abc)

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json(), "c": self.c.to_json()}

    def __str__(self):
        return f"({self.a.value}, {self.b.value}, {self.c.value})"


def make_triple(a: int, b: int, budget: FactorBudget = DEFAULT_BUDGET, cache=None) -> ABCTriple:
    if a < 1 or b < 1:
        raise ValueError("triple entries must be positive")
    if gcd(a, b) != 1:
        raise ValueError(f"gcd({a}, {b}) = {gcd(a, b)}: not coprime")
    return ABCTriple(factor(a, budget, cache), factor(b, budget, cache), factor(a + b, budget, cache))


def quality(P: ABCTriple):
    """log c / log rad(abc) as a 50-digit mpf, or None when rad is unknown."""
    try:
        rad = P.rad()
    except RadicalUnavailable:
        return None
    if rad == 1:
        return None
    with mpmath.workdps(PRECISION):
        return mpmath.log(P.c.value) / mpmath.log(rad)


def is_good(P: ABCTriple) -> bool:
    """rad(abc) < c, exact."""
    return P.rad() < P.c.value


@dataclass(frozen=True)
class SeedReport:
    family: TorsionFamily
    a: int
    b: int
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"family": self.family.label, "a": str(self.a), "b": str(self.b),
                "ok": self.ok, "checks": dict(self.checks)}


def validate_seed(fam: TorsionFamily, P: ABCTriple) -> SeedReport:
    a, b, _ = P.values
    tb = table(fam)
    checks = {
        "a even": a % 2 == 0,
        "b = 1 mod 4": b % 4 == 1,
        "b/a > theta": tb.exceeds_theta(Fraction(b, a)),
    }
    if fam is TorsionFamily.C2xC6:
        checks["a = 0 mod 3"] = a % 3 == 0
    try:
        checks["good triple"] = is_good(P)
    except RadicalUnavailable:
        checks["good triple"] = False
    return SeedReport(fam, a, b, checks)


def congruences(fam: TorsionFamily, a: int, b: int) -> dict[str, bool]:
    out = {"a = 0 mod 16": a % 16 == 0, "b = 1 mod 4": b % 4 == 1}
    if fam is TorsionFamily.C2xC6:
        out["a = 0 mod 3"] = a % 3 == 0
    return out


@dataclass(frozen=True)
class StepReport:
    family: TorsionFamily
    j: int
    triple: ABCTriple
    quality: object  # mpf or None
    is_good: bool | None
    congruences: dict
    ratio: Fraction
    ratio_exceeds_theta: bool
    rad_value: int | None
    D_value: int | None
    rad_lt_absD: bool | None
    seed_overridden: bool = False
    notes: tuple = field(default=())

    def to_json(self) -> dict:
        q = self.quality
        return {
            "family": self.family.label,
            "j": self.j,
            "triple": self.triple.to_json(),
            "quality": None if q is None else f"{float(q):.4f}",
            "good_triple": self.is_good,
            "congruences": dict(self.congruences),
            "ratio": str(self.ratio),
            "ratio_exceeds_theta": self.ratio_exceeds_theta,
            "rad": None if self.rad_value is None else str(self.rad_value),
            "D": None if self.D_value is None else str(self.D_value),
            "rad_lt_absD": self.rad_lt_absD,
            "seed_overridden": self.seed_overridden,
        }


def step_report(fam: TorsionFamily, j: int, P: ABCTriple, D=None, overridden=False) -> StepReport:
    a, b, _ = P.values
    try:
        rad = P.rad()
    except RadicalUnavailable:
        rad = None
    return StepReport(
        family=fam,
        j=j,
        triple=P,
        quality=quality(P),
        is_good=None if rad is None else rad < P.c.value,
        congruences=congruences(fam, a, b),
        ratio=Fraction(b, a),
        ratio_exceeds_theta=table(fam).exceeds_theta(Fraction(b, a)),
        rad_value=rad,
        D_value=D,
        rad_lt_absD=None if (rad is None or D is None) else rad < abs(D),
        seed_overridden=overridden,
    )


def iterate(fam: TorsionFamily, P0: ABCTriple, steps: int, budget: FactorBudget = DEFAULT_BUDGET,
            cache=None, force: bool = False, on_step=None) -> list[StepReport]:
    """Apply the family's map ``steps`` times, re-verifying every step.

    Returns reports for j = 1..steps.  A failing seed raises SeedError
    unless ``force`` is set, in which case each report is marked overridden.
    ``on_step`` is called with each report as soon as it is ready.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    seed = validate_seed(fam, P0)
    if not seed.ok and not force:
        raise SeedError(seed)
    overridden = not seed.ok
    tb = table(fam)
    out = []
    P = P0
    for j in range(1, steps + 1):
        D = tb.D.evaluate({"a": P.a.value, "b": P.b.value})
        P = apply_map(fam, P, budget, cache)
        rep = step_report(fam, j, P, D, overridden)
        out.append(rep)
        if on_step:
            on_step(rep)
    return out
