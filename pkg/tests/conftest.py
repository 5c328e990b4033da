import pytest
from hypothesis import strategies as st

from abcfrey.maps import TorsionFamily
from abcfrey.reference import SEEDS

FAMILIES = list(TorsionFamily)


@pytest.fixture(params=FAMILIES, ids=lambda f: f.slug)
def family(request):
    return request.param


@pytest.fixture
def seed(family):
    return SEEDS[family]


@st.composite
def valid_pairs(draw, family=None, max_value=10**6):
    """Coprime (a, b), a even, b odd, plus 3 | a for C2xC6."""
    a = draw(st.integers(1, max_value // 2)) * 2
    if family is TorsionFamily.C2xC6 and a % 3:
        a *= 3
    b = draw(st.integers(0, max_value // 2)) * 2 + 1
    from math import gcd

    g = gcd(a, b)
    while g > 1:
        b //= g
        g = gcd(a, b)
    return a, b


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(n: int, passed: bool, detail: str = ""):
    line = f"criterion {n}: {'PASS' if passed else 'FAIL'}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
