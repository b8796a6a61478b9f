import math
import random

import pytest
from hypothesis import strategies as st

from bandknot.forms import direct_sum, from_cyclic, hyperbolic, transport

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run exhaustive grids marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


# ---------------------------------------------------------------- form generators

PRIME_POWERS = [2, 4, 8, 3, 9, 27, 5, 25, 7, 49, 11, 13, 17, 19, 23, 29, 31, 37]


def random_unimodular(rng: random.Random, k: int):
    M = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(3 * k):
        i, j = rng.sample(range(k), 2) if k > 1 else (0, 0)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for r in range(k):
            M[r][i] += c * M[r][j]
    return M


def random_form(rng: random.Random, max_order: int = 2000, max_two: int = 16):
    """A random nonsingular form of order <= max_order, 2-part <= max_two."""
    pieces, order, two = [], 1, 1
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.15:
            n = rng.choice([3, 5, 2])
            if order * n * n > max_order or (n == 2 and two * 4 > max_two):
                continue
            pieces.append(hyperbolic(n))
            order *= n * n
            two *= 4 if n == 2 else 1
            continue
        q = rng.choice(PRIME_POWERS)
        if order * q > max_order or (q % 2 == 0 and two * q > max_two):
            continue
        u = rng.randrange(1, q)
        while u % 2 == 0 and q % 2 == 0 or u % q == 0 or (q % 3 == 0 and u % 3 == 0) \
                or any(q % p == 0 and u % p == 0 for p in (5, 7)):
            u = rng.randrange(1, q)
        pieces.append(from_cyclic(u, q) if q % 2 else _two_cyclic(u, q))
        order *= q
        two *= q if q % 2 == 0 else 1
    F = direct_sum(*pieces) if pieces else from_cyclic(1, 3)
    if F.group.rank > 1 and rng.random() < 0.5:
        F = transport(F, random_unimodular(rng, F.group.rank))
    return F


def _two_cyclic(u: int, q: int):
    from fractions import Fraction
    from bandknot.forms import from_generators
    return from_generators([[q]], [[Fraction(u, q)]])


@st.composite
def forms(draw, max_order: int = 2000, max_two: int = 16):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_form(random.Random(seed), max_order, max_two)


@st.composite
def cyclic_forms(draw, max_order: int = 200):
    p = draw(st.integers(1, max_order // 2).map(lambda x: 2 * x + 1).filter(lambda x: x <= max_order))
    q = draw(st.integers(1, max(1, p - 1)).filter(lambda q: math.gcd(q, p) == 1))
    return from_cyclic(q, p)
