"""Pure-Python versions of the brute-force scans.

Every function here has a twin in ``_kernels.pyx`` with the same signature and
results; :mod:`bandknot.kernels` picks one at import time.
"""

from __future__ import annotations


def jacobi(a: int, n: int) -> int:
    # n odd and positive; validated by the caller
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_scan(x: int, n: int) -> int:
    x %= n
    for r in range(n):
        if r * r % n == x:
            return r
    return -1


def pm_square_scan(c: int, n: int):
    c %= n
    mc = (-c) % n
    for x in range(n):
        s = x * x % n
        if s == c:
            return x, 1
        if s == mc:
            return x, -1
    return None


def _quad(g, A, N):
    k = len(g)
    total = 0
    for i in range(k):
        gi = g[i]
        if not gi:
            continue
        row = A[i]
        acc = 0
        for j in range(k):
            acc += row[j] * g[j]
        total += gi * acc
    return total % N


def _odometer(factors):
    k = len(factors)
    g = [0] * k
    while True:
        yield g
        i = k - 1
        while i >= 0:
            g[i] += 1
            if g[i] < factors[i]:
                break
            g[i] = 0
            i -= 1
        if i < 0:
            return


def first_isotropic(factors, A, N):
    if not factors:
        return None
    it = _odometer(list(factors))
    next(it)  # skip zero
    for g in it:
        if _quad(g, A, N) == 0:
            return tuple(g)
    return None


def isotropic_elements(factors, A, N):
    if not factors:
        return []
    out = []
    it = _odometer(list(factors))
    next(it)
    for g in it:
        if _quad(g, A, N) == 0:
            out.append(tuple(g))
    return out
