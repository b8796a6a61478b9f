# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled brute-force scans. Mirrors ``_kernels_py`` exactly.

Arithmetic runs in signed 64-bit; callers route moduli >= 2**31 to the
Python fallback so products of two residues never overflow.
"""

from libc.stdlib cimport malloc, free


cdef inline long long _mod(long long a, long long n) nogil:
    cdef long long r = a % n
    if r < 0:
        r += n
    return r


def jacobi(long long a, long long n):
    cdef long long t
    cdef int result = 1
    a = _mod(a, n)
    while a != 0:
        while a % 2 == 0:
            a //= 2
            t = n % 8
            if t == 3 or t == 5:
                result = -result
        t = a
        a = n
        n = t
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a = a % n
    if n == 1:
        return result
    return 0


def sqrt_scan(long long x, long long n):
    cdef long long r, hit = -1
    x = _mod(x, n)
    with nogil:
        for r in range(n):
            if (r * r) % n == x:
                hit = r
                break
    return hit


def pm_square_scan(long long c, long long n):
    cdef long long x, s, mc
    cdef int sign = 0
    c = _mod(c, n)
    mc = _mod(-c, n)
    with nogil:
        for x in range(n):
            s = (x * x) % n
            if s == c:
                sign = 1
                break
            if s == mc:
                sign = -1
                break
    if sign == 0:
        return None
    return x, sign


cdef long long _quad(long long* g, long long* A, int k, long long N) nogil:
    cdef long long total = 0, acc
    cdef int i, j
    for i in range(k):
        if g[i] == 0:
            continue
        acc = 0
        for j in range(k):
            acc = (acc + A[i * k + j] * g[j]) % N
        total = (total + g[i] * acc) % N
    return total


cdef int _advance(long long* g, long long* f, int k) nogil:
    cdef int i = k - 1
    while i >= 0:
        g[i] += 1
        if g[i] < f[i]:
            return 1
        g[i] = 0
        i -= 1
    return 0


cdef _scan(factors, A, long long N, bint collect):
    cdef int k = len(factors)
    cdef int i, j
    cdef long long* g
    cdef long long* f
    cdef long long* a
    out = []
    if k == 0:
        return out
    g = <long long*> malloc(k * sizeof(long long))
    f = <long long*> malloc(k * sizeof(long long))
    a = <long long*> malloc(k * k * sizeof(long long))
    try:
        for i in range(k):
            g[i] = 0
            f[i] = factors[i]
            for j in range(k):
                a[i * k + j] = _mod(A[i][j], N)
        while _advance(g, f, k):
            if _quad(g, a, k, N) == 0:
                out.append(tuple([g[i] for i in range(k)]))
                if not collect:
                    break
    finally:
        free(g)
        free(f)
        free(a)
    return out


def first_isotropic(factors, A, long long N):
    found = _scan(factors, A, N, False)
    return found[0] if found else None


def isotropic_elements(factors, A, long long N):
    return _scan(factors, A, N, True)
