"""Exact arithmetic: ℚ/ℤ values, number theory, integer normal forms.

Integer matrices are plain lists of lists of Python ints, so entries never
overflow. Nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

from . import kernels
from .config import SQRT_MOD_HARD_LIMIT, check_cap

IntMatrix = list  # list[list[int]], rectangular


@dataclass(frozen=True, order=True)
class RationalModOne:
    """Canonical element of ℚ/ℤ: ``0 <= numerator < denominator``, reduced."""

    numerator: int
    denominator: int

    def __post_init__(self):
        n, d = self.numerator, self.denominator
        if d <= 0 or not 0 <= n < d or gcd(n, d) != 1:
            raise ValueError(f"non-canonical element {n}/{d} of Q/Z")

    @classmethod
    def of(cls, value, denominator: int = 1) -> "RationalModOne":
        """Normalize any rational (or ``value/denominator``) into ℚ/ℤ.

        >>> RationalModOne.of(-1, 3)
        RationalModOne(numerator=2, denominator=3)
        """
        f = Fraction(value) / denominator
        f -= f.numerator // f.denominator
        return cls(f.numerator, f.denominator)

    @classmethod
    def zero(cls) -> "RationalModOne":
        return cls(0, 1)

    def __add__(self, other: "RationalModOne") -> "RationalModOne":
        return rmo_add(self, other)

    def __neg__(self) -> "RationalModOne":
        return RationalModOne.of(-self.numerator, self.denominator)

    def __sub__(self, other: "RationalModOne") -> "RationalModOne":
        return rmo_add(self, -other)

    def __mul__(self, n: int) -> "RationalModOne":
        if not isinstance(n, int):
            return NotImplemented
        return rmo_scale(n, self)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return self.numerator != 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def order(self) -> int:
        """Additive order in ℚ/ℤ (the denominator)."""
        return self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}" if self.numerator else "0"


def rmo_add(a: RationalModOne, b: RationalModOne) -> RationalModOne:
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    num = a.numerator * (den // a.denominator) + b.numerator * (den // b.denominator)
    return RationalModOne.of(num, den)


def rmo_scale(n: int, a: RationalModOne) -> RationalModOne:
    return RationalModOne.of(n * a.numerator, a.denominator)


# ---------------------------------------------------------------- number theory

def jacobi(x: int, n: int) -> int:
    """Jacobi symbol (x/n) for odd ``n >= 3`` via quadratic reciprocity.

    >>> jacobi(-1, 7), jacobi(2, 15)
    (-1, 1)
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd modulus >= 3, got n={n}")
    return kernels.jacobi(x, n)


def sqrt_mod(x: int, n: int) -> int | None:
    """Smallest ``r`` in ``[0, n)`` with ``r*r ≡ x (mod n)``, by exhaustive scan.

    Deliberately brute force: this is the oracle the Jacobi symbol is checked
    against. Refuses moduli above 10**8 and above the active enumeration cap.
    """
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got n={n}")
    if n > SQRT_MOD_HARD_LIMIT:
        raise ValueError(f"sqrt_mod refuses n={n} > {SQRT_MOD_HARD_LIMIT}")
    check_cap(f"square-root scan mod {n}", n)
    r = kernels.sqrt_scan(x, n)
    return None if r < 0 else r


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division (``{}`` for 0 and ±1)."""
    n = abs(n)
    out: dict[int, int] = {}
    if n < 2:
        return out
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_square_mod_prime_power(c: int, p: int, k: int) -> bool:
    """Whether ``x*x ≡ c (mod p**k)`` is solvable, decided from local structure."""
    m = p**k
    c %= m
    if c == 0:
        return True
    v = valuation(c, p)
    if v % 2:
        return False
    u = c // p**v
    rest = k - v
    if p == 2:
        if rest == 1:
            return True
        if rest == 2:
            return u % 4 == 1
        return u % 8 == 1
    return jacobi(u, p) == 1 if p > 2 else True


def is_square_mod(c: int, n: int) -> bool:
    """Solvability of ``x*x ≡ c (mod n)`` via CRT over the prime powers of ``n``."""
    return all(is_square_mod_prime_power(c, p, k) for p, k in factorize(n).items())


# ---------------------------------------------------------------- matrices

def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(col) for col in zip(*M)] if M else []


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def inverse_rational(M: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Inverse over ℚ by Gauss-Jordan; raises ``ZeroDivisionError`` if singular."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def inverse_unimodular(M: Sequence[Sequence[int]]) -> IntMatrix:
    inv = inverse_rational(M)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


class SnfResult(NamedTuple):
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]


def _smallest_nonzero(A, t, m, n):
    best = None
    for i in range(t, m):
        row = A[i]
        for j in range(t, n):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return best


def smith_normal_form(M: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form with transforms: ``U @ M @ V == S``.

    Pivots are the smallest-magnitude nonzero entry of the active block (first
    in row-major order on ties). Nonzero diagonal entries are positive and form
    a divisibility chain; zero entries come last.

    >>> smith_normal_form([[2, 4], [6, 8]]).diagonal
    [2, 4]
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(map(int, r)) for r in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = _smallest_nonzero(A, t, m, n)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        if best is None:
            break
    return SnfResult(A, U, V)


def hermite_normal_form(M: Sequence[Sequence[int]]) -> IntMatrix:
    """Column-style Hermite normal form of the column lattice of ``M``.

    The result has the shape of ``M``: lower echelon, positive pivots, entries
    left of each pivot reduced into ``[0, pivot)``, zero columns last.

    >>> hermite_normal_form([[2, 4], [0, 2]])
    [[2, 0], [0, 2]]
    """
    return hermite_with_transform(M)[0]


def hermite_with_transform(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Return ``(H, V)`` with ``M @ V == H`` and ``V`` unimodular."""
    m = len(M)
    n = len(M[0]) if m else 0
    H = [list(map(int, r)) for r in M]
    V = identity(n)

    def col_op(dst, src, q):
        for row in H:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    def swap(i, j):
        for row in H:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    c = 0
    for r in range(m):
        if c >= n:
            break
        while True:
            nz = [j for j in range(c, n) if H[r][j]]
            if not nz:
                break
            j = min(nz, key=lambda j: (abs(H[r][j]), j))
            if j != c:
                swap(c, j)
            p = H[r][c]
            for j in range(c + 1, n):
                if H[r][j]:
                    col_op(j, c, -(H[r][j] // p))
            if all(H[r][j] == 0 for j in range(c + 1, n)):
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            for row in H:
                row[c] = -row[c]
            for row in V:
                row[c] = -row[c]
        p = H[r][c]
        for j in range(c):
            q = H[r][j] // p
            if q:
                col_op(j, c, -q)
        c += 1
    return H, V
