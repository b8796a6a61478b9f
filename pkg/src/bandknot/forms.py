"""Linking forms ``(G, λ)`` with values in ℚ/ℤ.

A form stores its Gram matrix against the invariant-factor generators of its
group. Internally every Gram entry is also kept as an integer numerator over
the group exponent ``N`` (entries of a well-defined form always have
denominators dividing ``N``), which is what the scanning kernels consume.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from . import kernels
from .arith import RationalModOne, inverse_unimodular, smith_normal_form
from .config import check_cap, isometry_cap
from .errors import InputError
from .groups import (TRIVIAL, FiniteAbelianGroup, GroupElement, Subgroup, Subquotient,
                     from_presentation, primary_decomposition, subgroup_structure,
                     subquotient)


@dataclass(frozen=True)
class LinkingForm:
    group: FiniteAbelianGroup
    gram: tuple[tuple[RationalModOne, ...], ...]

    def __post_init__(self):
        gram = tuple(tuple(x if isinstance(x, RationalModOne) else RationalModOne.of(x)
                           for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        k = self.group.rank
        if len(gram) != k or any(len(row) != k for row in gram):
            raise ValueError(f"Gram matrix must be {k}x{k} for {self.group}")
        for i in range(k):
            for j in range(k):
                if gram[i][j] != gram[j][i]:
                    raise ValueError("Gram matrix is not symmetric")
                if (self.group.invariant_factors[i] * gram[i][j]):
                    raise ValueError(f"ill-defined form: {self.group.invariant_factors[i]} * "
                                     f"gram[{i}][{j}] = {self.group.invariant_factors[i]} * "
                                     f"{gram[i][j]} is not an integer")

    # -- integer view used by the kernels
    @cached_property
    def modulus(self) -> int:
        return self.group.exponent

    @cached_property
    def int_gram(self) -> tuple[tuple[int, ...], ...]:
        N = self.modulus
        return tuple(tuple(x.numerator * (N // x.denominator) for x in row) for row in self.gram)

    @property
    def order(self) -> int:
        return self.group.order

    def evaluate(self, g: Sequence[int], h: Sequence[int]) -> RationalModOne:
        k = self.group.rank
        if len(g) != k or len(h) != k:
            raise ValueError(f"elements must have {k} coordinates")
        A, N = self.int_gram, self.modulus
        total = sum(g[i] * A[i][j] * h[j] for i in range(k) if g[i] for j in range(k) if h[j])
        return RationalModOne.of(total, N)

    def quad(self, g: Sequence[int]) -> RationalModOne:
        return self.evaluate(g, g)

    def __str__(self) -> str:
        if not self.group.rank:
            return "trivial form"
        if self.group.rank == 1:
            return f"<{self.gram[0][0]}> on {self.group}"
        rows = "; ".join(" ".join(str(x) for x in row) for row in self.gram)
        return f"[{rows}] on {self.group}"


TRIVIAL_FORM = LinkingForm(TRIVIAL, ())


def from_generators(relations: Sequence[Sequence[int]],
                    gram: Sequence[Sequence[Fraction | int]]) -> LinkingForm:
    """Form given on arbitrary generators subject to integer relations (one per row).

    The Gram matrix is transported to invariant-factor coordinates.
    """
    pres = from_presentation(relations, ngens=len(gram))
    k = pres.group.rank
    P = pres.new_to_old
    F = [[Fraction(x) for x in row] for row in gram]
    n = len(F)
    out = []
    for a in range(k):
        row = []
        for b in range(k):
            v = sum(P[a][i] * F[i][j] * P[b][j] for i in range(n) if P[a][i]
                    for j in range(n) if P[b][j])
            row.append(RationalModOne.of(v))
        out.append(tuple(row))
    return LinkingForm(pres.group, tuple(out))


def diagonal_form(entries: Iterable[tuple[int, int]]) -> LinkingForm:
    """``⊕ ⟨q_i/p_i⟩`` from ``(q_i, p_i)`` pairs, renormalized."""
    entries = list(entries)
    n = len(entries)
    rel = [[p if i == j else 0 for j in range(n)] for i, (_, p) in enumerate(entries)]
    gram = [[Fraction(q, p) if i == j else Fraction(0) for j in range(n)]
            for i, (q, p) in enumerate(entries)]
    return from_generators(rel, gram) if n else TRIVIAL_FORM


def from_cyclic(q: int, p: int) -> LinkingForm:
    """``⟨q/p⟩`` on ``ℤ_p``; ``p`` odd, ``gcd(p, q) = 1``.

    >>> print(from_cyclic(2, 7))
    <2/7> on Z/7
    """
    if p < 1 or p % 2 == 0:
        raise InputError(f"cyclic form needs an odd positive order, got p={p}")
    if gcd(p, q) != 1:
        raise InputError(f"gcd(p, q) = gcd({p}, {q}) != 1: the form would be singular")
    if p == 1:
        return TRIVIAL_FORM
    return LinkingForm(FiniteAbelianGroup((p,)), ((RationalModOne.of(q, p),),))


def hyperbolic(n: int) -> LinkingForm:
    """The metabolic plane on ``ℤ_n ⊕ ℤ_n`` with Gram ``[[0, 1/n], [1/n, 0]]``."""
    half = Fraction(1, n)
    return from_generators([[n, 0], [0, n]], [[0, half], [half, 0]])


def direct_sum(*forms: LinkingForm) -> LinkingForm:
    """Orthogonal sum, renormalized to invariant-factor coordinates.

    >>> print(direct_sum(from_cyclic(2, 7), from_cyclic(2, 9)))
    <32/63> on Z/63
    """
    forms = [f for f in forms if f.group.rank]
    if not forms:
        return TRIVIAL_FORM
    if len(forms) == 1:
        return forms[0]
    factors = [d for f in forms for d in f.group.invariant_factors]
    n = len(factors)
    rel = [[d if i == j else 0 for j in range(n)] for i, d in enumerate(factors)]
    gram = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for f in forms:
        k = f.group.rank
        for i in range(k):
            for j in range(k):
                gram[off + i][off + j] = f.gram[i][j].as_fraction()
        off += k
    return from_generators(rel, gram)


def negate(F: LinkingForm) -> LinkingForm:
    return LinkingForm(F.group, tuple(tuple(-x for x in row) for row in F.gram))


def restrict(F: LinkingForm, sq: Subquotient) -> LinkingForm:
    """The form induced on a subquotient ``S/K`` (requires ``K ⊆ S^⊥``)."""
    B = sq.basis
    gram = tuple(tuple(F.evaluate(a, b) for b in B) for a in B)
    return LinkingForm(sq.group, gram)


def restrict_to_subgroup(F: LinkingForm, S: Subgroup) -> tuple[LinkingForm, Subquotient]:
    sq = subquotient(F.group, S.generators)
    return restrict(F, sq), sq


def orthogonal_complement(F: LinkingForm, S: Subgroup) -> Subgroup:
    """``S^⊥ = {g : λ(g, s) = 0 for all s in S}``, solved as a lattice kernel.

    >>> orthogonal_complement(from_cyclic(2, 9), Subgroup(FiniteAbelianGroup((9,)), ((3,),))).generators
    ((3,),)
    """
    G = F.group
    k = G.rank
    gens = [g for g in S.generators if any(g)]
    if k == 0 or not gens:
        return Subgroup(G, tuple(tuple(int(i == j) for j in range(k)) for i in range(k)))
    A, N = F.int_gram, F.modulus
    # C^T g ≡ 0 (mod N), one row per generator of S
    Ct = [[sum(A[i][l] * s[l] for l in range(k)) % N for i in range(k)] for s in gens]
    snf = smith_normal_form(Ct)
    diag = snf.diagonal
    V = snf.V
    cols = []
    for i in range(k):
        s = diag[i] if i < len(diag) else 0
        t = N // gcd(N, s) if s else 1
        cols.append([V[r][i] * t for r in range(k)])
    out_gens = [G.reduce(c) for c in cols]
    sub = Subgroup(G, tuple(out_gens))
    _, basis = subgroup_structure(sub)
    return Subgroup(G, basis)


def is_nonsingular(F: LinkingForm) -> bool:
    """Whether ``g ↦ λ(g, ·)`` is injective (equivalently, an isomorphism)."""
    whole = Subgroup(F.group, tuple(tuple(int(i == j) for j in range(F.group.rank))
                                    for i in range(F.group.rank)))
    return subgroup_structure(orthogonal_complement(F, whole))[0].order == 1


def find_isotropic(F: LinkingForm) -> GroupElement | None:
    """Lexicographically first nonzero ``g`` with ``λ(g, g) = 0``; ``None`` if anisotropic."""
    check_cap(f"isotropic search in {F.group}", F.order)
    return kernels.first_isotropic(F.group.invariant_factors, F.int_gram, F.modulus)


def isotropic_elements(F: LinkingForm) -> list[GroupElement]:
    check_cap(f"isotropic search in {F.group}", F.order)
    return kernels.isotropic_elements(F.group.invariant_factors, F.int_gram, F.modulus)


def is_totally_isotropic(F: LinkingForm, gens: Sequence[Sequence[int]]) -> bool:
    return all(not F.evaluate(a, b) for a in gens for b in gens)


# ---------------------------------------------------------------- isometry

def primary_forms(F: LinkingForm):
    """``(component, form on the component)`` for each prime dividing ``|G|``."""
    out = []
    for comp in primary_decomposition(F.group):
        basis = [comp.to_ambient(tuple(int(i == j) for j in range(comp.group.rank)))
                 for i in range(comp.group.rank)]
        gram = tuple(tuple(F.evaluate(a, b) for b in basis) for a in basis)
        out.append((comp, LinkingForm(comp.group, gram)))
    return out


def _isometric_pgroup(F1: LinkingForm, F2: LinkingForm) -> bool:
    G = F2.group
    if F1.group != G:
        return False
    k = G.rank
    A1, A2, N = F1.int_gram, F2.int_gram, F1.modulus
    if F2.modulus != N:
        return False
    elements = list(itertools.product(*(range(d) for d in G.invariant_factors)))

    def pair2(x, y):
        return sum(x[i] * A2[i][j] * y[j] for i in range(k) if x[i] for j in range(k) if y[j]) % N

    candidates = []
    for i, d in enumerate(G.invariant_factors):
        target = A1[i][i] % N
        candidates.append([x for x in elements
                           if G.element_order(x) == d and pair2(x, x) == target])

    chosen: list = []

    def search(i):
        if i == k:
            return subgroup_structure(Subgroup(G, tuple(chosen)))[0].order == G.order
        for x in candidates[i]:
            if all(pair2(chosen[j], x) == A1[j][i] % N for j in range(i)):
                chosen.append(x)
                if search(i + 1):
                    return True
                chosen.pop()
        return False

    return search(0)


def are_isometric(F1: LinkingForm, F2: LinkingForm) -> bool:
    """Brute-force isometry test, one primary component at a time.

    >>> are_isometric(direct_sum(from_cyclic(2, 7), from_cyclic(2, 9)), from_cyclic(8, 63))
    True
    """
    cap = isometry_cap()
    check_cap(f"isometry search on {F1.group}", F1.order, cap)
    check_cap(f"isometry search on {F2.group}", F2.order, cap)
    if F1.group != F2.group:
        return False
    p1, p2 = primary_forms(F1), primary_forms(F2)
    return all(_isometric_pgroup(a, b) for (_, a), (_, b) in zip(p1, p2))


def transport(F: LinkingForm, matrix: Sequence[Sequence[int]]) -> LinkingForm:
    """Re-present ``F`` on the generating set given by the columns of a unimodular matrix."""
    k = F.group.rank
    U = [list(r) for r in matrix]
    Uinv = inverse_unimodular(U)
    D = F.group.invariant_factors
    # new generator f_j = sum_i U[i][j] e_i ; relations D e_i expressed in f-coordinates
    rel = [[Uinv[j][i] * D[i] for j in range(k)] for i in range(k)]
    gram = [[sum(U[a][i] * F.gram[a][b].as_fraction() * U[b][j] for a in range(k)
                 for b in range(k)) for j in range(k)] for i in range(k)]
    return from_generators(rel, gram)
