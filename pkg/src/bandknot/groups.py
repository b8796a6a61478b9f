"""Finite abelian groups in invariant-factor form.

Elements are plain tuples of ints, coordinate ``i`` reduced mod ``d_i``.
Subgroups and subquotients are computed with lattice arithmetic (Hermite then
Smith normal form), so nothing here needs to enumerate group elements except
:func:`enumerate_elements` itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Iterator, Sequence

from .arith import (factorize, hermite_normal_form, inverse_unimodular, smith_normal_form,
                    transpose, valuation)
from .config import check_cap
from .errors import InputError

GroupElement = tuple


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``ℤ_{d_1} ⊕ ... ⊕ ℤ_{d_k}`` with ``d_1 | d_2 | ... | d_k`` and every ``d_i >= 2``."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        for d in f:
            if d < 2:
                raise ValueError(f"invariant factors must be >= 2, got {f}")
        for a, b in zip(f, f[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain, got {f}")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_cyclic(self) -> bool:
        return self.rank <= 1

    def zero(self) -> GroupElement:
        return (0,) * self.rank

    def reduce(self, v: Sequence[int]) -> GroupElement:
        if len(v) != self.rank:
            raise ValueError(f"element {tuple(v)} has wrong length for {self}")
        return tuple(x % d for x, d in zip(v, self.invariant_factors))

    def add(self, g: Sequence[int], h: Sequence[int]) -> GroupElement:
        return self.reduce([a + b for a, b in zip(g, h)])

    def scale(self, n: int, g: Sequence[int]) -> GroupElement:
        return self.reduce([n * a for a in g])

    def element_order(self, g: Sequence[int]) -> int:
        from math import gcd
        o = 1
        for x, d in zip(self.reduce(g), self.invariant_factors):
            k = d // gcd(x, d)
            o = o * k // gcd(o, k)
        return o

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


TRIVIAL = FiniteAbelianGroup(())


@dataclass(frozen=True)
class Subgroup:
    ambient: FiniteAbelianGroup
    generators: tuple[GroupElement, ...] = field(default=())

    def __post_init__(self):
        gens = tuple(self.ambient.reduce(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)

    @property
    def order(self) -> int:
        return subgroup_structure(self)[0].order


@dataclass(frozen=True)
class Subquotient:
    """``S/K`` inside a group, with coordinates in both directions.

    ``basis[i]`` is an ambient representative of the i-th invariant-factor
    generator of the quotient; :meth:`coords` maps an ambient element of ``S``
    to quotient coordinates.
    """

    group: FiniteAbelianGroup
    basis: tuple[GroupElement, ...]
    ambient: FiniteAbelianGroup
    _lattice: tuple  # lower-triangular basis of the lattice of S
    _U: tuple  # SNF left transform, restricted rows

    def coords(self, v: Sequence[int]) -> GroupElement:
        x = _solve_lower(self._lattice, list(v))
        y = [sum(u * xi for u, xi in zip(row, x)) for row in self._U]
        return self.group.reduce(y)


def _solve_lower(B, v):
    """Integer solution of ``B x = v`` for lower-triangular nonsingular ``B``."""
    n = len(B)
    x = [0] * n
    for i in range(n):
        s = v[i] - sum(B[i][j] * x[j] for j in range(i))
        if s % B[i][i]:
            raise ValueError("vector is not in the lattice")
        x[i] = s // B[i][i]
    return x


def _lattice_basis(G: FiniteAbelianGroup, gens: Sequence[Sequence[int]]):
    k = G.rank
    cols = [list(g) for g in gens] + [[G.invariant_factors[i] if r == i else 0 for r in range(k)]
                                     for i in range(k)]
    H = hermite_normal_form(transpose(cols))
    return [row[:k] for row in H]


def subquotient(G: FiniteAbelianGroup, S_gens: Sequence[Sequence[int]],
                K_gens: Sequence[Sequence[int]] = ()) -> Subquotient:
    """Structure of ``⟨S_gens⟩ / ⟨K_gens⟩`` (the K generators must lie in ⟨S⟩)."""
    k = G.rank
    if k == 0:
        return Subquotient(TRIVIAL, (), G, (), ())
    B = _lattice_basis(G, S_gens)
    kcols = [list(g) for g in K_gens] + [[G.invariant_factors[i] if r == i else 0
                                          for r in range(k)] for i in range(k)]
    X = transpose([_solve_lower(B, c) for c in kcols])  # k x m, columns in B-coordinates
    snf = smith_normal_form(X)
    diag = snf.diagonal + [0] * (k - len(snf.diagonal))
    if any(d == 0 for d in diag):
        raise ValueError("subquotient is infinite")
    Uinv = inverse_unimodular(snf.U)
    keep = [i for i, d in enumerate(diag) if d > 1]
    basis = []
    for i in keep:
        col = [Uinv[r][i] for r in range(k)]
        amb = [sum(B[r][c] * col[c] for c in range(k)) for r in range(k)]
        basis.append(G.reduce(amb))
    group = FiniteAbelianGroup(tuple(diag[i] for i in keep))
    return Subquotient(group, tuple(basis), G, tuple(map(tuple, B)),
                       tuple(tuple(snf.U[i]) for i in keep))


def subgroup_structure(S: Subgroup) -> tuple[FiniteAbelianGroup, tuple[GroupElement, ...]]:
    """Invariant factors of ``S`` and ambient elements generating it in that form.

    >>> subgroup_structure(Subgroup(FiniteAbelianGroup((63,)), ((21,),)))
    (FiniteAbelianGroup(invariant_factors=(3,)), ((21,),))
    """
    sq = subquotient(S.ambient, S.generators)
    return sq.group, sq.basis


class Presentation:
    """Result of :func:`from_presentation`: the group and both coordinate maps.

    ``old_to_new[j]`` is the image of abstract generator ``j``;
    ``new_to_old[i]`` expresses invariant-factor generator ``i`` in the
    abstract generators (an integer combination).
    """

    def __init__(self, group, old_to_new, new_to_old):
        self.group = group
        self.old_to_new = old_to_new
        self.new_to_old = new_to_old

    def image(self, coeffs: Sequence[int]) -> GroupElement:
        """Image of ``sum(coeffs[j] * generator_j)``."""
        out = [0] * self.group.rank
        for c, img in zip(coeffs, self.old_to_new):
            if c:
                for i, x in enumerate(img):
                    out[i] += c * x
        return self.group.reduce(out)


def from_presentation(relations: Sequence[Sequence[int]], ngens: int | None = None) -> Presentation:
    """Cokernel of an integer relation matrix (one relation per row).

    >>> from_presentation([[2, 1], [1, 2]]).group
    FiniteAbelianGroup(invariant_factors=(3,))
    """
    rel = [list(map(int, r)) for r in relations]
    n = ngens if ngens is not None else (len(rel[0]) if rel else 0)
    if n == 0:
        return Presentation(TRIVIAL, [], [])
    if not rel:
        raise InputError("presentation has no relations: the group is free")
    M = transpose(rel)  # generators x relations: relations are columns
    snf = smith_normal_form(M)
    diag = snf.diagonal + [0] * (n - len(snf.diagonal))
    if any(d == 0 for d in diag):
        raise InputError("presentation has a free summand; expected a finite group "
                         "(is the input a knot?)")
    keep = [i for i, d in enumerate(diag) if d > 1]
    group = FiniteAbelianGroup(tuple(diag[i] for i in keep))
    U = snf.U
    Uinv = inverse_unimodular(U)
    old_to_new = [group.reduce([U[i][j] for i in keep]) for j in range(n)]
    new_to_old = [[Uinv[r][i] for r in range(n)] for i in keep]
    return Presentation(group, old_to_new, new_to_old)


def min_generators(G: FiniteAbelianGroup) -> int:
    return G.rank


def enumerate_elements(G: FiniteAbelianGroup) -> Iterator[GroupElement]:
    """Every element once, in lexicographic order. Subject to the enumeration cap."""
    check_cap(f"enumerating {G}", G.order)
    return itertools.product(*(range(d) for d in G.invariant_factors))


@dataclass(frozen=True)
class PrimaryComponent:
    """The p-primary part of a group with CRT maps to and from the ambient group.

    Generator ``i`` of the component is ``cofactor[i] * e_{index[i]}`` in the
    ambient group.
    """

    prime: int
    group: FiniteAbelianGroup
    ambient: FiniteAbelianGroup
    index: tuple[int, ...]
    cofactor: tuple[int, ...]
    inverse: tuple[int, ...]

    def to_ambient(self, v: Sequence[int]) -> GroupElement:
        out = [0] * self.ambient.rank
        for x, i, c in zip(v, self.index, self.cofactor):
            out[i] = x * c
        return self.ambient.reduce(out)

    def project(self, g: Sequence[int]) -> GroupElement:
        """The p-part of an ambient element, in component coordinates."""
        return self.group.reduce([g[i] * t for i, t in zip(self.index, self.inverse)])


def primary_decomposition(G: FiniteAbelianGroup) -> list[PrimaryComponent]:
    """p-primary components in increasing order of p.

    >>> [(c.prime, c.group.invariant_factors) for c in primary_decomposition(FiniteAbelianGroup((63,)))]
    [(3, (9,)), (7, (7,))]
    """
    if not G.invariant_factors:
        return []
    out = []
    for p in sorted(factorize(G.exponent)):
        idx, fac, cof, inv = [], [], [], []
        for i, d in enumerate(G.invariant_factors):
            if d % p:
                continue
            q = p ** valuation(d, p)
            c = d // q
            idx.append(i)
            fac.append(q)
            cof.append(c)
            inv.append(pow(c, -1, q))
        out.append(PrimaryComponent(p, FiniteAbelianGroup(tuple(fac)), G, tuple(idx),
                                    tuple(cof), tuple(inv)))
    return out
