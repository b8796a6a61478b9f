"""Witt decomposition and the anisotropic rank ``mu_an``.

Two routes produce the anisotropic part of each primary component:

* ``enumerate``: find an isotropic element by exhaustive scan, split off a
  small nonsingular metabolic summand when one exists, otherwise pass to
  ``⟨g⟩^⊥/⟨g⟩``. Works for every prime, bounded by the enumeration cap.
* ``diagonal`` (odd primes only): diagonalize the form, drop even-exponent
  blocks, reduce odd-exponent blocks to exponent one, then cancel hyperbolic
  planes over ``F_p``. Its only scan is a square root mod ``p``.

Cyclic forms such as ``⟨1/27⟩`` are isotropic yet have no metabolic summand,
which is why the enumeration route needs the subquotient fallback.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .arith import RationalModOne, jacobi, sqrt_mod, valuation
from .config import check_cap
from .errors import SplitFailure
from .forms import (TRIVIAL_FORM, LinkingForm, diagonal_form, direct_sum, find_isotropic,
                    is_nonsingular, isotropic_elements, orthogonal_complement, primary_forms,
                    restrict, restrict_to_subgroup)
from .groups import (FiniteAbelianGroup, GroupElement, Subgroup, _lattice_basis,
                     subgroup_structure, subquotient)


@dataclass(frozen=True)
class WittStep:
    """One metabolic piece removed during decomposition.

    ``generators`` span the metabolizer, in the coordinates of the form being
    reduced at that step. ``removed_order`` is ``|K|**2`` for a metabolizer ``K``.
    """

    prime: int
    kind: str  # "summand" | "reduction" | "cyclic" | "hyperbolic"
    removed_order: int
    metabolizer: FiniteAbelianGroup
    generators: tuple[GroupElement, ...] = ()


@dataclass(frozen=True)
class WittResult:
    anisotropic: LinkingForm
    split_log: tuple[WittStep, ...] = field(default=())

    @property
    def mu_an(self) -> int:
        return self.anisotropic.group.rank


# ---------------------------------------------------------------- enumeration route

def _subgroup_order(G: FiniteAbelianGroup, gens) -> int:
    B = _lattice_basis(G, gens)
    diag = 1
    for i in range(G.rank):
        diag *= B[i][i]
    return G.order // diag


def _greedy_isotropic(F: LinkingForm) -> list[GroupElement]:
    """Generators of a maximal totally isotropic subgroup, built greedily."""
    G = F.group
    elements = list(itertools.product(*(range(d) for d in G.invariant_factors)))[1:]
    K: list[GroupElement] = []
    order = 1
    while True:
        for x in elements:
            if F.evaluate(x, x) or any(F.evaluate(x, k) for k in K):
                continue
            new = _subgroup_order(G, K + [x]) if G.rank else 1
            if new > order:
                K.append(x)
                order = new
                break
        else:
            return K


def _metabolizer(F: LinkingForm) -> list[GroupElement] | None:
    """A metabolizer of a nonsingular form, or ``None`` when it is not metabolic."""
    n = F.order
    r = int(round(n ** 0.5))
    if r * r != n:
        return None
    K = _greedy_isotropic(F)
    if _subgroup_order(F.group, K) == r:
        return K
    return None


def is_metabolic(F: LinkingForm) -> bool:
    """Whether some subgroup ``K`` of a nonsingular form satisfies ``K = K^⊥``.

    >>> from bandknot.forms import from_cyclic
    >>> is_metabolic(from_cyclic(2, 9)), is_metabolic(from_cyclic(2, 7))
    (True, False)
    """
    check_cap(f"metabolizer search in {F.group}", F.order)
    if not is_nonsingular(F):
        raise ValueError("is_metabolic expects a nonsingular form")
    return _metabolizer(F) is not None


def split_metabolic_summand(F: LinkingForm):
    """Split off the smallest nonsingular metabolic summand on at most two generators.

    Returns ``(M, metabolizer generators, form on M^⊥)`` or ``None`` when ``F``
    is anisotropic. Candidates are tried by increasing order, then by
    lexicographic generator pair. Raises :class:`SplitFailure` when ``F`` is
    isotropic but no such summand exists (``⟨1/27⟩`` is the smallest example).
    """
    G = F.group
    check_cap(f"metabolic summand search in {G}", F.order)
    if find_isotropic(F) is None:
        return None
    elements = list(itertools.product(*(range(d) for d in G.invariant_factors)))[1:]
    seen = {}
    for i, g in enumerate(elements):
        for h in [None] + elements[i + 1:]:
            gens = [g] if h is None else [g, h]
            key = tuple(map(tuple, _lattice_basis(G, gens)))
            if key in seen:
                continue
            order = _subgroup_order(G, gens)
            r = int(round(order ** 0.5))
            seen[key] = (order, gens) if r * r == order else None
    candidates = sorted((v for v in seen.values() if v is not None), key=lambda v: v[0])
    for order, gens in candidates:
        M = Subgroup(G, tuple(gens))
        FM, sq = restrict_to_subgroup(F, M)
        if not is_nonsingular(FM):
            continue
        K = _metabolizer(FM)
        if K is None:
            continue
        perp = orthogonal_complement(F, M)
        rest = restrict(F, subquotient(G, perp.generators))
        met = tuple(G.reduce([sum(c * b[r] for c, b in zip(k, sq.basis))
                              for r in range(G.rank)]) for k in K)
        return M, met, rest
    raise SplitFailure(f"isotropic form {F} has no nonsingular metabolic summand on "
                       f"two generators")


def _reduce_by(F: LinkingForm, g: GroupElement) -> LinkingForm:
    """The form on ``⟨g⟩^⊥ / ⟨g⟩`` for an isotropic ``g``."""
    perp = orthogonal_complement(F, Subgroup(F.group, (g,)))
    sq = subquotient(F.group, perp.generators, [g])
    return restrict(F, sq)


def _witt_enumerate(F: LinkingForm, p: int, rng: random.Random | None):
    cur = F
    log = []
    while cur.group.rank:
        if rng is None:
            g = find_isotropic(cur)
        else:
            iso = isotropic_elements(cur)
            g = rng.choice(iso) if iso else None
        if g is None:
            break
        if rng is None:
            try:
                M, met, rest = split_metabolic_summand(cur)
            except SplitFailure:
                pass
            else:
                K = subgroup_structure(Subgroup(cur.group, met))[0]
                log.append(WittStep(p, "summand", cur.order // rest.order, K, tuple(met)))
                cur = rest
                continue
        nxt = _reduce_by(cur, g)
        K = subgroup_structure(Subgroup(cur.group, (g,)))[0]
        log.append(WittStep(p, "reduction", cur.order // nxt.order, K, (g,)))
        cur = nxt
    return cur, log


# ---------------------------------------------------------------- diagonal route

def _pexp(x: RationalModOne, p: int) -> int:
    return valuation(x.denominator, p) if x.denominator > 1 else 0


def diagonalize(F: LinkingForm, p: int) -> list[tuple[GroupElement, int, int]]:
    """Orthogonal basis of a nonsingular form on a p-group, ``p`` odd.

    Returns ``(vector, m, u)`` triples: ``vector`` has order ``p**m`` and
    ``λ(vector, vector) = u / p**m`` with ``u`` a unit.
    """
    if p == 2:
        raise ValueError("2-primary forms need not diagonalize")
    G = F.group
    k = G.rank
    basis = [[tuple(int(i == j) for j in range(k)), valuation(d, p)]
             for i, d in enumerate(G.invariant_factors)]
    out = []
    while basis:
        vals = [[F.evaluate(a[0], b[0]) for b in basis] for a in basis]
        ords = [[_pexp(x, p) for x in row] for row in vals]
        m = max(max(row) for row in ords)
        if m == 0 or m < max(v for _, v in basis):
            raise ValueError(f"form {F} is singular")
        piv = next((i for i in range(len(basis)) if ords[i][i] == m), None)
        if piv is None:
            i, j = next((i, j) for i in range(len(basis)) for j in range(len(basis))
                        if ords[i][j] == m)
            basis[i][0] = G.add(basis[i][0], basis[j][0])
            piv = i
        e = basis.pop(piv)[0]
        q = p**m
        self_val = F.evaluate(e, e)
        u = self_val.numerator * (q // self_val.denominator) % q
        uinv = pow(u, -1, q)
        for b in basis:
            x = F.evaluate(b[0], e)
            a = x.numerator * (q // x.denominator)
            c = a * uinv % q
            if c:
                b[0] = G.add(b[0], G.scale(-c, e))
        out.append((e, m, u))
    return out


def _is_square_unit(x: int, p: int) -> bool:
    return jacobi(x % p, p) == 1


def _witt_diagonal(F: LinkingForm, p: int):
    G = F.group
    log: list[WittStep] = []
    level1: list[tuple[GroupElement, int]] = []
    for vec, m, u in diagonalize(F, p):
        if m % 2 == 0:
            gen = G.scale(p ** (m // 2), vec)
            log.append(WittStep(p, "cyclic", p**m, FiniteAbelianGroup((p ** (m // 2),)), (gen,)))
        else:
            if m > 1:
                gen = G.scale(p ** ((m + 1) // 2), vec)
                log.append(WittStep(p, "reduction", p ** (m - 1),
                                    FiniteAbelianGroup((p ** ((m - 1) // 2),)), (gen,)))
            level1.append((G.scale(p ** ((m - 1) // 2), vec), u % p))

    work = level1
    while len(work) >= 2:
        (v1, u1), (v2, u2) = work[0], work[1]
        t = (-u2 * pow(u1, -1, p)) % p
        if _is_square_unit(t, p):
            x = sqrt_mod(t, p)
            iso = G.add(G.scale(x, v1), v2)
            log.append(WittStep(p, "hyperbolic", p * p, FiniteAbelianGroup((p,)), (iso,)))
            work = work[2:]
            continue
        if len(work) == 2:
            break
        (v3, u3) = work[2]
        # isotropic (x, y, 1): u1 x^2 + u2 y^2 + u3 = 0
        inv2 = pow(u2, -1, p)
        for x in range(p):
            rhs = (-(u3 + u1 * x * x) * inv2) % p
            if rhs == 0 or _is_square_unit(rhs, p):
                y = sqrt_mod(rhs, p)
                break
        w = (x, y, 1)
        D = (u1, u2, u3)
        Dw = [D[i] * w[i] % p for i in range(3)]
        j = next(i for i in range(3) if Dw[i])
        De = [D[i] if i == j else 0 for i in range(3)]
        z = [(Dw[1] * De[2] - Dw[2] * De[1]) % p,
             (Dw[2] * De[0] - Dw[0] * De[2]) % p,
             (Dw[0] * De[1] - Dw[1] * De[0]) % p]
        uz = sum(D[i] * z[i] * z[i] for i in range(3)) % p
        vecs = (v1, v2, v3)
        iso = G.add(G.add(G.scale(x, v1), G.scale(y, v2)), v3)
        vz = G.zero()
        for c, v in zip(z, vecs):
            vz = G.add(vz, G.scale(c, v))
        log.append(WittStep(p, "hyperbolic", p * p, FiniteAbelianGroup((p,)), (iso,)))
        work = [(vz, uz)] + work[3:]
    aniso = diagonal_form([(u, p) for _, u in work])
    return aniso, log


# ---------------------------------------------------------------- public API

def witt_decompose(F: LinkingForm, *, method: str = "auto", rng: random.Random | None = None,
                   component_order: Sequence[int] | None = None) -> WittResult:
    """Anisotropic part of a nonsingular form, with a log of what was split off.

    ``method`` is ``"auto"`` (diagonal route for odd primes, enumeration for
    2), ``"enumerate"`` or ``"diagonal"``. ``rng`` randomizes the isotropic
    element chosen at each enumeration step; ``component_order`` permutes the
    order in which primary components are processed. Neither changes the
    anisotropic part up to isometry.
    """
    if method not in ("auto", "enumerate", "diagonal"):
        raise ValueError(f"unknown method {method!r}")
    comps = primary_forms(F)
    if component_order is not None:
        comps = [comps[i] for i in component_order]
    parts, log = [], []
    for comp, Fp in comps:
        p = comp.prime
        use_diag = method == "diagonal" or (method == "auto" and p != 2 and rng is None)
        if use_diag:
            aniso, steps = _witt_diagonal(Fp, p)
        else:
            aniso, steps = _witt_enumerate(Fp, p, rng)
        parts.append((p, aniso))
        log.extend(steps)
    parts.sort(key=lambda t: t[0])
    aniso = direct_sum(*(a for _, a in parts)) if parts else TRIVIAL_FORM
    return WittResult(aniso, tuple(log))


def mu_an(F: LinkingForm, **kwargs) -> int:
    """Minimal number of generators of the anisotropic part.

    >>> from bandknot.forms import from_cyclic, direct_sum
    >>> mu_an(from_cyclic(1, 3)), mu_an(direct_sum(from_cyclic(1, 3), from_cyclic(2, 3)))
    (1, 0)
    """
    return witt_decompose(F, **kwargs).mu_an
