"""Lickorish's obstruction, the a ≡ 4 (mod 6) congruence family and the bounds engine.

Rules used by :func:`bounds` (ids appear in every provenance entry):

R1  u_nb is subadditive under connected sum
R2  u_nb(K) <= u(K) + 1
R3  u_nb(K # -K̄) <= 2 F(K # -K̄) <= 2 (br(K) - 1)
R4  mu_an(K) <= gamma_4,t(K) <= gamma_4,s(K) <= u_nb(K)
R5  mu(K, r) / (r - 1) <= u_nb(K)
R6  u_nb(K) = 1 forces a cyclic H1(Σ2) with a generator of self-linking ±1/det
R7  gamma_4,s(K) <= u(K) + 1
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil
from typing import Any

from .arith import RationalModOne, is_square_mod, jacobi, sqrt_mod
from .config import check_cap
from .errors import InconsistentBounds, InputError
from .forms import LinkingForm, direct_sum, from_cyclic, is_nonsingular
from . import kernels
from .knots import (RecordTable, bridge_index, detect_k_minus_mirror_shape,
                    double_cover_form, has_form, leaf_record, normalize, summands)
from .witt import mu_an

CITATIONS = {
    "R1": "u_nb(K1 # K2) <= u_nb(K1) + u_nb(K2)",
    "R2": "u_nb(K) <= u(K) + 1",
    "R3": "u_nb(K # -K̄) <= 2 F(K # -K̄) <= 2 (br(K) - 1)",
    "R4": "mu_an(K) <= gamma_4,t(K) <= gamma_4,s(K) <= u_nb(K)",
    "R5": "mu(K, r) / (r - 1) <= u_nb(K)",
    "R6": "u_nb(K) = 1 => H1(Σ2(K)) cyclic with generator α, λ(α, α) = ±1/det K",
    "R7": "gamma_4,s(K) <= u(K) + 1",
}


# ---------------------------------------------------------------- Lickorish

@dataclass(frozen=True)
class ObstructionResult:
    verdict: str  # "obstructed" | "not_obstructed"
    reason: str  # "non-cyclic group" | "no ± square generator" | "witness found" | "trivial group"
    witness: int | None = None
    sign: int | None = None
    det: int = 1

    @property
    def obstructed(self) -> bool:
        return self.verdict == "obstructed"

    def to_dict(self) -> dict[str, Any]:
        return {"verdict": self.verdict, "reason": self.reason, "witness": self.witness,
                "sign": self.sign, "det": self.det}


def pm_square_solvable(c: int, n: int) -> tuple[bool, int | None]:
    """Whether ``x*x ≡ ±c (mod n)`` has a solution, and the first one found.

    A local (Jacobi-symbol) test rejects unsolvable cases without scanning;
    otherwise a capped exhaustive scan returns the smallest witness.

    >>> pm_square_solvable(8, 63), pm_square_solvable(2, 7), pm_square_solvable(0, 9)
    ((False, None), (True, 3), (True, 0))
    """
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got n={n}")
    if not (is_square_mod(c, n) or is_square_mod(-c, n)):
        return False, None
    check_cap(f"± square-root scan mod {n}", n)
    hit = kernels.pm_square_scan(c, n)
    if hit is None:  # the local test said solvable; a miss would be a bug
        raise AssertionError(f"local square test disagrees with scan for c={c}, n={n}")
    return True, hit[0]


def pm_square_bruteforce(c: int, n: int) -> bool:
    """Reference oracle: scan every residue."""
    c %= n
    return any((x * x - c) % n == 0 or (x * x + c) % n == 0 for x in range(n))


def _cyclic_value(F: LinkingForm) -> tuple[int, int]:
    d = F.group.order
    return F.int_gram[0][0] * d // F.modulus % d, d


def lickorish_test(F: LinkingForm, *, witness: bool = True) -> ObstructionResult:
    """Can some generator of ``H1`` have self-linking ``±1/det``?

    With ``witness=False`` a not-obstructed verdict skips the (capped) search
    for an explicit generator; the verdict itself never needs a scan.

    >>> lickorish_test(from_cyclic(2, 5)).verdict
    'obstructed'
    >>> r = lickorish_test(from_cyclic(1, 3)); (r.verdict, r.witness)
    ('not_obstructed', 1)
    """
    if not is_nonsingular(F):
        raise InputError("Lickorish test needs a nonsingular form")
    d = F.order
    if d == 1:
        return ObstructionResult("not_obstructed", "trivial group", 0, 1, 1)
    if not F.group.is_cyclic():
        return ObstructionResult("obstructed", "non-cyclic group", det=d)
    q, _ = _cyclic_value(F)
    c = pow(q, -1, d)
    if not (is_square_mod(c, d) or is_square_mod(-c, d)):
        return ObstructionResult("obstructed", "no ± square generator", det=d)
    if not witness:
        return ObstructionResult("not_obstructed", "witness found", det=d)
    _, x = pm_square_solvable(c, d)
    sign = 1 if (q * x * x - 1) % d == 0 else -1
    return ObstructionResult("not_obstructed", "witness found", x, sign, d)


def verify_witness(F: LinkingForm, result: ObstructionResult) -> bool:
    """Re-check ``λ(x·1, x·1) = ±1/d`` exactly."""
    if result.obstructed or result.witness is None:
        return False
    d = F.order
    if d == 1:
        return True
    val = F.quad((result.witness,))
    return val in (RationalModOne.of(1, d), RationalModOne.of(-1, d))


# ---------------------------------------------------------------- congruence family

def cyclic_isometric(u: int, v: int, n: int) -> bool:
    """``⟨u/n⟩ ≅ ⟨v/n⟩`` for odd ``n``: ``u/v`` must be a square unit."""
    if n % 2 == 0:
        raise ValueError("cyclic_isometric needs odd n")
    return is_square_mod(u * pow(v, -1, n), n)


@dataclass(frozen=True)
class Section5Report:
    a: int
    k: int
    group: tuple[int, ...]
    lambda3: str
    expected_lambda3: str
    lambda3_matches: bool
    lickorish: ObstructionResult
    case_i: bool
    case_ii: bool
    residue_check: bool
    congruence_obstructed: bool

    @property
    def group_ok(self) -> bool:
        return self.group == (4 * self.a * self.a - 1,)

    @property
    def agree(self) -> bool:
        return self.lickorish.obstructed == self.congruence_obstructed

    @property
    def passed(self) -> bool:
        return (self.group_ok and self.lambda3_matches and self.residue_check
                and self.lickorish.obstructed and self.congruence_obstructed)

    def to_dict(self) -> dict[str, Any]:
        return {"a": self.a, "k": self.k, "group": list(self.group), "lambda3": self.lambda3,
                "expected_lambda3": self.expected_lambda3,
                "lambda3_matches": self.lambda3_matches,
                "lickorish": self.lickorish.to_dict(), "case_i": self.case_i,
                "case_ii": self.case_ii, "residue_check": self.residue_check,
                "congruence_obstructed": self.congruence_obstructed, "agree": self.agree,
                "passed": self.passed}


def family_section5_check(a: int) -> Section5Report:
    """``⟨2/(2a-1)⟩ ⊕ ⟨2/(2a+1)⟩`` for ``a ≡ 4 (mod 6)``, by two independent routes.

    Route one is :func:`lickorish_test` on the summed form. Route two reduces
    ``2a ≡ ±x²`` modulo each factor: mod ``2a+1`` the ``+`` case needs a square
    root of -1 mod 3, mod ``2a-1`` the ``-`` case needs ``(-1 / 2a-1) = 1``.
    """
    if a < 4 or a % 6 != 4:
        raise InputError(f"parameter a={a} must satisfy a >= 4 and a ≡ 4 (mod 6)")
    n1, n2 = 2 * a - 1, 2 * a + 1
    F = direct_sum(from_cyclic(2, n1), from_cyclic(2, n2))
    n = n1 * n2
    group = F.group.invariant_factors
    lam = f"{_cyclic_value(F)[0]}/{n}" if group == (n,) else "-"
    matches = group == (n,) and cyclic_isometric(_cyclic_value(F)[0], 2 * a, n)
    lick = lickorish_test(F, witness=False)
    case_i = n2 % 3 == 0 and sqrt_mod(-1, 3) is None
    case_ii = jacobi(-1, n1) == -1
    # 2a ≡ -1 mod (2a+1) and 2a ≡ 1 mod (2a-1), and 2a-1 ≡ 7 mod 12
    residue_check = (2 * a) % n2 == n2 - 1 and (2 * a) % n1 == 1 and n1 % 12 == 7
    return Section5Report(a, (a - 4) // 6, group, lam, f"{2 * a}/{n}", matches, lick,
                          case_i, case_ii, residue_check, case_i and case_ii)


# ---------------------------------------------------------------- bounds

@dataclass(frozen=True)
class BoundEntry:
    rule: str
    side: str  # "lower" | "upper"
    value: int
    inputs: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        inputs = {"bound": self.side, "value": self.value}
        inputs.update(self.inputs)
        return {"rule": self.rule, "citation": CITATIONS[self.rule], "inputs": inputs}


@dataclass(frozen=True)
class BoundReport:
    quantity: str  # "u_nb" | "gamma4s" | "gamma4t"
    lower: int
    upper: int | None
    provenance: tuple[BoundEntry, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"quantity": self.quantity, "lower": self.lower, "upper": self.upper,
                "provenance": [e.to_dict() for e in self.provenance]}

    def __str__(self) -> str:
        hi = "inf)" if self.upper is None else f"{self.upper}]"
        return f"{self.quantity} in [{self.lower}, {hi}"


@dataclass(frozen=True)
class BoundsAnalysis:
    expression: str
    u_nb: BoundReport
    gamma4s: BoundReport
    gamma4t: BoundReport

    def reports(self) -> tuple[BoundReport, ...]:
        return (self.u_nb, self.gamma4s, self.gamma4t)

    def to_dict(self) -> dict[str, Any]:
        return {"expression": self.expression,
                "reports": [r.to_dict() for r in self.reports()]}


def _finish(quantity: str, entries: list[BoundEntry]) -> BoundReport:
    lows = [e for e in entries if e.side == "lower"]
    ups = [e for e in entries if e.side == "upper"]
    lower = max([0] + [e.value for e in lows])
    upper = min(e.value for e in ups) if ups else None
    if upper is not None and lower > upper:
        lo = max(lows, key=lambda e: e.value)
        hi = min(ups, key=lambda e: e.value)
        raise InconsistentBounds(f"{quantity}: lower bound {lower} from {lo.rule} exceeds "
                                 f"upper bound {upper} from {hi.rule}")
    return BoundReport(quantity, lower, upper, tuple(entries))


def _single_record(E, records):
    kids = summands(E)
    return leaf_record(kids[0], records) if len(kids) == 1 else None


def _unb_upper_entries(E, records) -> list[BoundEntry]:
    out = []
    kids = summands(E)
    rec = _single_record(E, records)
    if rec is not None and rec.gordian_u is not None:
        out.append(BoundEntry("R2", "upper", rec.gordian_u + 1, {"knot": rec.name,
                                                               "u": rec.gordian_u}))
    J = detect_k_minus_mirror_shape(E)
    if J is not None:
        jrec = _single_record(J, records)
        if jrec is not None and jrec.fusion_of_k_minus_mirror is not None:
            f = jrec.fusion_of_k_minus_mirror
            out.append(BoundEntry("R3", "upper", 2 * f, {"J": str(J), "F": f}))
        br = bridge_index(J, records)
        if br is not None:
            out.append(BoundEntry("R3", "upper", 2 * (br - 1), {"J": str(J), "br": br}))
    if len(kids) > 1:
        parts = []
        for k in kids:
            ub = [e.value for e in _unb_upper_entries(k, records)]
            if not ub:
                parts = None
                break
            parts.append(min(ub))
        if parts is not None:
            out.append(BoundEntry("R1", "upper", sum(parts),
                                  {"summands": [str(k) for k in kids], "upper": parts}))
    return out


def bounds(E, records: RecordTable | None = None) -> BoundsAnalysis:
    """Certified intervals for u_nb, gamma_4,s and gamma_4,t of an expression.

    Every applicable rule contributes; the interval is (max lower, min upper).
    A summand without a computable double cover simply disables the
    form-based rules.
    """
    E = normalize(E)
    rec = _single_record(E, records)
    form_lo: list[BoundEntry] = []
    mu_an_entry = None
    if has_form(E, records):
        F = double_cover_form(E, records)
        d = F.order
        form_lo.append(BoundEntry("R5", "lower", F.group.rank,
                                  {"r": 2, "mu": F.group.rank, "group": str(F.group)}))
        m = mu_an(F)
        mu_an_entry = BoundEntry("R4", "lower", m, {"mu_an": m})
        form_lo.append(mu_an_entry)
        if d > 1:
            lt = lickorish_test(F, witness=False)
            if lt.obstructed:
                form_lo.append(BoundEntry("R6", "lower", 2, {"det": d, "reason": lt.reason}))
    data_lo: list[BoundEntry] = []
    if rec is not None:
        if rec.gamma4s is not None:
            data_lo.append(BoundEntry("R4", "lower", rec.gamma4s,
                                      {"knot": rec.name, "gamma4s": rec.gamma4s}))
        if rec.gamma4t is not None:
            data_lo.append(BoundEntry("R4", "lower", rec.gamma4t,
                                      {"knot": rec.name, "gamma4t": rec.gamma4t}))
        for r, mu in sorted(rec.mu_r.items()):
            if r >= 2:
                data_lo.append(BoundEntry("R5", "lower", ceil(mu / (r - 1)),
                                          {"knot": rec.name, "r": r, "mu": mu}))
    unb = _finish("u_nb", form_lo + data_lo + _unb_upper_entries(E, records))

    g4s: list[BoundEntry] = []
    g4t: list[BoundEntry] = []
    if mu_an_entry is not None:
        g4s.append(mu_an_entry)
        g4t.append(mu_an_entry)
    if rec is not None:
        if rec.gamma4s is not None:
            v = rec.gamma4s
            g4s += [BoundEntry("R4", "lower", v, {"knot": rec.name, "gamma4s": v}),
                    BoundEntry("R4", "upper", v, {"knot": rec.name, "gamma4s": v})]
            g4t.append(BoundEntry("R4", "upper", v, {"knot": rec.name, "gamma4s": v}))
        if rec.gamma4t is not None:
            v = rec.gamma4t
            g4t += [BoundEntry("R4", "lower", v, {"knot": rec.name, "gamma4t": v}),
                    BoundEntry("R4", "upper", v, {"knot": rec.name, "gamma4t": v})]
            g4s.append(BoundEntry("R4", "lower", v, {"knot": rec.name, "gamma4t": v}))
        if rec.gordian_u is not None:
            v = rec.gordian_u + 1
            g4s.append(BoundEntry("R7", "upper", v, {"knot": rec.name, "u": rec.gordian_u}))
            g4t.append(BoundEntry("R7", "upper", v, {"knot": rec.name, "u": rec.gordian_u}))
    if unb.upper is not None:
        g4s.append(BoundEntry("R4", "upper", unb.upper, {"u_nb_upper": unb.upper}))
    gs = _finish("gamma4s", g4s)
    if gs.upper is not None:
        g4t.append(BoundEntry("R4", "upper", gs.upper, {"gamma4s_upper": gs.upper}))
    gt = _finish("gamma4t", g4t)
    if gt.lower > unb.lower:
        # gamma_4,t <= u_nb: propagate a stronger lower bound found on the genus side
        unb = _finish("u_nb", list(unb.provenance)
                      + [BoundEntry("R4", "lower", gt.lower, {"gamma4t_lower": gt.lower})])
    return BoundsAnalysis(str(E), unb, gs, gt)


def to_json(obj) -> str:
    """Deterministic JSON for reports (ASCII only, fixed key order)."""
    data = obj.to_dict() if hasattr(obj, "to_dict") else obj
    return json.dumps(data, indent=2, ensure_ascii=True)
