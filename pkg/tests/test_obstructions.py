import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from bandknot.config import cap_limit
from bandknot.errors import CapExceeded, InconsistentBounds, InputError
from bandknot.forms import LinkingForm, direct_sum, from_cyclic, negate
from bandknot.groups import FiniteAbelianGroup
from bandknot.arith import RationalModOne
from bandknot.knots import load_records, parse_expression, parse_records
from bandknot.obstructions import (bounds, cyclic_isometric, family_section5_check,
                                   lickorish_test, pm_square_bruteforce, pm_square_solvable,
                                   to_json, verify_witness)

from conftest import cyclic_forms, forms

RECORDS = load_records()


@pytest.mark.parametrize("F, verdict, witness", [
    (from_cyclic(1, 3), "not_obstructed", 1),
    (from_cyclic(2, 5), "obstructed", None),
    (from_cyclic(8, 63), "obstructed", None),
    (direct_sum(from_cyclic(1, 3), from_cyclic(1, 3)), "obstructed", None),
])
def test_lickorish_examples(F, verdict, witness):
    r = lickorish_test(F)
    assert r.verdict == verdict and r.witness == witness


def test_lickorish_reasons():
    assert lickorish_test(direct_sum(from_cyclic(1, 3), from_cyclic(1, 3))).reason == \
        "non-cyclic group"
    assert lickorish_test(from_cyclic(2, 5)).reason == "no ± square generator"
    assert lickorish_test(from_cyclic(1, 3)).reason == "witness found"


def test_lickorish_rejects_singular():
    with pytest.raises(InputError):
        lickorish_test(LinkingForm(FiniteAbelianGroup((3,)), ((RationalModOne.of(0),),)))


def test_lickorish_exhaustive_over_units():
    # ⟨2/5⟩: 2x² ≢ ±1 (mod 5) for x = 1..4
    assert all((2 * x * x) % 5 not in (1, 4) for x in range(1, 5))
    assert lickorish_test(from_cyclic(2, 5)).obstructed


def test_lickorish_witness_scan_is_capped():
    F = from_cyclic(1, 1009)
    assert lickorish_test(F, witness=False).verdict == "not_obstructed"
    with cap_limit(1000):
        with pytest.raises(CapExceeded):
            lickorish_test(F)


@pytest.mark.parametrize("c, n, want", [(8, 63, (False, None)), (2, 7, (True, 3)),
                                        (0, 9, (True, 0))])
def test_pm_square_examples(c, n, want):
    assert pm_square_solvable(c, n) == want


def _grid(limit):
    for n in range(2, limit + 1):
        squares = bytearray(n)
        for x in range(n):
            squares[x * x % n] = 1
        for c in range(n):
            want = bool(squares[c] or squares[-c % n])
            got, x = pm_square_solvable(c, n)
            assert got == want, (c, n)
            if got:
                assert (x * x - c) % n == 0 or (x * x + c) % n == 0


def test_pm_square_fast_path_grid():
    _grid(2000)


@pytest.mark.slow
def test_pm_square_fast_path_grid_full():
    _grid(10**4)


@given(st.integers(0, 3000), st.integers(2, 3000))
def test_pm_square_matches_bruteforce(c, n):
    assert pm_square_solvable(c, n)[0] == pm_square_bruteforce(c, n)


@settings(max_examples=100, deadline=None)
@given(forms(max_order=2000))
def test_lickorish_witness_reverifies(F):
    r = lickorish_test(F)
    if not r.obstructed:
        assert verify_witness(F, r)
    assert lickorish_test(negate(F)).verdict == r.verdict


@settings(max_examples=100, deadline=None)
@given(cyclic_forms(max_order=999))
def test_lickorish_matches_direct_scan(F):
    d = F.order
    q = F.gram[0][0].numerator * (d // F.gram[0][0].denominator)
    direct = any((q * x * x - 1) % d == 0 or (q * x * x + 1) % d == 0
                 for x in range(1, d) if math.gcd(x, d) == 1)
    assert lickorish_test(F).obstructed is (not direct)


@pytest.mark.parametrize("a", [4, 10])
def test_congruence_family_examples(a):
    r = family_section5_check(a)
    assert r.lickorish.obstructed and r.congruence_obstructed and r.agree and r.passed
    assert r.group == (4 * a * a - 1,)


def test_congruence_family_a4_value():
    r = family_section5_check(4)
    assert r.expected_lambda3 == "8/63" and r.lambda3_matches


@pytest.mark.parametrize("a", [5, 2, 3, 7])
def test_congruence_family_precondition(a):
    with pytest.raises(InputError):
        family_section5_check(a)


def test_congruence_family_routes_agree_k_le_20():
    for k in range(21):
        r = family_section5_check(4 + 6 * k)
        assert r.agree and r.passed


def test_cyclic_isometric():
    assert cyclic_isometric(32, 8, 63)
    assert not cyclic_isometric(1, 2, 3)


# ---------------------------------------------------------------- bounds

def _b(text, records=RECORDS):
    return bounds(parse_expression(text), records)


def test_bounds_sign_pair_without_u():
    b = _b("K(7/2) # K(9/2)", None)
    assert (b.u_nb.lower, b.u_nb.upper) == (2, None)
    assert any(e.rule == "R6" and e.value == 2 for e in b.u_nb.provenance)


def test_bounds_sign_pair_with_u():
    b = _b("K(7/2) # K(9/2)")
    assert (b.u_nb.lower, b.u_nb.upper) == (2, 4)
    assert any(e.rule == "R1" and e.value == 4 for e in b.u_nb.provenance)


def test_bounds_figure_eight_sum():
    b = _b("K(5/2) # m(r(K(5/2)))")
    assert (b.u_nb.lower, b.u_nb.upper) == (2, 2)
    r6 = [e for e in b.u_nb.provenance if e.rule == "R6"]
    assert r6 and r6[0].inputs["reason"] == "non-cyclic group"
    assert any(e.rule == "R3" and e.inputs.get("br") == 2 for e in b.u_nb.provenance)


def test_bounds_double_twist():
    s = _b("C(22,62) # m(r(C(22,62)))")
    assert (s.u_nb.lower, s.u_nb.upper) == (2, 2)
    leaf = _b("C(22,62)")
    assert leaf.u_nb.lower == 3 and leaf.u_nb.upper is None


def test_bounds_sign_pair_not_obstructed():
    b = _b("K(7/2) # m(r(K(9/2)))")
    assert b.u_nb.lower == 1


def test_bounds_mu_an_and_trefoil():
    b = _b("K(3/1)", None)
    assert b.u_nb.lower == 1 and b.gamma4t.lower == 1


def test_bounds_fusion_and_mu_r_data():
    t = parse_records('# bandknot-records v1\n'
                      'J fraction=5/2 bridge=3 fusion=1 mu3=6 src="test"\n')
    b = bounds(parse_expression("J # m(r(J))"), t)
    assert b.u_nb.upper == 2 and any(e.inputs.get("F") == 1 for e in b.u_nb.provenance)
    leaf = bounds(parse_expression("J"), t)
    assert any(e.rule == "R5" and e.value == 3 for e in leaf.u_nb.provenance)
    assert leaf.u_nb.lower == 3


def test_bounds_inconsistent_data_names_rules():
    t = parse_records('# bandknot-records v1\nJ fraction=5/2 u=0 src="test"\n')
    with pytest.raises(InconsistentBounds) as exc:
        bounds(parse_expression("J"), t)
    assert "R6" in str(exc.value) and "R2" in str(exc.value)


def test_bounds_without_form_uses_data_only():
    b = _b("10_37")
    assert b.u_nb.lower == 2 and b.gamma4s.lower == b.gamma4s.upper == 2


def test_bounds_json_schema_and_determinism():
    text = to_json(_b("K(5/2) # m(r(K(5/2)))"))
    assert text == to_json(_b("K(5/2) # m(r(K(5/2)))"))
    data = json.loads(text)
    for rep in data["reports"]:
        assert set(rep) == {"quantity", "lower", "upper", "provenance"}
        for e in rep["provenance"]:
            assert set(e) == {"rule", "citation", "inputs"}
            assert e["rule"] in {f"R{i}" for i in range(1, 8)}
            assert e["citation"]


def _widths(b):
    return [(r.lower, r.upper) for r in b.reports()]


def _within(narrow, wide):
    for (l1, u1), (l2, u2) in zip(narrow, wide):
        assert l1 >= l2
        if u2 is not None:
            assert u1 is not None and u1 <= u2


FIELDS = ["u=1", "g4s=2", "g4t=2", "bridge=2", "fusion=1", "mu3=4"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["5/2", "7/2", "9/2", "13/5"]), st.lists(st.sampled_from(FIELDS),
                                                               unique=True),
       st.lists(st.sampled_from(FIELDS), unique=True),
       st.sampled_from(["J", "J # m(r(J))", "J # K(3/1)", "m(J)"]))
def test_bounds_monotone_in_data(frac, base, extra, expr):
    def table(fields):
        return parse_records(f'# bandknot-records v1\nJ fraction={frac} {" ".join(fields)} '
                             f'src="test"\n3_1 fraction=3/1 src="test"\n')
    try:
        small = bounds(parse_expression(expr), table(base))
        big = bounds(parse_expression(expr), table(sorted(set(base) | set(extra))))
    except InconsistentBounds:
        return
    _within(_widths(big), _widths(small))


def test_strict_subadditivity_for_table():
    for name, rec in RECORDS.items():
        if rec.gamma4s == 2 and rec.bridge == 2:
            s = _b(f"{name} # m(r({name}))")
            assert s.u_nb.upper == 2
            assert _b(name).u_nb.lower + _b(f"m(r({name}))").u_nb.lower == 4
