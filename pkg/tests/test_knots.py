import pytest
from hypothesis import given, settings, strategies as st

from bandknot.errors import InputError
from bandknot.forms import are_isometric, direct_sum, from_cyclic, negate
from bandknot.knots import (GoeritzLeaf, Mirror, Named, RecordTable, Reverse, Sum, TwoBridge,
                            bridge_index, detect_k_minus_mirror_shape, determinant,
                            double_cover_form, load_records, normalize, parse_expression,
                            parse_records, two_bridge_of_double_twist)

RECORDS = load_records()


def test_parse_sign_pair():
    E = parse_expression("K(7/2) # m(r(K(9/2)))")
    assert E == Sum((TwoBridge(7, 2), Mirror(Reverse(TwoBridge(9, 2)))))


@pytest.mark.parametrize("text", ["K(4/2)", "K(7/0)", "K(7/7)", "K(9/3)", "K(7/2) #", "m(K(3/1)",
                                  "", "K(3/1) K(5/2)", "pd{X(1,2,3)}", "C(1,1)"])
def test_parse_errors(text):
    with pytest.raises(InputError):
        parse_expression(text)


def test_parse_error_span_points_at_leaf():
    with pytest.raises(InputError) as exc:
        parse_expression("K(3/1) # K(4/2)")
    assert exc.value.span == (9, 15)


def test_unknown_name_rejected_with_records():
    with pytest.raises(InputError) as exc:
        parse_expression("K(3/1) # foo", RECORDS)
    assert exc.value.span == (9, 12)


@pytest.mark.parametrize("text, want", [
    ("m(m(K(3/1)))", TwoBridge(3, 1)),
    ("r(m(K(3/1)))", Mirror(Reverse(TwoBridge(3, 1)))),
    ("m(K(3/1) # K(5/2))", Sum((Mirror(TwoBridge(3, 1)), Mirror(TwoBridge(5, 2))))),
    ("(K(3/1) # K(5/2)) # 4_1", Sum((TwoBridge(3, 1), TwoBridge(5, 2), Named("4_1")))),
])
def test_normalization(text, want):
    assert parse_expression(text) == want


def test_pd_leaf():
    E = parse_expression("pd{X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)}")
    assert isinstance(E, GoeritzLeaf) and determinant(E) == 3


@pytest.mark.parametrize("m, n, p, q", [(22, 62, 1365, 62), (2, 2, 5, 2), (-2, 3, 5, 2)])
def test_double_twist(m, n, p, q):
    leaf = two_bridge_of_double_twist(m, n)
    assert (leaf.p, leaf.q) == (p, q)
    assert determinant(leaf) == abs(m * n + 1)


def test_double_twist_both_odd():
    with pytest.raises(InputError):
        two_bridge_of_double_twist(1, 1)


@pytest.mark.parametrize("text, want", [
    ("K(7/2)", from_cyclic(2, 7)),
    ("K(7/2) # K(9/2)", from_cyclic(8, 63)),
    ("K(3/1) # m(r(K(3/1)))", direct_sum(from_cyclic(1, 3), from_cyclic(2, 3))),
])
def test_double_cover_form(text, want):
    assert are_isometric(double_cover_form(parse_expression(text)), want)


@pytest.mark.parametrize("text, det", [("K(7/2)", 7), ("K(7/2) # K(9/2)", 63), ("m(K(5/2))", 5),
                                       ("K(1/1)", 1), ("9_10", None)])
def test_determinant(text, det):
    E = parse_expression(text)
    if det is None:
        with pytest.raises(InputError):
            determinant(E, RECORDS)
    else:
        assert determinant(E) == det


@pytest.mark.parametrize("text, J", [
    ("K(5/2) # m(r(K(5/2)))", TwoBridge(5, 2)),
    ("K(5/2) # K(5/2)", None),
    ("m(r(K(7/2))) # K(7/2)", TwoBridge(7, 2)),
    ("K(5/2) # m(K(5/2))", None),
    ("K(3/1) # K(5/2) # m(r(K(5/2))) # m(r(K(3/1)))", Sum((TwoBridge(3, 1), TwoBridge(5, 2)))),
    ("K(7/4) # m(r(K(7/2)))", TwoBridge(7, 4)),
])
def test_shape_detection(text, J):
    assert detect_k_minus_mirror_shape(parse_expression(text)) == J


@pytest.mark.parametrize("text, br", [("K(7/2)", 2), ("K(7/2) # K(9/2)", 3), ("K(1/1)", 1),
                                      ("8_18 # 4_1", 4), ("pd{X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)}",
                                                          None)])
def test_bridge_index(text, br):
    assert bridge_index(parse_expression(text), RECORDS) == br


def test_bridge_index_missing_data():
    table = parse_records('# bandknot-records v1\nfoo det=3 src="test"\n')
    assert bridge_index(parse_expression("foo"), table) is None


def test_vendored_table():
    assert "4_1" in RECORDS and RECORDS["4_1"].gamma4s == 2
    assert RECORDS.for_two_bridge(TwoBridge(7, 2)).name == "5_2"
    assert RECORDS.for_two_bridge(TwoBridge(1365, 62)).gamma4s == 3
    assert all(r.source for r in RECORDS.values())


def test_vendored_fractions_agree_with_pd_aliases():
    for r in RECORDS.values():
        if r.fraction and r.pd:
            F = double_cover_form(TwoBridge(*r.fraction))
            G = double_cover_form(parse_expression("pd{" + r.pd + "}"))
            assert are_isometric(F, G), r.name
            if r.det is not None:
                assert r.det == F.order


def test_vendored_twist_knot_mirrors():
    # the mirror of 5_2 is K(7/2), the mirror of 6_1 is K(9/2)
    for name, leaf in (("5_2", "K(7/2)"), ("6_1", "K(9/2)")):
        assert are_isometric(double_cover_form(parse_expression(f"m({name})"), RECORDS),
                             double_cover_form(parse_expression(leaf)))


@pytest.mark.parametrize("text, fragment", [
    ("foo det=3", "header"),
    ('# bandknot-records v1\nfoo det=4 src="x"', "odd"),
    ('# bandknot-records v1\nfoo det=3', "provenance"),
    ('# bandknot-records v1\nfoo bogus=3 src="x"', "unknown field"),
    ('# bandknot-records v1\nfoo det=x src="x"', "integer"),
    ('# bandknot-records v1\nfoo src="x"\nfoo src="y"', "duplicate"),
    ('# bandknot-records v1\nfoo fraction=8/3 src="x"', "odd"),
])
def test_record_errors(text, fragment):
    with pytest.raises(InputError) as exc:
        parse_records(text)
    assert fragment in str(exc.value)


def test_record_mu_fields():
    t = parse_records('# bandknot-records v1\nfoo mu3=4 g4t=1 src="x"')
    assert t["foo"].mu_r == {3: 4} and t["foo"].gamma4t == 1


def test_load_records_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_records(tmp_path / "nope.txt")


leaves = st.sampled_from(["K(3/1)", "K(5/2)", "K(7/2)", "K(9/2)", "K(9/4)", "K(11/3)",
                          "K(1/1)", "pd{X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)}", "5_2", "4_1"])
exprs = st.recursive(leaves, lambda ch: st.one_of(
    ch.map(lambda e: f"m({e})"), ch.map(lambda e: f"r({e})"),
    st.tuples(ch, ch).map(lambda t: f"{t[0]} # {t[1]}")), max_leaves=4)


@settings(max_examples=80, deadline=None)
@given(exprs)
def test_determinant_odd_and_mirror_rules(text):
    E = parse_expression(text)
    d = determinant(E, RECORDS)
    assert d % 2 == 1
    F = double_cover_form(E, RECORDS)
    assert F.order == d
    assert double_cover_form(Mirror(E), RECORDS) == negate(F)
    assert double_cover_form(Reverse(E), RECORDS) == F
    assert normalize(normalize(E)) == normalize(E)


@settings(max_examples=40, deadline=None)
@given(st.lists(leaves, min_size=2, max_size=3), st.randoms())
def test_sum_reordering(parts, rnd):
    E1 = parse_expression(" # ".join(parts))
    shuffled = parts[:]
    rnd.shuffle(shuffled)
    E2 = parse_expression(" # ".join(shuffled))
    assert determinant(E1, RECORDS) == determinant(E2, RECORDS)
    F1, F2 = double_cover_form(E1, RECORDS), double_cover_form(E2, RECORDS)
    if F1.order <= 2000:
        assert are_isometric(F1, F2)


@settings(max_examples=40, deadline=None)
@given(exprs)
def test_shape_of_e_minus_mirror(text):
    E = normalize(parse_expression(text))
    S = parse_expression(f"({text}) # m(r({text}))")
    J = detect_k_minus_mirror_shape(S)
    assert J is not None
    assert determinant(J, RECORDS) == determinant(E, RECORDS)


def test_record_det_must_match_fraction():
    with pytest.raises(InputError, match="disagrees"):
        parse_records('# bandknot-records v1\nJ det=7 fraction=5/2 src="t"\n')
