import random

import pytest
from hypothesis import given, settings, strategies as st

from bandknot.diagram import (GoeritzMatrix, PdCode, checkerboard, faces, goeritz_from_pd,
                              linking_form_from_goeritz, parse_pd)
from bandknot.errors import InputError
from bandknot.forms import are_isometric, direct_sum, from_cyclic, is_nonsingular, negate
from bandknot.knots import TwoBridge, determinant

CORPUS = {
    "3_1": ("X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)", 3, TwoBridge(3, 1)),
    "4_1": ("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)", 5, TwoBridge(5, 2)),
    "5_2": ("X(1,5,2,4) X(3,9,4,8) X(5,1,6,10) X(7,3,8,2) X(9,7,10,6)", 7, TwoBridge(7, 2)),
    "6_1": ("X(1,7,2,6) X(3,10,4,11) X(5,3,6,2) X(7,1,8,12) X(9,4,10,5) X(11,9,12,8)", 9,
            TwoBridge(9, 2)),
}


def test_parse_trefoil():
    pd = parse_pd(CORPUS["3_1"][0])
    assert pd.n == 3 and pd.crossings[0] == (1, 4, 2, 5)


def test_parse_accepts_wrapper():
    assert parse_pd("pd{" + CORPUS["3_1"][0] + "}").n == 3


@pytest.mark.parametrize("text, fragment", [
    ("", "empty"),
    ("X(1,5,2,4) X(3,9,4,8) X(5,1,6,10) X(11,3,8,2) X(9,7,10,6)", "appears 1"),
    ("X(1,2,3)", "four"),
    ("Y(1,2,3,4)", "crossing token"),
    ("X(1,2,1,2) X(3,4,3,4)", "component"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(InputError) as exc:
        parse_pd(text)
    assert fragment in exc.value.message


def test_parse_error_has_span():
    with pytest.raises(InputError) as exc:
        parse_pd("X(1,4,2,5);X(3,6,4")
    assert exc.value.span == (11, 18)


@pytest.mark.parametrize("name", CORPUS)
def test_face_count_euler(name):
    pd = parse_pd(CORPUS[name][0])
    assert len(faces(pd).faces) == pd.n + 2


def test_kink_faces():
    assert len(faces(parse_pd("X(1,2,2,1)")).faces) == 3


def _assert_proper(pd, col):
    face_of = {c: i for i, f in enumerate(col.faces) for c in f}
    for ci in range(pd.n):
        colors = [col.color[face_of[(ci, i)]] for i in range(4)]
        assert colors[0] == colors[2] != colors[1] == colors[3]


@pytest.mark.parametrize("name, white", [("3_1", 2), ("4_1", 3)])
def test_checkerboard_counts(name, white):
    pd = parse_pd(CORPUS[name][0])
    col = checkerboard(faces(pd), pd)
    assert len(col.white()) == white
    _assert_proper(pd, col)


@pytest.mark.parametrize("name", CORPUS)
def test_goeritz_det_matches_two_bridge(name):
    text, det, leaf = CORPUS[name]
    G = goeritz_from_pd(parse_pd(text))
    assert abs(G.determinant) == det == determinant(leaf)


@pytest.mark.parametrize("name", CORPUS)
def test_goeritz_form_matches_two_bridge_up_to_mirror(name):
    text, det, leaf = CORPUS[name]
    F = linking_form_from_goeritz(goeritz_from_pd(parse_pd(text)))
    T = from_cyclic(leaf.q, leaf.p)
    assert is_nonsingular(F) and F.order == det
    assert are_isometric(F, T) or are_isometric(F, negate(T))


def test_goeritz_no_crossings_rejected():
    with pytest.raises(InputError):
        goeritz_from_pd(PdCode(()))


@pytest.mark.parametrize("matrix, want", [
    (((3,),), from_cyclic(1, 3)),
    (((7, 0), (0, 9)), direct_sum(from_cyclic(1, 7), from_cyclic(1, 9))),
    (((2, 1), (1, 2)), from_cyclic(2, 3)),
])
def test_linking_form_from_goeritz(matrix, want):
    F = linking_form_from_goeritz(GoeritzMatrix(matrix))
    assert are_isometric(F, want) or are_isometric(F, negate(want))


def test_singular_goeritz_rejected():
    with pytest.raises(InputError):
        linking_form_from_goeritz(GoeritzMatrix(((1, 1), (1, 1))))


def _relabel(pd, seed):
    rng = random.Random(seed)
    labels = list(range(1, 2 * pd.n + 1))
    perm = dict(zip(labels, rng.sample(labels, len(labels))))
    crossings = [tuple(perm[x] for x in c) for c in pd.crossings]
    rng.shuffle(crossings)
    return PdCode(tuple(crossings))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.integers(0, 2**32))
def test_goeritz_det_invariant_under_relabeling(name, seed):
    pd = parse_pd(CORPUS[name][0])
    pd2 = parse_pd(str(_relabel(pd, seed)))
    assert len(faces(pd2).faces) == pd2.n + 2
    col = checkerboard(faces(pd2), pd2)
    _assert_proper(pd2, col)
    assert abs(goeritz_from_pd(pd2).determinant) == CORPUS[name][1]
    assert is_nonsingular(linking_form_from_goeritz(goeritz_from_pd(pd2)))
