"""PD codes, checkerboard colorings and Goeritz matrices.

PD convention: in ``X(a, b, c, d)`` the label ``a`` is the incoming under-strand
and ``b, c, d`` follow counterclockwise, so the under-strand runs ``a -> c``
and the over-strand joins ``b`` and ``d``.

Corner ``i`` of a crossing is the sector between positions ``i`` and ``i+1``.
Walking out of a crossing along position ``i+1`` keeps that corner on the
right; at the far end of the edge it continues into corner ``j`` of the next
crossing, where ``j`` is the position at which the edge arrives.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction

from .arith import determinant, inverse_rational
from .errors import InputError
from .forms import LinkingForm, from_generators

_TOKEN = re.compile(r"\s*X\s*\(\s*([^()]*?)\s*\)\s*")


@dataclass(frozen=True)
class PdCode:
    crossings: tuple[tuple[int, int, int, int], ...]

    @property
    def n(self) -> int:
        return len(self.crossings)

    def __str__(self) -> str:
        return ";".join("X(%d,%d,%d,%d)" % c for c in self.crossings)


def parse_pd(text: str) -> PdCode:
    """Parse ``X(a,b,c,d)`` tokens separated by ``;`` or whitespace.

    >>> parse_pd("X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)").n
    3
    """
    src = text
    stripped = text.strip()
    if stripped.startswith("pd{") and stripped.endswith("}"):
        stripped = stripped[3:-1]
    if not stripped.strip():
        raise InputError("empty diagram", src, (0, len(src)))
    crossings = []
    pos = 0
    offset = src.find(stripped) if stripped in src else 0
    while pos < len(stripped):
        while pos < len(stripped) and (stripped[pos].isspace() or stripped[pos] == ";"):
            pos += 1
        if pos >= len(stripped):
            break
        m = _TOKEN.match(stripped, pos)
        if not m:
            end = stripped.find(")", pos)
            end = len(stripped) if end < 0 else end + 1
            raise InputError("expected a crossing token X(a,b,c,d)", src,
                             (offset + pos, offset + end))
        parts = [s.strip() for s in m.group(1).split(",")]
        span = (offset + m.start(1), offset + m.end(1))
        if len(parts) != 4 or not all(p.isdigit() for p in parts):
            raise InputError("a crossing needs four positive integer labels", src, span)
        labels = tuple(int(p) for p in parts)
        if min(labels) < 1:
            raise InputError("edge labels must be >= 1", src, span)
        crossings.append(labels)
        pos = m.end()
    pd = PdCode(tuple(crossings))
    _validate(pd, src)
    return pd


def _validate(pd: PdCode, src: str | None = None) -> None:
    n = pd.n
    counts = Counter(x for c in pd.crossings for x in c)
    for label, k in sorted(counts.items()):
        if k != 2:
            raise InputError(f"edge label {label} appears {k} time(s), expected exactly 2", src)
    if set(counts) != set(range(1, 2 * n + 1)):
        raise InputError(f"edge labels must be exactly 1..{2 * n}", src)
    if _component_count(pd) != 1:
        raise InputError("diagram has more than one component; only knots are supported", src)


def _component_count(pd: PdCode) -> int:
    # strands pair position 0 with 2 and 1 with 3 at each crossing
    adj: dict[int, set[int]] = {}
    for a, b, c, d in pd.crossings:
        for x, y in ((a, c), (b, d)):
            adj.setdefault(x, set()).add(y)
            adj.setdefault(y, set()).add(x)
    seen: set[int] = set()
    comps = 0
    for start in adj:
        if start in seen:
            continue
        comps += 1
        stack = [start]
        while stack:
            e = stack.pop()
            if e in seen:
                continue
            seen.add(e)
            stack.extend(adj[e] - seen)
    return comps


@dataclass(frozen=True)
class CheckerboardColoring:
    """Faces as cyclic corner sequences ``(crossing, corner)``, with colors.

    ``color[i]`` is ``"white"``, ``"black"`` or ``None`` before coloring.
    """

    faces: tuple[tuple[tuple[int, int], ...], ...]
    color: tuple[str | None, ...]

    def white(self) -> list[int]:
        return [i for i, c in enumerate(self.color) if c == "white"]


def _occurrences(pd: PdCode) -> dict[int, list[tuple[int, int]]]:
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, c in enumerate(pd.crossings):
        for pos, e in enumerate(c):
            occ.setdefault(e, []).append((ci, pos))
    return occ


def faces(pd: PdCode) -> CheckerboardColoring:
    """Trace the faces of the planar diagram; there must be ``n + 2`` of them."""
    if pd.n == 0:
        raise InputError("diagram has no crossings")
    occ = _occurrences(pd)
    unused = {(ci, i) for ci in range(pd.n) for i in range(4)}
    out = []
    for start in sorted(unused):
        if start not in unused:
            continue
        face = []
        cur = start
        while cur in unused:
            unused.discard(cur)
            face.append(cur)
            ci, i = cur
            nxt_pos = (i + 1) % 4
            e = pd.crossings[ci][nxt_pos]
            a, b = occ[e]
            other = b if a == (ci, nxt_pos) else a
            cur = other
        if cur != start:
            raise InputError("corrupt PD code: face tracing did not close up")
        out.append(tuple(face))
    if len(out) != pd.n + 2:
        raise InputError(f"corrupt or non-planar PD code: {len(out)} faces for {pd.n} "
                         f"crossings, expected {pd.n + 2}")
    return CheckerboardColoring(tuple(out), (None,) * len(out))


def checkerboard(col: CheckerboardColoring, pd: PdCode) -> CheckerboardColoring:
    """Properly 2-color the faces; the smaller color class is white.

    Ties go to the class containing the face that borders the smallest edge label.
    """
    face_of = {corner: fi for fi, f in enumerate(col.faces) for corner in f}
    nf = len(col.faces)
    # the two faces on either side of an edge: corners (ci, pos) and (ci, pos-1)
    nbrs: list[set[int]] = [set() for _ in range(nf)]
    edge_faces: dict[int, set[int]] = {}
    for ci, c in enumerate(pd.crossings):
        for pos, e in enumerate(c):
            f1 = face_of[(ci, pos)]
            f2 = face_of[(ci, (pos - 1) % 4)]
            edge_faces.setdefault(e, set()).update((f1, f2))
            if f1 == f2:
                raise InputError("corrupt PD code: an edge has the same face on both sides")
            nbrs[f1].add(f2)
            nbrs[f2].add(f1)
    side = [-1] * nf
    for s in range(nf):
        if side[s] >= 0:
            continue
        side[s] = 0
        q = deque([s])
        while q:
            f = q.popleft()
            for g in nbrs[f]:
                if side[g] < 0:
                    side[g] = 1 - side[f]
                    q.append(g)
                elif side[g] == side[f]:
                    raise InputError("corrupt PD code: faces admit no checkerboard coloring")
    sizes = Counter(side)
    if sizes[0] != sizes[1]:
        white_side = 0 if sizes[0] < sizes[1] else 1
    else:
        # the two faces along the smallest edge differ in color; take the first-traced one
        white_side = side[min(edge_faces[min(edge_faces)])]
    color = tuple("white" if s == white_side else "black" for s in side)
    return CheckerboardColoring(col.faces, color)


@dataclass(frozen=True)
class GoeritzMatrix:
    matrix: tuple[tuple[int, ...], ...]

    @property
    def determinant(self) -> int:
        return determinant(self.matrix) if self.matrix else 1


def crossing_sign(corners_white: tuple[int, int]) -> int:
    """+1 when the white corners are 0 and 2 (flanking the incoming under-strand
    on its counterclockwise side), else -1."""
    return 1 if corners_white == (0, 2) else -1


def goeritz_matrix(pd: PdCode, col: CheckerboardColoring) -> GoeritzMatrix:
    """Goeritz matrix on the white regions, first white region deleted."""
    if pd.n == 0:
        raise InputError("diagram has no crossings")
    face_of = {corner: fi for fi, f in enumerate(col.faces) for corner in f}
    white = col.white()
    index = {f: i for i, f in enumerate(white)}
    w = len(white)
    full = [[0] * w for _ in range(w)]
    for ci in range(pd.n):
        wc = tuple(i for i in range(4) if col.color[face_of[(ci, i)]] == "white")
        if len(wc) != 2 or wc not in ((0, 2), (1, 3)):
            raise InputError(f"crossing {ci} does not have two opposite white corners")
        eta = crossing_sign(wc)
        a, b = index[face_of[(ci, wc[0])]], index[face_of[(ci, wc[1])]]
        if a != b:
            full[a][b] -= eta
            full[b][a] -= eta
    for i in range(w):
        full[i][i] = -sum(full[i][j] for j in range(w) if j != i)
    G = tuple(tuple(row[1:]) for row in full[1:])
    gm = GoeritzMatrix(G)
    if gm.determinant == 0:
        raise InputError("Goeritz matrix is singular: not a knot diagram or degenerate coloring")
    return gm


def goeritz_from_pd(pd: PdCode) -> GoeritzMatrix:
    return goeritz_matrix(pd, checkerboard(faces(pd), pd))


def linking_form_from_goeritz(G: GoeritzMatrix) -> LinkingForm:
    """The form on ``coker G`` given by ``G^{-1}`` mod 1.

    >>> print(linking_form_from_goeritz(GoeritzMatrix(((3,),))))
    <1/3> on Z/3
    """
    M = [list(r) for r in G.matrix]
    if not M:
        return from_generators([], [])
    try:
        inv = inverse_rational(M)
    except ZeroDivisionError:
        raise InputError("singular Goeritz matrix") from None
    gram = [[Fraction(x) for x in row] for row in inv]
    return from_generators(M, gram)
