"""Knot expressions: connected sums of prime leaves with mirror/reverse markers.

Grammar::

    expr    := summand ('#' summand)*
    summand := 'm(' expr ')' | 'r(' expr ')' | '(' expr ')' | leaf
    leaf    := 'K(' p '/' q ')' | 'C(' m ',' n ')' | 'pd{' PD text '}' | name

Mirror negates the double-cover linking form; reverse leaves it unchanged.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Iterable, Mapping

from .diagram import GoeritzMatrix, goeritz_from_pd, linking_form_from_goeritz, parse_pd
from .errors import InputError
from .forms import TRIVIAL_FORM, LinkingForm, direct_sum, from_cyclic, negate


# ---------------------------------------------------------------- tree

@dataclass(frozen=True)
class TwoBridge:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p < 1 or p % 2 == 0:
            raise InputError(f"two-bridge knot K({p}/{q}) needs an odd p >= 1")
        if p == 1:
            if q != 1:
                raise InputError("the unknot is written K(1/1)")
        elif not 0 < q < p or gcd(p, q) != 1:
            raise InputError(f"two-bridge knot K({p}/{q}) needs 0 < q < p and gcd(p, q) = 1")

    def key(self):
        if self.p == 1:
            return ("K", 1, 1)
        return ("K", self.p, min(self.q, pow(self.q, -1, self.p)))

    def __str__(self):
        return f"K({self.p}/{self.q})"


@dataclass(frozen=True)
class GoeritzLeaf:
    matrix: GoeritzMatrix
    pd_text: str = field(default="", compare=False)

    def key(self):
        return ("G", self.matrix.matrix)

    def __str__(self):
        return f"pd{{{self.pd_text}}}" if self.pd_text else f"goeritz{self.matrix.matrix}"


@dataclass(frozen=True)
class Named:
    name: str

    def key(self):
        return ("N", self.name)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Mirror:
    child: object

    def __str__(self):
        return f"m({self.child})"


@dataclass(frozen=True)
class Reverse:
    child: object

    def __str__(self):
        return f"r({self.child})"


@dataclass(frozen=True)
class Sum:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("a connected sum needs at least two summands")

    def __str__(self):
        return " # ".join(str(c) for c in self.children)


Leaf = (TwoBridge, GoeritzLeaf, Named)


def _wrap(leaf, mirror: bool, reverse: bool):
    node = Reverse(leaf) if reverse else leaf
    return Mirror(node) if mirror else node


def _unwrap(node):
    """``(leaf, mirror flag, reverse flag)`` of a normalized summand."""
    mirror = reverse = False
    if isinstance(node, Mirror):
        mirror, node = True, node.child
    if isinstance(node, Reverse):
        reverse, node = True, node.child
    return node, mirror, reverse


def normalize(node, mirror: bool = False, reverse: bool = False):
    """Cancel doubled markers, push markers onto leaves and flatten sums."""
    if isinstance(node, Mirror):
        return normalize(node.child, not mirror, reverse)
    if isinstance(node, Reverse):
        return normalize(node.child, mirror, not reverse)
    if isinstance(node, Sum):
        kids = []
        for c in node.children:
            n = normalize(c, mirror, reverse)
            kids.extend(n.children if isinstance(n, Sum) else [n])
        return Sum(tuple(kids))
    return _wrap(node, mirror, reverse)


def summands(E) -> tuple:
    return E.children if isinstance(E, Sum) else (E,)


def mirror_reverse(node):
    """``-K̄`` of a normalized summand."""
    leaf, m, r = _unwrap(node)
    return _wrap(leaf, not m, not r)


def _summand_key(node):
    leaf, m, r = _unwrap(node)
    return (leaf.key(), m, r)


# ---------------------------------------------------------------- parsing

_LEX = re.compile(r"\s*(?:(?P<num>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*|\d+_\d+[A-Za-z0-9_]*)"
                  r"|(?P<sym>[#()/,{}]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg, start=None, end=None):
        start = self.pos if start is None else start
        end = start + 1 if end is None else end
        raise InputError(msg, self.text, (start, min(max(end, start + 1), len(self.text) or 1)))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s):
        self.skip_ws()
        return self.text.startswith(s, self.pos)

    def expect(self, s):
        self.skip_ws()
        if not self.text.startswith(s, self.pos):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def integer(self):
        self.skip_ws()
        m = re.compile(r"-?\d+").match(self.text, self.pos)
        if not m:
            self.error("expected an integer")
        self.pos = m.end()
        return int(m.group()), m.start(), m.end()

    def word(self):
        self.skip_ws()
        m = re.compile(r"[A-Za-z0-9_]+").match(self.text, self.pos)
        if not m:
            self.error("expected a knot, 'm(...)', 'r(...)' or '(...)'")
        return m

    def parse(self):
        self.skip_ws()
        if self.pos >= len(self.text):
            self.error("empty expression", 0, max(1, len(self.text)))
        node = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing input", self.pos, len(self.text))
        return node

    def expr(self):
        kids = [self.summand()]
        while self.peek("#"):
            self.pos += 1
            kids.append(self.summand())
        return kids[0] if len(kids) == 1 else Sum(tuple(kids))

    def summand(self):
        self.skip_ws()
        if self.peek("("):
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        if self.peek("pd{"):
            start = self.pos
            end = self.text.find("}", self.pos)
            if end < 0:
                self.error("unterminated pd{...}", start, len(self.text))
            body = self.text[self.pos + 3:end]
            try:
                pd = parse_pd(body)
                gm = goeritz_from_pd(pd)
            except InputError as exc:
                raise InputError(f"in PD code: {exc.message}", self.text, (start, end + 1)) from None
            self.pos = end + 1
            return GoeritzLeaf(gm, str(pd))
        m = self.word()
        word = m.group()
        after = m.end()
        rest = self.text[after:].lstrip()
        if rest.startswith("(") and word in ("m", "r", "K", "C"):
            self.pos = after
            self.expect("(")
            if word in ("m", "r"):
                node = self.expr()
                self.expect(")")
                return Mirror(node) if word == "m" else Reverse(node)
            start = m.start()
            if word == "K":
                p, s0, _ = self.integer()
                self.expect("/")
                q, _, _ = self.integer()
                self.expect(")")
                try:
                    return TwoBridge(p, q)
                except InputError as exc:
                    raise InputError(exc.message, self.text, (start, self.pos)) from None
            a, _, _ = self.integer()
            self.expect(",")
            b, _, _ = self.integer()
            self.expect(")")
            try:
                return two_bridge_of_double_twist(a, b)
            except InputError as exc:
                raise InputError(exc.message, self.text, (start, self.pos)) from None
        self.pos = after
        return Named(word)


def parse_expression(text: str, records: "RecordTable | None" = None):
    """Parse and normalize; with ``records``, unknown names are rejected.

    >>> print(parse_expression("K(7/2) # m(r(K(9/2)))"))
    K(7/2) # m(r(K(9/2)))
    >>> print(parse_expression("m(m(K(3/1)))"))
    K(3/1)
    """
    node = normalize(_Parser(text).parse())
    if records is not None:
        for s in summands(node):
            leaf, _, _ = _unwrap(s)
            if isinstance(leaf, Named) and leaf.name not in records:
                i = text.find(leaf.name)
                raise InputError(f"unknown knot name {leaf.name!r}", text,
                                 (i, i + len(leaf.name)) if i >= 0 else None)
    return node


def two_bridge_of_double_twist(m: int, n: int) -> TwoBridge:
    """The double twist knot ``C(m, n)`` as ``K(|mn+1| / ±n mod |mn+1|)``.

    >>> two_bridge_of_double_twist(22, 62)
    TwoBridge(p=1365, q=62)
    """
    if m % 2 and n % 2:
        raise InputError(f"C({m},{n}) is not a knot: m and n are both odd")
    num = m * n + 1
    if num == 0:
        raise InputError(f"C({m},{n}) is degenerate: mn + 1 = 0")
    p = abs(num)
    if p == 1:
        return TwoBridge(1, 1)
    q = (n if num > 0 else -n) % p
    return TwoBridge(p, q)


# ---------------------------------------------------------------- records

RECORDS_VERSION = "1"
_INT_FIELDS = ("det", "bridge", "u", "g4s", "g4t", "fusion")


@dataclass(frozen=True)
class KnotInvariantRecord:
    name: str
    det: int | None = None
    bridge: int | None = None
    gordian_u: int | None = None
    gamma4s: int | None = None
    gamma4t: int | None = None
    fusion_of_k_minus_mirror: int | None = None
    mu_r: Mapping[int, int] = field(default_factory=dict)
    fraction: tuple[int, int] | None = None
    pd: str | None = None
    source: str = ""

    def __post_init__(self):
        for label, v in (("det", self.det), ("bridge", self.bridge), ("u", self.gordian_u),
                         ("g4s", self.gamma4s), ("g4t", self.gamma4t),
                         ("fusion", self.fusion_of_k_minus_mirror)):
            if v is not None and v < 0:
                raise InputError(f"record {self.name}: {label} must be non-negative")
        if self.det is not None and self.det % 2 == 0:
            raise InputError(f"record {self.name}: det must be odd")
        if self.det is not None and self.fraction is not None and self.det != self.fraction[0]:
            raise InputError(f"record {self.name}: det={self.det} disagrees with "
                             f"fraction {self.fraction[0]}/{self.fraction[1]}")
        if self.bridge is not None and self.bridge < 1:
            raise InputError(f"record {self.name}: bridge index must be >= 1")

    def leaf(self):
        """A leaf carrying this knot's double-cover data, if the record has one."""
        if self.fraction is not None:
            return TwoBridge(*self.fraction)
        if self.pd is not None:
            pd = parse_pd(self.pd)
            return GoeritzLeaf(goeritz_from_pd(pd), str(pd))
        return None

    def with_updates(self, **kw) -> "KnotInvariantRecord":
        data = {f: getattr(self, f) for f in self.__dataclass_fields__}
        data.update(kw)
        return KnotInvariantRecord(**data)


class RecordTable(Mapping):
    """Name -> record, plus lookup of two-bridge records by fraction class."""

    def __init__(self, records: Iterable[KnotInvariantRecord] = ()):
        self._by_name: dict[str, KnotInvariantRecord] = {}
        for r in records:
            if r.name in self._by_name:
                raise InputError(f"duplicate record {r.name!r}")
            self._by_name[r.name] = r

    def __getitem__(self, name):
        return self._by_name[name]

    def __iter__(self):
        return iter(self._by_name)

    def __len__(self):
        return len(self._by_name)

    def replace(self, record: KnotInvariantRecord) -> "RecordTable":
        recs = dict(self._by_name)
        recs[record.name] = record
        return RecordTable(recs.values())

    def for_two_bridge(self, leaf: TwoBridge) -> KnotInvariantRecord | None:
        """Record whose fraction names the same unoriented knot up to mirror image."""
        p, q = leaf.p, leaf.q
        if p == 1:
            return None
        classes = {q % p, (-q) % p, pow(q, -1, p), (-pow(q, -1, p)) % p}
        for r in self._by_name.values():
            if r.fraction and r.fraction[0] == p and r.fraction[1] % p in classes:
                return r
        return None

    def for_leaf(self, leaf) -> KnotInvariantRecord | None:
        if isinstance(leaf, Named):
            return self._by_name.get(leaf.name)
        if isinstance(leaf, TwoBridge):
            return self.for_two_bridge(leaf)
        return None


def _parse_fraction(s: str, where: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)/(\d+)", s)
    if not m:
        raise InputError(f"{where}: bad fraction {s!r}")
    return int(m.group(1)), int(m.group(2))


def parse_records(text: str, origin: str = "<records>") -> RecordTable:
    """Parse the record format: ``name key=value ...`` per line, ``#`` comments.

    The first non-blank line must be ``# bandknot-records v1``.
    """
    lines = text.splitlines()
    header = next((l.strip() for l in lines if l.strip()), "")
    if header != f"# bandknot-records v{RECORDS_VERSION}":
        raise InputError(f"{origin}: missing header '# bandknot-records v{RECORDS_VERSION}'")
    out = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{origin}:{lineno}"
        try:
            tokens = shlex.split(line, comments=True)
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from None
        name, kv = tokens[0], {}
        for tok in tokens[1:]:
            if "=" not in tok:
                raise InputError(f"{where}: expected key=value, got {tok!r}")
            k, v = tok.split("=", 1)
            kv[k] = v
        fields: dict = {"name": name, "mu_r": {}}
        for k, v in kv.items():
            if v in ("", "-"):
                continue
            if k in _INT_FIELDS:
                if not re.fullmatch(r"\d+", v):
                    raise InputError(f"{where}: {k} must be a non-negative integer, got {v!r}")
                target = {"u": "gordian_u", "g4s": "gamma4s", "g4t": "gamma4t",
                          "fusion": "fusion_of_k_minus_mirror"}.get(k, k)
                fields[target] = int(v)
            elif re.fullmatch(r"mu\d+", k):
                fields["mu_r"][int(k[2:])] = int(v)
            elif k == "fraction":
                fields["fraction"] = _parse_fraction(v, where)
            elif k == "pd":
                fields["pd"] = v
            elif k == "src":
                fields["source"] = v
            else:
                raise InputError(f"{where}: unknown field {k!r}")
        if not fields.get("source"):
            raise InputError(f"{where}: record {name!r} has no src= provenance")
        rec = KnotInvariantRecord(**fields)
        if rec.fraction is not None:
            TwoBridge(*rec.fraction)
        out.append(rec)
    return RecordTable(out)


def load_records(path: str | Path | None = None) -> RecordTable:
    """Load a record table; ``None`` loads the vendored table."""
    if path is None:
        text = resources.files("bandknot").joinpath("data/records.txt").read_text("utf-8")
        return parse_records(text, "records.txt")
    p = Path(path)
    try:
        text = p.read_text("utf-8")
    except OSError as exc:
        raise InputError(f"cannot read record table {p}: {exc.strerror}") from None
    return parse_records(text, str(p))


# ---------------------------------------------------------------- invariants

def _resolve_leaf(leaf, records: RecordTable | None):
    if isinstance(leaf, Named):
        rec = records.get(leaf.name) if records is not None else None
        if rec is None:
            raise InputError(f"unknown knot name {leaf.name!r}")
        inner = rec.leaf()
        if inner is None:
            raise InputError(f"knot {leaf.name!r} has no fraction or PD alias; "
                             f"its double cover cannot be computed")
        return inner
    return leaf


def _leaf_form(leaf) -> LinkingForm:
    if isinstance(leaf, TwoBridge):
        return TRIVIAL_FORM if leaf.p == 1 else from_cyclic(leaf.q, leaf.p)
    return linking_form_from_goeritz(leaf.matrix)


def double_cover_form(E, records: RecordTable | None = None) -> LinkingForm:
    """Linking form of the double branched cover of ``E``.

    >>> print(double_cover_form(parse_expression("K(7/2)")))
    <2/7> on Z/7
    """
    forms = []
    for s in summands(normalize(E)):
        leaf, mirror, _ = _unwrap(s)
        F = _leaf_form(_resolve_leaf(leaf, records))
        forms.append(negate(F) if mirror else F)
    return direct_sum(*forms)


def determinant(E, records: RecordTable | None = None) -> int:
    """Knot determinant: product over summands, from forms or recorded values."""
    total = 1
    for s in summands(normalize(E)):
        leaf, _, _ = _unwrap(s)
        if isinstance(leaf, Named):
            rec = records.get(leaf.name) if records is not None else None
            if rec is not None and rec.leaf() is None:
                if rec.det is None:
                    raise InputError(f"knot {leaf.name!r} has no determinant data")
                total *= rec.det
                continue
        total *= _leaf_form(_resolve_leaf(leaf, records)).order
    return total


def detect_k_minus_mirror_shape(E):
    """``J`` when ``E`` is ``J # -J̄`` up to the order of summands, else ``None``.

    Of each matched pair, the summand with fewer markers goes into ``J``.
    """
    kids = list(summands(normalize(E)))
    if len(kids) < 2 or len(kids) % 2:
        return None
    used = [False] * len(kids)
    keys = [_summand_key(k) for k in kids]
    chosen = []
    for i, k in enumerate(kids):
        if used[i]:
            continue
        want = _summand_key(mirror_reverse(k))
        j = next((j for j in range(i + 1, len(kids)) if not used[j] and keys[j] == want), None)
        if j is None:
            return None
        used[i] = used[j] = True
        a, b = kids[i], kids[j]
        na = sum(_unwrap(a)[1:])
        nb = sum(_unwrap(b)[1:])
        chosen.append(b if nb < na else a)
    return chosen[0] if len(chosen) == 1 else Sum(tuple(chosen))


def leaf_record(summand, records: RecordTable | None) -> KnotInvariantRecord | None:
    if records is None:
        return None
    leaf, _, _ = _unwrap(summand)
    return records.for_leaf(leaf)


def bridge_index(E, records: RecordTable | None = None) -> int | None:
    """``1 + Σ (br_i - 1)`` over summands; ``None`` when any summand lacks data."""
    total = 1
    for s in summands(normalize(E)):
        leaf, _, _ = _unwrap(s)
        br = None
        rec = leaf_record(s, records)
        if rec is not None and rec.bridge is not None:
            br = rec.bridge
        elif isinstance(leaf, TwoBridge):
            br = 1 if leaf.p == 1 else 2
        elif isinstance(leaf, Named) and rec is not None and rec.fraction is not None:
            br = 1 if rec.fraction[0] == 1 else 2
        if br is None:
            return None
        total += br - 1
    return total


def has_form(E, records: RecordTable | None) -> bool:
    try:
        for s in summands(normalize(E)):
            _resolve_leaf(_unwrap(s)[0], records)
    except InputError:
        return False
    return True
