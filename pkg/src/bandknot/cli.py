"""Command-line front end.

Exit codes: 0 success, 1 obstruction found or enumeration cap hit, 2 input
error, 3 a worked example did not reproduce.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .config import DEFAULT_CAP, cap_limit
from .diagram import goeritz_from_pd, linking_form_from_goeritz, parse_pd
from .errors import CapExceeded, InconsistentBounds, InputError
from .forms import LinkingForm
from .knots import double_cover_form, load_records, parse_expression
from .obstructions import bounds, family_section5_check, lickorish_test, to_json
from .reproduce import exit_status, run_paper_examples
from .witt import witt_decompose

EXIT_OK, EXIT_OBSTRUCTED, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2, 3


def _form_dict(F: LinkingForm) -> dict:
    return {"group": list(F.group.invariant_factors),
            "gram": [[str(x) for x in row] for row in F.gram]}


def _form_text(F: LinkingForm) -> str:
    lines = [f"group: {F.group}"]
    if F.group.rank:
        width = max(len(str(x)) for row in F.gram for x in row)
        lines.append("gram:")
        lines += ["  " + "  ".join(str(x).rjust(width) for x in row) for row in F.gram]
    return "\n".join(lines)


def _emit(args, data: dict, text: str) -> None:
    print(to_json(data) if args.json else text)


def _expr(args, records=None):
    return parse_expression(args.expression, records)


def cmd_form(args) -> int:
    records = load_records(args.records)
    E = _expr(args, records)
    F = double_cover_form(E, records)
    _emit(args, {"expression": str(E), **_form_dict(F)}, f"expression: {E}\n{_form_text(F)}")
    return EXIT_OK


def cmd_witt(args) -> int:
    records = load_records(args.records)
    E = _expr(args, records)
    F = double_cover_form(E, records)
    res = witt_decompose(F, method=args.method)
    steps = [{"prime": s.prime, "kind": s.kind, "removed_order": s.removed_order,
              "metabolizer": list(s.metabolizer.invariant_factors)} for s in res.split_log]
    text = [f"expression: {E}", f"form: {F}", f"anisotropic: {res.anisotropic}",
            f"mu_an = {res.mu_an}"]
    text += [f"  split p={s['prime']} {s['kind']}, removed order {s['removed_order']}"
             for s in steps]
    _emit(args, {"expression": str(E), "form": _form_dict(F),
                 "anisotropic": _form_dict(res.anisotropic), "mu_an": res.mu_an,
                 "split_log": steps}, "\n".join(text))
    return EXIT_OK


def cmd_obstruct(args) -> int:
    records = load_records(args.records)
    E = _expr(args, records)
    F = double_cover_form(E, records)
    r = lickorish_test(F)
    text = f"expression: {E}\nform: {F}\n{r.verdict.replace('_', ' ')} ({r.reason})"
    if r.witness is not None:
        text += f"\nwitness: x = {r.witness}, λ(x, x) = {'+' if r.sign > 0 else '-'}1/{r.det}"
    _emit(args, {"expression": str(E), **r.to_dict()}, text)
    return EXIT_OBSTRUCTED if r.obstructed else EXIT_OK


def cmd_bounds(args) -> int:
    records = load_records(args.records)
    E = _expr(args, records)
    b = bounds(E, records)
    lines = [f"expression: {b.expression}"]
    for rep in b.reports():
        lines.append(str(rep))
        for e in rep.provenance:
            lines.append(f"  {e.side:5} {e.value:>2}  {e.rule}  {e.to_dict()['citation']}")
    _emit(args, b.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_goeritz(args) -> int:
    pd = parse_pd(args.pd)
    G = goeritz_from_pd(pd)
    F = linking_form_from_goeritz(G)
    rows = "\n".join("  " + " ".join(f"{x:>3}" for x in r) for r in G.matrix)
    _emit(args, {"pd": str(pd), "matrix": [list(r) for r in G.matrix],
                 "determinant": abs(G.determinant), **_form_dict(F)},
          f"goeritz matrix:\n{rows}\n|det| = {abs(G.determinant)}\n{_form_text(F)}")
    return EXIT_OK


def cmd_family5(args) -> int:
    if args.a_max < 4:
        raise InputError(f"--a-max must be >= 4, got {args.a_max}")
    reports = [family_section5_check(a) for a in range(4, args.a_max + 1, 6)]
    lines = [f"{'a':>4} {'4a^2-1':>8}  {'lambda3':>12}  lickorish   congruence  agree"]
    for r in reports:
        lines.append(f"{r.a:>4} {4 * r.a * r.a - 1:>8}  {r.lambda3:>12}  "
                     f"{r.lickorish.verdict:<10}  {str(r.congruence_obstructed):<10}  {r.agree}")
    _emit(args, {"family": [r.to_dict() for r in reports]}, "\n".join(lines))
    return EXIT_OK if all(r.passed and r.agree for r in reports) else EXIT_MISMATCH


def cmd_paper_examples(args) -> int:
    results = run_paper_examples(load_records(args.records))
    status = exit_status(results)
    lines = [f"{r.status.upper():4}  {r.section:<20} {r.case:<14} {r.detail}" for r in results]
    counts = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "cap")}
    lines.append(f"{counts['pass']} passed, {counts['fail']} failed, {counts['cap']} cap exceeded")
    _emit(args, {"cases": [r.to_dict() for r in results], "exit": status}, "\n".join(lines))
    return status


def _cap(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--cap: not an integer: {text!r}") from None
    if v < 1000:
        raise argparse.ArgumentTypeError(f"--cap must be >= 1000, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit JSON instead of text")
    common.add_argument("--cap", type=_cap, default=argparse.SUPPRESS, metavar="N",
                        help=f"enumeration cap (>= 1000, default {DEFAULT_CAP})")
    common.add_argument("--records", default=argparse.SUPPRESS, metavar="PATH",
                        help="knot record table (default: the vendored table)")
    p = argparse.ArgumentParser(prog="bandknot", parents=[common],
                                description="Linking forms and band-unknotting bounds for knots.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_, arg=("expression", "knot expression, e.g. 'K(7/2) # m(r(K(9/2)))'")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if arg:
            sp.add_argument(arg[0], help=arg[1])
        sp.set_defaults(func=fn)
        return sp

    add("form", cmd_form, "linking form of the double branched cover")
    w = add("witt", cmd_witt, "Witt decomposition and mu_an")
    w.add_argument("--method", choices=("auto", "enumerate", "diagonal"), default="auto")
    add("obstruct", cmd_obstruct, "Lickorish obstruction to u_nb = 1")
    add("bounds", cmd_bounds, "certified intervals for u_nb and gamma_4")
    add("goeritz", cmd_goeritz, "Goeritz matrix of a PD code", ("pd", "PD code, e.g. 'X(1,4,2,5);...'"))
    f = add("family5", cmd_family5, "congruence family a ≡ 4 (mod 6)", None)
    f.add_argument("--a-max", type=int, default=58, metavar="N", help="largest a (default 58)")
    add("paper-examples", cmd_paper_examples, "re-run the worked examples", None)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.json = getattr(args, "json", False)
    args.records = getattr(args, "records", None)
    cap = getattr(args, "cap", None)
    try:
        with cap_limit(cap):
            return args.func(args)
    except InputError as exc:
        print(f"error: {exc.render()}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistentBounds as exc:
        print(f"error: inconsistent record data: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"cap exceeded: {exc} (raise it with --cap)", file=sys.stderr)
        return EXIT_OBSTRUCTED


def main_exit() -> None:
    sys.exit(main())
