"""Command line front end.

Exit codes: 0 success, 1 the input is well formed but a hypothesis or
precondition fails, 2 the input cannot be read.
"""

from __future__ import annotations

import argparse
import sys

from .automorphisms import (AutomorphismError, apply, check_edge_relation, check_vertex_relation,
                            compose, describe, parse_autospec, rho_restriction, twist,
                            vertex_maps_equal_up_to_inner)
from .graph import GogSyntaxError, NotJSJShaped, parse_graph, validate
from .lattice import HypothesisError, NonAbelianBlock, build_j_matrix, check_hypotheses
from .presentation import (YES, center, centralizer_of_edge_image, fundamental_presentation, vertex_center,
                           words_equal)
from .report import structure_report
from .words import format_word, parse_word

OK, REFUSED, BAD_INPUT = 0, 1, 2


def _load(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_graph(text)
    except GogSyntaxError as exc:
        where = ":".join(str(x) for x in (path, exc.line, exc.column) if x is not None)
        raise ValueError(f"{where}: {exc.message}") from exc


def cmd_validate(args, out):
    rep = validate(_load(args.file))
    out.write(str(rep) + "\n")
    return OK if rep.ok else REFUSED


def cmd_present(args, out):
    g = _load(args.file)
    p = fundamental_presentation(g)
    out.write(f"subtree: {', '.join(sorted(p.subtree)) or '(empty)'}\n")
    out.write(f"base: {p.base}\n")
    out.write(f"generators: {', '.join(p.generators)}\n")
    for e, t in p.edge_letters.items():
        out.write(f"edge letter {t} for {e}\n")
    out.write("relators:\n")
    for r in p.relators:
        out.write(f"  {format_word(r)}\n")
    return OK


def cmd_twists(args, out):
    g = _load(args.file)
    if not args.assume_hypotheses:
        check_hypotheses(g)
    try:
        lattice = build_j_matrix(g)
    except NonAbelianBlock as exc:
        out.write(str(exc.symbolic) + "\n")
        out.write(f"caveat: structure not computed ({exc})\n")
        return OK
    out.write(f"T = {lattice.cokernel()}\n")
    if args.matrix:
        out.write(lattice.dump() + "\n")
    for c in lattice.caveats:
        out.write(f"caveat: {c}\n")
    return OK


def cmd_report(args, out):
    rep = structure_report(_load(args.file))
    out.write(rep.machine() if args.machine else rep.text())
    return OK


def cmd_apply(args, out):
    g = _load(args.file)
    p = fundamental_presentation(g)
    a = parse_autospec(p, args.auto)
    if args.word is None:
        out.write(describe(a) + "\n")
    else:
        w = parse_word(args.word)
        unknown = [s for s, _ in w if s not in p.generators]
        if unknown:
            raise ValueError(f"{unknown[0]!r} is not a generator of the presentation")
        out.write(format_word(apply(a, w)) + "\n")
    return OK


def _line(out, label, ok):
    out.write(f"{label}: {'pass' if ok else 'FAIL'}\n")
    return ok


def _check_relations(g, p, out):
    ok = True
    for v in g.vertex_ids():
        zc = vertex_center(g, v)
        if zc is None:
            out.write(f"vertex {v}: skipped (center not computable)\n")
            continue
        for z in zc.basis:
            ok &= _line(out, f"vertex relation at {v}, z = {format_word(z)}", check_vertex_relation(p, v, z))
    for e in sorted(g.edges, key=lambda e: e.id):
        ec = center(e.oracle)
        if ec is None:
            out.write(f"edge {e.id}: skipped (center not computable)\n")
            continue
        for z in ec.basis:
            ok &= _line(out, f"edge relation at {e.id}, z = {format_word(z)}", check_edge_relation(p, e.id, z))
    return ok


def _check_commute(g, p, out):
    twists = []
    for f in g.oriented_edges():
        cz = centralizer_of_edge_image(g, f)
        c = cz.description
        if c is None or cz.from_edge_center:
            out.write(f"{f}: skipped (centralizer not computable)\n")
            continue
        z = next((b for b, d in zip(c.basis, c.orders) if d == 0), None)
        if z is not None:
            twists.append((f, twist(p, f, z)))
    ok = True
    for (f1, a1), (f2, a2) in ((x, y) for i, x in enumerate(twists) for y in twists[i + 1:]):
        if f1.edge == f2.edge:
            continue
        ab, ba = compose(a1, a2), compose(a2, a1)
        same = all(words_equal(g, p, ab.image(x), ba.image(x)) == YES for x in p.generators)
        ok &= _line(out, f"twists at {f1} and {f2} commute", same)
    return ok


def _check_triangle(g, p, out, spec):
    if spec is None:
        raise ValueError("--triangle needs --auto with extension data")
    a = parse_autospec(p, spec)
    ok = True
    for v in g.vertex_ids():
        oracle = g.vertex(v).oracle
        got = rho_restriction(a, v, use_provenance=False)
        if got is None:
            out.write(f"rho at {v}: unknown (no conjugator found)\n")
            continue
        verdict, m = vertex_maps_equal_up_to_inner(oracle, got, a.beta(v))
        label = f"rho at {v} recovers the vertex map"
        if verdict == YES:
            label += f" (witness {format_word(m)})"
        ok &= _line(out, label, verdict == YES)
    return ok


def cmd_check(args, out):
    g = _load(args.file)
    p = fundamental_presentation(g)
    if args.relations:
        ok = _check_relations(g, p, out)
    elif args.commute:
        ok = _check_commute(g, p, out)
    else:
        ok = _check_triangle(g, p, out, args.auto)
    return OK if ok else REFUSED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gogout", description="Graphs of groups and their outer automorphisms.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check a graph of groups")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("present", help="print the presentation of pi_1")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_present)

    sp = sub.add_parser("twists", help="compute the group of twists")
    sp.add_argument("file")
    sp.add_argument("--matrix", action="store_true", help="dump the matrix of j")
    sp.add_argument("--assume-hypotheses", action="store_true",
                    help="skip the minimality / mapping-torus gate")
    sp.set_defaults(fn=cmd_twists)

    sp = sub.add_parser("report", help="invariants and structure of Out(G)")
    sp.add_argument("file")
    sp.add_argument("--machine", action="store_true", help="JSON output")
    sp.set_defaults(fn=cmd_report)

    sp = sub.add_parser("apply", help="apply an automorphism to a word")
    sp.add_argument("file")
    sp.add_argument("--auto", required=True, help="autospec, e.g. 'bitwist(e,t1,t2)'")
    sp.add_argument("--word", help="word to map; all generators when omitted")
    sp.set_defaults(fn=cmd_apply)

    sp = sub.add_parser("check", help="verify relations and properties")
    sp.add_argument("file")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--relations", action="store_true")
    mode.add_argument("--commute", action="store_true")
    mode.add_argument("--triangle", action="store_true")
    sp.add_argument("--auto", help="extension autospec for --triangle")
    sp.set_defaults(fn=cmd_check)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.fn(args, out)
    except (HypothesisError, NotJSJShaped, AutomorphismError) as exc:
        err.write(f"refused: {exc}\n")
        return REFUSED
    except (OSError, ValueError, KeyError) as exc:
        err.write(f"error: {exc}\n")
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
