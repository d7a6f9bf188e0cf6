"""Command-line front end.

Subcommands::

    prism invariant <file> [--mn m,n] [--json | --canonical]
    prism csw <file> [--mode det|fox] [--json | --canonical]
    prism gap <file> [--json]
    prism bracket <file> [--genus g] [--strict-paper-bracket]
                         [--max-crossings k] [--verbose] [--json]
    prism verify-moves <file> [--iterations k] [--seed s] [--json]
    prism catalog [--run-all] [--file entries.json] [--json]

Input files hold a braid word in the text grammar of
:mod:`prism.diagram` (``csw --mode fox`` expects a presentation in the
grammar of :mod:`prism.burau` instead); ``-`` reads standard input.  The
catalog file format is documented in :mod:`prism.catalog`.

Exit codes: 0 success, 1 usage or parse error, 2 verification mismatch.
Identical inputs and flags produce byte-identical output regardless of the
``PRISM_THREADS`` worker count.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from typing import Optional

from .bracket import (MAX_CROSSINGS_DEFAULT, dye_kauffman_minimal,
                      resolve_states, surface_bracket)
from .burau import csw_det, csw_from_presentation, parse_presentation
from .catalog import BUILTIN_ENTRIES, entries_from_json, run_catalog
from .diagram import (OMEGA, PrismaticBraidWord, Sigma, apply_move,
                      find_moves, parse_braid)
from .ring import RingContext, UnitSpec, canonical_form
from .rt import f_polynomial, gap
from .symplectic import (coefficient_vectors, genus_lower_bound,
                         symplectic_rank, z2_symplectic_rank)


class _Parser(argparse.ArgumentParser):
    """argparse reserves status 2 for usage errors; here that is 1."""

    def error(self, message: str):
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _mn(text: str) -> tuple[int, int]:
    m = re.match(r"^(\d+),(\d+)$", text)
    if not m:
        raise argparse.ArgumentTypeError("expected m,n (for example 1,1)")
    return (int(m.group(1)), int(m.group(2)))


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise ValueError("cannot read %s: %s" % (path, err))


def _fail(message: str) -> int:
    print("error: %s" % message, file=sys.stderr)
    return 1


def _emit(obj: dict) -> None:
    print(json.dumps(obj, indent=2))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_invariant(args) -> int:
    try:
        word = parse_braid(_read(args.file))
        m, n = args.mn
        value = f_polynomial(word, (m, n))
    except ValueError as err:
        return _fail(str(err))
    canon = canonical_form(value, UnitSpec.full(value.ctx))
    rank = symplectic_rank(coefficient_vectors(value))
    bound = genus_lower_bound(value)
    label = "f(%d|%d)" % (m, n)
    if args.json:
        _emit({"command": "invariant", "mn": [m, n],
               "raw": value.to_text(), "canonical": canon.to_text(),
               "rank": rank, "genus_bound": bound})
    elif args.canonical:
        print(canon.to_text())
    else:
        print("%s = %s" % (label, value.to_text()))
        print("canonical = %s" % canon.to_text())
        print("symplectic rank = %d" % rank)
        print("genus bound >= %d" % bound)
    return 0


def cmd_csw(args) -> int:
    try:
        text = _read(args.file)
        if args.mode == "fox":
            value = csw_from_presentation(parse_presentation(text))
        else:
            value = csw_det(parse_braid(text))
    except ValueError as err:
        return _fail(str(err))
    canon = canonical_form(value, UnitSpec.full(value.ctx))
    rank = symplectic_rank(coefficient_vectors(value))
    bound = genus_lower_bound(value)
    if args.json:
        _emit({"command": "csw", "mode": args.mode,
               "raw": value.to_text(), "canonical": canon.to_text(),
               "rank": rank, "genus_bound": bound})
    elif args.canonical:
        print(canon.to_text())
    else:
        print("csw(%s) = %s" % (args.mode, value.to_text()))
        print("canonical = %s" % canon.to_text())
        print("symplectic rank = %d" % rank)
        print("genus bound >= %d" % bound)
    return 0


def cmd_gap(args) -> int:
    try:
        value = gap(parse_braid(_read(args.file)))
    except ValueError as err:
        return _fail(str(err))
    if args.json:
        _emit({"command": "gap", "value": value.to_text()})
    else:
        print("gap = %s" % value.to_text())
    return 0


def cmd_bracket(args) -> int:
    try:
        word = parse_braid(_read(args.file))
        g = word.genus if args.genus is None else args.genus
        value = surface_bracket(word, g=g,
                                strict_paper_bracket=args.strict_paper_bracket,
                                max_crossings=args.max_crossings)
    except ValueError as err:
        return _fail(str(err))
    rank = z2_symplectic_rank(coefficient_vectors(value, g))
    certified = dye_kauffman_minimal(value, g)
    crossings = sum(isinstance(t, Sigma) for t in word.tokens)
    states = None
    if args.verbose:
        states = [{"choices": "".join(s.choices), "a": s.n_A, "b": s.n_B,
                   "trivial_loops": s.trivial_loops,
                   "decorated_loops": [list(v) for v in s.decorated_loops]}
                  for s in resolve_states(word, genus=g,
                                          max_crossings=args.max_crossings)]
    if args.json:
        obj = {"command": "bracket", "genus": g,
               "value": value.to_text(), "states": 2 ** crossings,
               "z2_rank": rank, "certified": certified}
        if states is not None:
            obj["state_table"] = states
        _emit(obj)
    else:
        print("bracket = %s" % value.to_text())
        print("states = %d" % 2 ** crossings)
        print("z2 rank = %d" % rank)
        print("minimal-genus certificate: %s"
              % ("yes" if certified else "no"))
        if states is not None:
            for s in states:
                print("  %s: A=%d B=%d trivial=%d decorated=%s"
                      % (s["choices"] or "-", s["a"], s["b"],
                         s["trivial_loops"], s["decorated_loops"]))
    return 0


def _move_invariants(word: PrismaticBraidWord, ctx_q: RingContext,
                     ctx_t: RingContext, genus: int):
    return (f_polynomial(word, (1, 1), ctx=ctx_q),
            csw_det(word, ctx=ctx_t),
            surface_bracket(word, g=genus))


def cmd_verify_moves(args) -> int:
    try:
        word = parse_braid(_read(args.file))
    except ValueError as err:
        return _fail(str(err))
    g = word.genus
    ctx_q = RingContext(("q",) + word.palette.colors + (OMEGA,), genus=g)
    ctx_t = RingContext(("t",) + word.palette.colors + (OMEGA,), genus=g)
    base = _move_invariants(word, ctx_q, ctx_t, g)
    names = ("f(1|1)", "csw-det", "bracket")
    rng = random.Random(args.seed)
    total_moves = 0
    for _ in range(args.iterations):
        trail = [word]
        cur = word
        for _ in range(rng.randint(1, 6)):
            moves = find_moves(cur)
            if len(cur.tokens) > 14:
                moves = [mv for mv in moves if mv.direction == "apply"]
            if not moves:
                break
            cur = apply_move(cur, rng.choice(moves))
            trail.append(cur)
        total_moves += len(trail) - 1
        if _move_invariants(cur, ctx_q, ctx_t, g) == base:
            continue
        # walk the trail to the first move that changed an invariant
        prev = trail[0]
        for step in trail[1:]:
            vals = _move_invariants(step, ctx_q, ctx_t, g)
            if vals != base:
                which = next(n for n, a, b in zip(names, base, vals)
                             if a != b)
                idx = names.index(which)
                if args.json:
                    _emit({"command": "verify-moves", "status": "discrepancy",
                           "invariant": which, "before": prev.to_text(),
                           "after": step.to_text(),
                           "value_before": base[idx].to_text(),
                           "value_after": vals[idx].to_text()})
                else:
                    print("discrepancy in %s:" % which)
                    print("  before: %s" % prev.to_text())
                    print("  after:  %s" % step.to_text())
                    print("  value before: %s" % base[idx].to_text())
                    print("  value after:  %s" % vals[idx].to_text())
                return 2
            prev = step
    if args.json:
        _emit({"command": "verify-moves", "status": "ok",
               "sequences": args.iterations, "moves": total_moves})
    else:
        print("ok: %d sequences, %d moves, no discrepancies"
              % (args.iterations, total_moves))
    return 0


def cmd_catalog(args) -> int:
    try:
        entries = (entries_from_json(_read(args.file))
                   if args.file else BUILTIN_ENTRIES)
    except ValueError as err:
        return _fail(str(err))
    results = run_catalog(entries, include_tier2=args.run_all)
    counts = {"pass": 0, "fail": 0, "skip": 0}
    for r in results:
        counts[r.status] += 1
    if args.json:
        _emit({"command": "catalog",
               "results": [{"entry": r.entry, "check": r.check,
                            "status": r.status, "computed": r.computed,
                            "expected": r.expected} for r in results],
               "passed": counts["pass"], "failed": counts["fail"],
               "skipped": counts["skip"]})
    else:
        for r in results:
            print("%s %s :: %s" % (r.status.upper(), r.entry, r.check))
            if r.status == "fail":
                print("  computed: %s" % r.computed)
                print("  expected: %s" % r.expected)
            elif r.status == "skip":
                print("  (%s)" % r.computed)
        print("%d passed, %d failed, %d skipped"
              % (counts["pass"], counts["fail"], counts["skip"]))
    return 2 if counts["fail"] else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="prism",
                     description="exact invariants of prismatic links")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariant", help="closure invariant of a braid word")
    p.add_argument("file", help="braid word file (- for stdin)")
    p.add_argument("--mn", type=_mn, default=(1, 1),
                   help="superdimension m,n (default 1,1)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--canonical", action="store_true",
                   help="print only the canonical form")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("csw", help="decorated Alexander polynomial")
    p.add_argument("file", help="braid word file, or a presentation "
                                "file with --mode fox")
    p.add_argument("--mode", choices=("det", "fox"), default="det")
    p.add_argument("--json", action="store_true")
    p.add_argument("--canonical", action="store_true",
                   help="print only the canonical form")
    p.set_defaults(func=cmd_csw)

    p = sub.add_parser("gap", help="two-variable specialization")
    p.add_argument("file", help="undecorated virtual braid word file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("bracket", help="surface bracket state sum")
    p.add_argument("file", help="braid word file")
    p.add_argument("--genus", type=int, default=None,
                   help="carrying genus (default: of the word)")
    p.add_argument("--strict-paper-bracket", action="store_true",
                   help="empty decorated sums count as zero")
    p.add_argument("--max-crossings", type=int,
                   default=MAX_CROSSINGS_DEFAULT,
                   help="state-count guard (default %d)"
                        % MAX_CROSSINGS_DEFAULT)
    p.add_argument("--verbose", action="store_true",
                   help="include the per-state table")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("verify-moves",
                       help="re-compute invariants under random moves")
    p.add_argument("file", help="braid word file")
    p.add_argument("--iterations", type=int, default=100,
                   help="number of move sequences (default 100)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_moves)

    p = sub.add_parser("catalog", help="run the worked-example catalog")
    p.add_argument("--run-all", action="store_true",
                   help="include tier-2 entries")
    p.add_argument("--file", default=None,
                   help="JSON entry file (replaces the built-ins)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else 1
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
