"""Command-line interface: ``weldinv <command> ...``.

Exit codes: 0 success, 1 mismatch (table / fuzz), 2 usage error,
3 resource cap exceeded.
"""

import argparse
import json
import sys

from .algebra.groups import (
    GroupTooLarge,
    cyclic_group,
    make_gl_module,
    parse_cm_spec,
    parse_table_file,
    symmetric_group,
)
from .colouring import OracleCapExceeded, invariant
from .diagram import (
    CATALOG_NAMES,
    CatalogError,
    ParseError,
    add_handle,
    catalog,
    parse_morse,
    random_equivalent,
    serialize,
    wirtinger_presentation,
)
from .modpres import alex_presentation, alex_prime_presentation, cm_presentation

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

# Expected values of H for the crossed modules G(2,p).  Tables 1-4 pair a
# knot K with c1(K'), the trivial 1-handle added to its arc; values are
# listed per p as (K, c1(K')).
PAIR_TABLES = {
    1: ("T31", "T31arc", {2: (96, 96), 3: (4320, 4752), 4: (24576, 27648),
                          5: (132000, 168000), 7: (2272032, 2765952)}),
    2: ("F41", "F41arc", {2: (48, 48), 3: (3024, 3456), 4: (15360, 15360),
                          5: (228000, 228000), 7: (1876896, 2272032)}),
    3: ("K51", "K51arc", {2: (24, 24), 3: (432, 432), 4: (1536, 1536),
                          5: (168000, 204000), 7: (98784, 98784)}),
    4: ("K52", "K52arc", {2: (24, 24), 3: (864, 864), 4: (1536, 1536),
                          5: (72000, 84000), 7: (987840, 1481760)}),
}

# Table 5: K_n and c1(A_n) for odd n = 3..17 under G(2,3) and G(2,5).
FAMILY_N = tuple(range(3, 18, 2))
FAMILY_TABLE = {
    3: ((4320, 432, 432, 4320, 432, 432, 4320, 432),
        (4752, 432, 432, 4752, 432, 432, 4752, 432)),
    5: ((132000, 168000, 12000, 132000, 12000, 12000, 288000, 12000),
        (168000, 204000, 12000, 168000, 12000, 12000, 360000, 12000)),
}

DEFAULT_P = (2, 3, 4, 5)
LONG_P = (7,)


class UsageError(Exception):
    pass


def table_cells(n, ps):
    """(label, p, diagram thunk, expected) for each cell of table n."""
    cells = []
    if n in PAIR_TABLES:
        knot, arc, expected = PAIR_TABLES[n]
        for p in ps:
            if p not in expected:
                raise UsageError(f"table {n} has no column p={p}")
            a, b = expected[p]
            cells.append((knot, p, lambda k=knot: catalog(k), a))
            cells.append((f"c1({arc})", p, lambda k=arc: add_handle(catalog(k)), b))
    elif n == 5:
        for p in ps:
            if p not in FAMILY_TABLE:
                raise UsageError(f"table 5 has no row p={p}")
            knots, handles = FAMILY_TABLE[p]
            for k, a in zip(FAMILY_N, knots):
                cells.append((f"K{k}", p, lambda k=k: catalog("Kn", k), a))
            for k, b in zip(FAMILY_N, handles):
                cells.append((f"c1(A{k})", p, lambda k=k: add_handle(catalog("An", k)), b))
    else:
        raise UsageError(f"unknown table {n}; tables are 1-5")
    return cells


def _table_ps(n, args):
    available = sorted(FAMILY_TABLE) if n == 5 else sorted(PAIR_TABLES.get(n, (None, None, {}))[2])
    if args.p:
        ps = list(args.p)
        if any(p in LONG_P for p in ps) and not args.long:
            raise UsageError("p=7 cells are long computations; add --long")
        return ps
    ps = [p for p in available if p in DEFAULT_P or (args.long and p in LONG_P)]
    return ps


# ------------------------------------------------------------ helpers

def _load_diagram(args):
    if args.diagram and args.catalog:
        raise UsageError("give either --diagram or --catalog, not both")
    if args.diagram:
        with open(args.diagram, encoding="utf-8") as fh:
            return parse_morse(fh.read())
    if args.catalog:
        return catalog(args.catalog)
    raise UsageError("a diagram is required: --diagram FILE or --catalog NAME")


def _parse_group(spec):
    import re

    spec = spec.strip()
    m = re.fullmatch(r"(?:S|sym)\(?(\d+)\)?", spec)
    if m:
        return symmetric_group(int(m.group(1)))
    m = re.fullmatch(r"(?:Z|cyclic)\(?(\d+)\)?", spec)
    if m:
        return cyclic_group(int(m.group(1)))
    m = re.fullmatch(r"gl\(\s*(\d+)\s*,\s*(\d+)\s*\)", spec)
    if m:
        return make_gl_module(int(m.group(1)), int(m.group(2))).G
    m = re.fullmatch(r"table\((.+)\)", spec)
    if m:
        with open(m.group(1).strip(), encoding="utf-8") as fh:
            return parse_table_file(fh.read())[0]
    raise UsageError(f"unrecognised group spec {spec!r}; use S3, Z5, gl(2,3) or table(FILE)")


def _report_dict(rep, timing):
    d = rep.as_dict()
    if not timing:
        d.pop("elapsed", None)
    return d


def _emit(args, record, text):
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


# ------------------------------------------------------------ commands

def cmd_invariant(args):
    d = _load_diagram(args)
    cm = parse_cm_spec(args.cm)
    rep = invariant(d, cm, backend=args.backend, conjugacy_reduction=not args.no_conjugacy,
                    workers=args.workers, cap=args.cap)
    rec = {"diagram": args.catalog or args.diagram, "cm": cm.name, **_report_dict(rep, args.timing)}
    lines = [str(rep.value)] + [f"  {k}: {v}" for k, v in rec.items() if k != "value"]
    _emit(args, rec, "\n".join(lines))
    return EXIT_OK


def cmd_table(args):
    ps = _table_ps(args.n, args)
    failures = 0
    cms = {}
    for label, p, build, expected in table_cells(args.n, ps):
        if p not in cms:
            cms[p] = make_gl_module(2, p)
        rep = invariant(build(), cms[p], workers=args.workers)
        ok = rep.value == expected
        failures += not ok
        got = int(rep.value) if rep.value.denominator == 1 else str(rep.value)
        rec = {"table": args.n, "cell": label, "p": p, "expected": expected, "got": got,
               "status": "PASS" if ok else "FAIL"}
        if args.timing:
            rec["elapsed"] = round(rep.elapsed, 3)
        text = f"{rec['status']} table {args.n} {label} G(2,{p}): got {got}, expected {expected}"
        if args.timing:
            text += f" ({rep.elapsed:.2f}s)"
        _emit(args, rec, text)
    return EXIT_MISMATCH if failures else EXIT_OK


def cmd_fuzz(args):
    d = _load_diagram(args)
    cms = [parse_cm_spec(s) for s in (args.cm or ["sign(3)"])]
    base = [invariant(d, cm).value for cm in cms]
    violations = 0
    for s in range(args.seed, args.seed + args.seeds):
        d2 = random_equivalent(d, args.steps, seed=s)
        vals = [invariant(d2, cm).value for cm in cms]
        for cm, a, b in zip(cms, base, vals):
            ok = a == b
            violations += not ok
            rec = {"seed": s, "cm": cm.name, "events": len(d2.events), "expected": str(a),
                   "got": str(b), "status": "PASS" if ok else "FAIL"}
            _emit(args, rec, f"{rec['status']} seed {s} {cm.name}: {b} (expected {a}, {len(d2.events)} events)")
            if not ok and args.dump:
                print(serialize(d2), file=sys.stderr)
    return EXIT_MISMATCH if violations else EXIT_OK


def cmd_presentation(args):
    d = _load_diagram(args)
    build = {"cm": cm_presentation, "alex": alex_presentation, "alexp": alex_prime_presentation}[args.which]
    pres = build(d, eliminate=not args.raw)
    rec = {
        "which": args.which,
        "generators": pres.n_generators,
        "variables": pres.nvars,
        "components": list(pres.var_component),
        "text": pres.to_text(),
    }
    _emit(args, rec, pres.to_text().rstrip("\n"))
    return EXIT_OK


def cmd_catalog_list(args):
    names = list(CATALOG_NAMES)
    if args.json:
        print(json.dumps({"names": names}))
    else:
        for n in names:
            print(n)
    return EXIT_OK


def cmd_group_homs(args):
    d = _load_diagram(args)
    G = _parse_group(args.group)
    pres = wirtinger_presentation(d).simplify()
    count = pres.hom_count(G)
    rec = {"group": G.name, "presentation": str(pres), "homs": count}
    _emit(args, rec, f"{count}\n  group: {G.name}\n  presentation: {pres}")
    return EXIT_OK


# ------------------------------------------------------------ parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="one JSON record per result line")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--diagram", metavar="FILE", help="diagram in the Morse text format")
    source.add_argument("--catalog", metavar="NAME", help="catalog name, e.g. T31 or Kn(5)")

    p = argparse.ArgumentParser(prog="weldinv", description="Crossed-module invariants of welded diagrams.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariant", parents=[common, source], help="compute the invariant")
    s.add_argument("--cm", required=True, help="gl(n,p), sign(m), trivial(FILE) or table(FILE)")
    s.add_argument("--backend", choices=["naive", "fast"], default="fast")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--no-conjugacy", action="store_true", help="disable conjugacy-class reduction")
    s.add_argument("--cap", type=int, default=None, help="enumeration cap for the naive backend")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("table", parents=[common], help="recompute a results table (1-5)")
    s.add_argument("n", type=int)
    s.add_argument("--p", type=int, action="append", help="restrict to this modulus (repeatable)")
    s.add_argument("--long", action="store_true", help="include the p=7 cells")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("fuzz", parents=[common, source], help="random move invariance check")
    s.add_argument("--cm", action="append", help="crossed module spec (repeatable)")
    s.add_argument("--steps", type=int, default=200)
    s.add_argument("--seeds", type=int, default=20)
    s.add_argument("--seed", type=int, default=0, help="first seed")
    s.add_argument("--dump", action="store_true", help="print failing diagrams to stderr")
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("presentation", parents=[common, source], help="dump a module presentation")
    s.add_argument("which", choices=["cm", "alex", "alexp"])
    s.add_argument("--raw", action="store_true", help="skip Tietze elimination")
    s.set_defaults(func=cmd_presentation)

    s = sub.add_parser("catalog-list", parents=[common], help="list catalog names")
    s.set_defaults(func=cmd_catalog_list)

    s = sub.add_parser("group-homs", parents=[common, source], help="homomorphisms of the knot group")
    s.add_argument("--group", required=True, help="S3, Z5, gl(2,3) or table(FILE)")
    s.set_defaults(func=cmd_group_homs)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (GroupTooLarge, OracleCapExceeded) as e:
        print(f"weldinv: resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, CatalogError, ParseError, ValueError, OSError) as e:
        print(f"weldinv: {e}", file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
