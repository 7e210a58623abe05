"""``karyotest`` command line: parse, build, classify and test.

Exit status: 0 success, 1 test failures, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import bands as B
from . import harness as H
from . import iscn
from . import karyotypes as K
from . import reasoner as R
from .errors import KaryotestError
from .ontology import NOTHING, THING, deserialize, serialize

EXIT_OK, EXIT_FAILURES, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def event_json(e) -> dict:
    kind = K.EVENT_CLASSES[type(e)].lower()
    if isinstance(e, (iscn.Gain, iscn.Loss)):
        return {"type": kind, "chromosome": e.chromosome}
    if isinstance(e, iscn.Translocation):
        return {
            "type": kind,
            "breakpoints": [
                {"chromosome": bp.chromosome, "band": bp.band.label} for bp in (e.first, e.second)
            ],
        }
    if isinstance(e, iscn.Deletion):
        bands = [e.band] + ([e.end] if e.end else [])
    else:
        bands = [e.first, e.second]
    return {"type": kind, "chromosome": e.chromosome, "bands": [b.label for b in bands]}


def karyotype_json(k: iscn.Karyotype) -> dict:
    return {
        "karyotype": iscn.render(k),
        "total": k.total,
        "sex": list(k.sex),
        "events": [event_json(e) for e in k.events],
    }


def cmd_parse(args, out) -> int:
    try:
        k = iscn.parse(args.karyotype)
    except iscn.ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        print(f"  {args.karyotype}\n  {' ' * e.position}^", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(karyotype_json(k), indent=2), file=out)
    return EXIT_OK


def bundled_file(name: str) -> Path:
    return B.bundled_band_file("full").with_name(name)


def _load_bands(path):
    trees = B.load_band_file(path)
    return B.expand_all(trees)


def cmd_build(args, out) -> int:
    batch = _load_bands(args.bands)
    tbox = K.base_ontology(batch)
    Path(args.output).write_text(serialize(tbox), encoding="utf-8")
    print(f"{len(batch.declarations)} band classes", file=out)
    print(f"{len(tbox.classes)} classes, {len(tbox.roles)} roles, {len(tbox.axioms)} axioms", file=out)
    print(f"wrote {args.output}", file=out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    tbox = deserialize(Path(args.ontology).read_text(encoding="utf-8"))
    smap = R.classify(tbox)
    if args.pair:
        sub, sup = args.pair
        print("true" if R.isuperclass(smap, sub, sup) else "false", file=out)
    else:
        for c in sorted(smap.classes):
            supers = sorted(s for s in smap.supers[c] if s not in (c, THING))
            if NOTHING in smap.supers[c]:
                supers = [NOTHING]
            print(f"{c}: {' '.join(supers)}".rstrip(), file=out)
    print(f"coherent: {str(R.coherent(smap)).lower()}", file=out)
    print(f"consistent: {str(R.consistent(smap)).lower()}", file=out)
    return EXIT_OK


def cmd_test(args, out) -> int:
    batch = _load_bands(args.bands)
    table = H.load_facet_table(args.facets)
    tbox = K.base_ontology(batch)
    for k in table.karyotypes():
        K.axiomatize(k, tbox)
    corpus = iscn.load_corpus(args.corpus or bundled_file("corpus.txt"))
    cases = H.standard_suite(tbox, table, corpus)
    report = H.run_suite(cases, tbox)
    print("karyotest report", file=out)
    if not args.no_timestamp:
        print(f"generated: {datetime.now(timezone.utc).isoformat(timespec='seconds')}", file=out)
    print(f"bands: {args.bands}  facets: {args.facets}", file=out)
    print("", file=out)
    print(report.format(), file=out)
    return EXIT_OK if report.ok else EXIT_FAILURES


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="karyotest", description="Karyotype ontology toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", help="parse an ISCN karyotype string")
    sp.add_argument("karyotype")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("build", help="build the base ontology from a band file")
    sp.add_argument("--bands", required=True)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("classify", help="classify a serialised ontology")
    sp.add_argument("ontology")
    sp.add_argument("--pair", nargs=2, metavar=("SUB", "SUP"))
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("test", help="run the four-tier test suite")
    sp.add_argument("--facets", required=True)
    sp.add_argument("--bands", required=True)
    sp.add_argument("--corpus", help="karyotype corpus for the parse round-trip cases (default: bundled)")
    sp.add_argument("--no-timestamp", action="store_true", help="omit the timestamp line")
    sp.set_defaults(func=cmd_test)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except (KaryotestError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
