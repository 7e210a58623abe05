"""Regenerate ``src/karyotest/data/bands_full.json`` from an 850-band ideogram.

Input is the ``homo-sapiens.json`` band file shipped with the ``ideogram``
npm package (``dist/data/bands/native/homo-sapiens.json``, UCSC-derived,
GRCh37 850-band resolution).  Each leaf band such as ``p36.33`` is placed
under its coarser ancestors (``p36.3``, ``p36``), and every arm gets the
centromeric ``p10``/``q10`` band.

    npm pack ideogram && tar xzf ideogram-*.tgz
    python scripts/make_band_table.py package/dist/data/bands/native/homo-sapiens.json
"""

import json
import re
import sys
from collections import defaultdict
from pathlib import Path

CHROMOSOMES = [str(i) for i in range(1, 23)] + ["X", "Y"]
OUT = Path(__file__).resolve().parents[1] / "src" / "karyotest" / "data" / "bands_full.json"


def sort_key(label):
    m = re.fullmatch(r"[pq](\d+)(?:\.(\d+))?", label)
    main, sub = m.group(1), m.group(2) or ""
    return (int(main), sub)


def ancestors(label):
    arm, rest = label[0], label[1:]
    if "." not in rest:
        return [label]
    main, sub = rest.split(".")
    out = [arm + main]
    out += [f"{arm}{main}.{sub[:i]}" for i in range(1, len(sub) + 1)]
    return out


def nest(labels):
    children = defaultdict(list)
    roots = []
    for label in sorted(labels, key=sort_key):
        chain = ancestors(label)
        if len(chain) == 1:
            roots.append(label)
        else:
            children[chain[-2]].append(label)

    def entry(label):
        if children[label]:
            return [label] + [entry(c) for c in children[label]]
        return label

    return [entry(r) for r in roots]


def main(path):
    raw = json.loads(Path(path).read_text())
    labels = defaultdict(lambda: {"p": set(), "q": set()})
    for line in raw["chrBands"]:
        chrom, arm, band = line.split()[:3]
        if chrom not in CHROMOSOMES:
            continue
        for a in ancestors(arm + band):
            labels[chrom][arm].add(a)
    table = []
    for chrom in CHROMOSOMES:
        row = {"chromosome": chrom}
        for arm in "pq":
            row[arm] = nest(labels[chrom][arm] | {arm + "10"})
        table.append(row)
    OUT.write_text("[\n" + ",\n".join(json.dumps(row) for row in table) + "\n]\n")


if __name__ == "__main__":
    main(sys.argv[1])
