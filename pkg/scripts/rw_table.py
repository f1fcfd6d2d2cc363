"""Record every r_w(k) row: suffix start i, word, k, path index j and scalar C.

This is the reference table for the path-uniqueness lemma; the JSON dump is
meant to be diffed across versions.

    python3 scripts/rw_table.py --json results/rw_table.json
"""

import argparse
import json
from pathlib import Path

from qgkdim.witness import rw_table

CASES = [("A", 1), ("A", 2), ("A", 3), ("C", 2), ("D", 3)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", type=Path, default=None)
    args = ap.parse_args()

    records = []
    for family, n in CASES:
        for h in rw_table(family, n):
            records.append(
                {"family": family, "n": n, "i": h.i, "word": list(h.word), "k": h.k, "j": h.j, "C": str(h.C), "clauses": list(h.clauses)}
            )
            print(f"{family}{n}  i={h.i}  w={''.join(map(str, h.word)):10s} k={h.k}  j={h.j}  C={h.C}  ok={h.ok}")
    print(f"{len(records)} rows, {sum(not all(r['clauses']) for r in records)} failing")
    if args.json:
        args.json.parent.mkdir(parents=True, exist_ok=True)
        args.json.write_text(json.dumps(records, indent=1))


if __name__ == "__main__":
    main()
