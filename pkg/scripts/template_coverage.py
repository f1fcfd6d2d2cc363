"""Count group elements that admit a parts decomposition from the templates.

Types A and C are fully covered; type D is not, and the misses are listed.

    python3 scripts/template_coverage.py --family D --rank 3
"""

import argparse

from qgkdim.weyl import DecompositionError, parts_decompose, weyl_group, word_normalize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="D")
    ap.add_argument("--rank", type=int, default=3)
    ap.add_argument("--show", type=int, default=10, help="misses to print")
    args = ap.parse_args()

    W = weyl_group(args.family, args.rank)
    misses = []
    elements = W.elements()
    for g in elements:
        word = W.reduced_word(g)
        try:
            parts_decompose(W, word)
        except DecompositionError:
            misses.append(word_normalize(W, word.letters).letters)
    misses.sort(key=lambda w: (len(w), w))
    print(f"{args.family}{args.rank}: {len(elements) - len(misses)}/{len(elements)} elements covered")
    for w in misses[: args.show]:
        print("  missing", w)


if __name__ == "__main__":
    main()
