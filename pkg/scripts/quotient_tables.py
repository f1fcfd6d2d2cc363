"""Tabulate 2l(w^S) + k against dim G - dim K for the standard subsets.

    python3 scripts/quotient_tables.py --max-rank 5
"""

import argparse

from qgkdim.quotient import gkdim_quotient, homogeneous_dim, standard_subset
from qgkdim.weyl import MIN_RANK


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-rank", type=int, default=4)
    args = ap.parse_args()

    print("family n m  S                l(w^S)  k  value  dimG-dimK")
    for family in "AC":
        for n in range(MIN_RANK[family], args.max_rank + 1):
            for m in range(1, n + 1):
                rep = gkdim_quotient(family, n, standard_subset(family, n, m))
                mark = "" if rep.value == homogeneous_dim(family, n, m) else "  MISMATCH"
                print(
                    f"{family}      {n} {m}  {str(set(rep.S) or '{}'):16s} {rep.coset_length:6d} {rep.k:2d} "
                    f"{rep.value:6d} {homogeneous_dim(family, n, m):10d}{mark}"
                )


if __name__ == "__main__":
    main()
