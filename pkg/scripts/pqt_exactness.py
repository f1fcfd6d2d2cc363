"""Compare d(m) for P_q(T) against (m+1)^2 and the lower family (m+1)(m+2)/2.

    python3 scripts/pqt_exactness.py --m-max 12
"""

import argparse

from qgkdim.checks import lower_family_rank, pqt_generators
from qgkdim.growth import span_growth


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=12)
    args = ap.parse_args()

    s = span_growth(pqt_generators(), args.m_max)
    print(" m     d  (m+1)^2  lower  stable")
    for row in s.rows:
        lower, _ = lower_family_rank(row.m)
        print(f"{row.m:2d} {row.d:5d} {(row.m + 1) ** 2:8d} {lower:6d}  {row.stable}")
    exact = all(d == (m + 1) ** 2 for m, d in enumerate(s.dims, 1))
    print("upper bound attained at every level" if exact else "upper bound not attained everywhere")


if __name__ == "__main__":
    main()
