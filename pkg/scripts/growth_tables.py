"""Span-growth tables for the baseline generator sets and SU_q(2).

Writes one CSV per series into the output directory and prints the detected
degree of each.

    python3 scripts/growth_tables.py --out results/growth --m-max 10
"""

import argparse
from pathlib import Path

from qgkdim.checks import alpha_d_generators, chi_generators, laurent_generators, pqt_generators
from qgkdim.growth import degree_detect, span_growth


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/growth"))
    ap.add_argument("--m-max", type=int, default=10)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    series = {
        "laurent": laurent_generators(),
        "pqt": pqt_generators(),
        "alpha-2": alpha_d_generators(2),
        "su2": chi_generators("A", 1, (1,)),
    }
    for name, gens in series.items():
        s = span_growth(gens, args.m_max, threads=args.threads)
        (args.out / f"{name}.csv").write_text(s.to_csv())
        est = degree_detect(s)
        print(f"{name:8s} d = {s.dims}  degree {est.degree} ({est.method})  stable={s.all_stable}")


if __name__ == "__main__":
    main()
