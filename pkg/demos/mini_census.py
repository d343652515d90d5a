"""Run the closed-surface search over the bundled mini-census and print a table.

    python3 demos/mini_census.py [--jobs N]
"""

import argparse
import time

from essurf import fixtures
from essurf import pipeline as pl


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    print(f"{'name':8s} {'tets':>4s}  {'verdict':30s} {'secs':>6s}")
    for name in fixtures.MINI_CENSUS:
        T = fixtures.load(name)
        if T.is_orientable and not T.is_oriented:
            T = T.oriented()
        t0 = time.perf_counter()
        rep = pl.decide(T, jobs=args.jobs)
        print(f"{name:8s} {T.size:4d}  {rep.verdict.value:30s} {time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()
