#!/usr/bin/env python3
"""Fraction of good hyperplane sections as the residue field grows.

Scans P^d(F_q) for a few primes q and prints good/total for each, so the
density of good sections can be watched as q increases.
"""
import argparse
import json
import time

from wnlab.bertini import SectionContext, bertini_scan
from wnlab.fpring import PrimeSpot
from wnlab.session import as_list, parse_ring


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ring", default="ZZ[X,Y] / (Y^2 - 4*X)")
    ap.add_argument("--xs", default="2, X, Y", help="generators of the maximal ideal")
    ap.add_argument("--wn", default="2, Y", help="prime to keep out of its symbolic square")
    ap.add_argument("--sat", default="X", help="element outside the prime")
    ap.add_argument("--primes", default="2, 3, 5, 7")
    ap.add_argument("--json", action="store_true", help="print JSON instead of a table")
    a = ap.parse_args(argv)

    R = parse_ring(a.ring)
    ctx = SectionContext(R, as_list(a.xs), wn_spots=[PrimeSpot(R, as_list(a.wn), sat=a.sat)])
    rows = []
    for q in (int(p) for p in as_list(a.primes)):
        t0 = time.perf_counter()
        rep = bertini_scan(ctx, q)
        rows.append({"q": q, "good": rep.good_count, "total": rep.total, "seconds": round(time.perf_counter() - t0, 3)})
    if a.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'q':>4} {'good':>6} {'total':>6} {'fraction':>9} {'secs':>7}")
    for r in rows:
        print(f"{r['q']:>4} {r['good']:>6} {r['total']:>6} {r['good'] / r['total']:>9.3f} {r['seconds']:>7.2f}")


if __name__ == "__main__":
    main()
