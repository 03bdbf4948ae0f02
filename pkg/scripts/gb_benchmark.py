#!/usr/bin/env python3
"""Time strong Groebner bases of random integer ideals.

Each ideal is drawn with a seeded RNG, its basis is computed and then
certified by reducing every S- and G-polynomial.
"""
import argparse
import random
import statistics
import time

from wnlab.coeffs import ZZ
from wnlab.groebner import Ideal, certify
from wnlab.poly import Poly, polynomial_ring


def random_poly(rng, ring, terms, deg, coeff):
    data = {}
    for _ in range(rng.randint(1, terms)):
        e = [0] * ring.nvars
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(ring.nvars)] += 1
        data[tuple(e)] = rng.randint(-coeff, coeff)
    return Poly(ring, data)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", "--count", type=int, default=100)
    ap.add_argument("--vars", type=int, default=3)
    ap.add_argument("--gens", type=int, default=3)
    ap.add_argument("--deg", type=int, default=3)
    ap.add_argument("--coeff", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args(argv)

    rng = random.Random(a.seed)
    ring = polynomial_ring(ZZ, "x y z w v u"[: 2 * a.vars - 1])
    times, sizes, failures = [], [], 0
    for _ in range(a.count):
        gens = [g for g in (random_poly(rng, ring, 3, a.deg, a.coeff) for _ in range(rng.randint(1, a.gens))) if not g.is_zero()]
        if not gens:
            continue
        t0 = time.perf_counter()
        G = Ideal(ring, gens).gb()
        ok = certify(G)
        times.append(time.perf_counter() - t0)
        sizes.append(len(G.basis))
        failures += not ok
    print(f"ideals: {len(times)}  total {sum(times):.2f}s  median {statistics.median(times) * 1e3:.1f}ms  max {max(times) * 1e3:.1f}ms")
    print(f"basis size: mean {statistics.mean(sizes):.1f}  max {max(sizes)}  certification failures: {failures}")


if __name__ == "__main__":
    main()
