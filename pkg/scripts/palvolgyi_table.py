"""Properties of the (k, l) construction for all k, l up to a bound.

For each pair: ground-set size, exhaustive check that every 2-coloring has
an all-red F1 set or an all-blue F2 set, exhaustive check that the recursive
colorings keep every partial sum in {0, 1}, and disc of the union when the
exact search fits the budget.

    python scripts/palvolgyi_table.py --max 3
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from herdisc.disc import disc_exact
from herdisc.generators import palvolgyi, palvolgyi_colorings_all, verify_mono_property


def sums_ok(pair, fam, F) -> bool:
    table = palvolgyi_colorings_all(pair, fam).astype(np.int16)
    sums = table @ F.incidence().astype(np.int16).T
    return bool(((sums == 0) | (sums == 1)).all())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=3, help="largest k and l (n grows as C(k+l, k))")
    ap.add_argument("--node-budget", type=int, default=5_000_000)
    a = ap.parse_args(argv)
    print(f"{'k':>2} {'l':>2} {'n':>4} {'mono':>5} {'sums01':>7} {'disc':>5} {'sec':>6}")
    for k in range(1, a.max + 1):
        for l in range(1, a.max + 1):
            t0 = time.perf_counter()
            pair = palvolgyi(k, l)
            mono, cert = verify_mono_property(pair.F1, pair.F2)
            s = sums_ok(pair, 1, pair.F1) and sums_ok(pair, 2, pair.F2) if pair.n <= 22 else None
            d = disc_exact(pair.union(), a.node_budget)
            disc = d.value if d.certified else f">={0}"
            print(f"{k:>2} {l:>2} {pair.n:>4} {str(mono and cert):>5} {str(s):>7} {disc!s:>5} "
                  f"{time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()
