"""Run the full enumeration once, with checkpointing, and report counts."""

import sys
import time

sys.path.insert(0, "src")

from shimcurve.scan import (
    THEOREM_BOUND, counts_by_genus, enumerate_quotients, star_levels,
    bielliptic_involutions,
)
from shimcurve.arith import is_squarefree


def progress(i, n, lo, hi, total):
    print(f"[{time.strftime('%H:%M:%S')}] chunk {i}/{n} D<{hi} levels={total}",
          flush=True)


def main():
    ck = sys.argv[1] if len(sys.argv) > 1 else "/tmp/scan_checkpoint.json"
    t0 = time.time()
    levels = star_levels(2, THEOREM_BOUND, engine="numba", checkpoint=ck,
                         progress=progress)
    t1 = time.time()
    from collections import Counter
    star_counts = Counter(g for _, _, _, g in levels)
    print("star levels:", dict(star_counts), "total", len(levels),
          f"({t1-t0:.0f}s)", flush=True)
    recs = enumerate_quotients(2, THEOREM_BOUND, engine="numba", checkpoint=ck)
    t2 = time.time()
    print("records:", counts_by_genus(recs), f"({t2-t1:.0f}s)", flush=True)
    g1 = [r for r in recs if r.genus == 1]
    sq = sum(1 for r in g1 if is_squarefree(r.N))
    print("genus-1 squarefree split:", sq, "/", len(g1) - sq, flush=True)
    g2 = [r for r in recs if r.genus == 2]
    two = one = 0
    for r in g2:
        b = bielliptic_involutions(r.D, r.N, r.W)
        if b == 2:
            two += 1
        elif b == 1:
            one += 1
        elif b > 2:
            print("UNEXPECTED >2 bielliptic:", r)
    t3 = time.time()
    print(f"bielliptic census: two={two} one={one} total={two+one} ({t3-t2:.0f}s)",
          flush=True)


if __name__ == "__main__":
    main()
