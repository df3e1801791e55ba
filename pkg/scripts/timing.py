"""Compare the two cocycle paths on the longest words of each rank-2 preset.

    python3 scripts/timing.py [--repeat 3]
"""
import argparse
import time

from birweyl.cartan import reduced_words_by_element
from birweyl.poisson import preset
from birweyl.tau import cocycle_by_product, cocycle_by_tau

LONGEST = {"A2": 3, "B2": 4, "G2": 6}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'preset':6} {'word':14} {'weight':8} {'product s':>10} {'tau s':>10} {'terms':>6}")
    for name, length in LONGEST.items():
        ps = preset(name)
        words = sorted(w for ws in reduced_words_by_element(ps.cartan, length).values() for w in ws)
        for w in [w for w in words if len(w) >= length - 1]:
            for j in range(ps.n):
                lam = ps.cartan.fundamental_weight(j)
                times = []
                for fn in (cocycle_by_product, cocycle_by_tau):
                    best = float("inf")
                    for _ in range(args.repeat):
                        ps._cache.clear()  # time cold, not memoized images
                        t0 = time.perf_counter()
                        val = fn(ps, w, lam)
                        best = min(best, time.perf_counter() - t0)
                    times.append(best)
                label = "s" + "s".join(str(k + 1) for k in w)
                print(f"{name:6} {label:14} L{j + 1:<7} {times[0]:10.4f} {times[1]:10.4f} {len(val.num.terms):6d}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
