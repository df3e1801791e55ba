"""Recompute every rank-2 table and list the stored errata.

    python3 scripts/reproduce_tables.py [--preset G2] [--show-values]
"""
import argparse

from birweyl.poisson import preset
from birweyl.tau import cocycle
from birweyl.verify import FIXTURE_PRESETS, load_fixture, parse_weight_label, run_fixture_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", choices=FIXTURE_PRESETS, action="append")
    ap.add_argument("--show-values", action="store_true", help="print each recomputed cocycle")
    args = ap.parse_args()
    status = 0
    for name in args.preset or FIXTURE_PRESETS:
        rep = run_fixture_suite(name)
        print(rep.summary() + f" in {rep.wall_time:.2f}s")
        status |= not rep.ok
        fs = load_fixture(name)
        ps = preset(name)
        for e in fs.cocycles:
            lam = parse_weight_label(e.weight, ps.n)
            if args.show_values:
                val = cocycle(ps, [j - 1 for j in e.words[0]], lam)
                words = " = ".join("s" + "s".join(map(str, w)) if w else "1" for w in e.words)
                print(f"  phi_{words}({e.weight}) = {val.value.to_text()}")
            for err in e.errata:
                print(f"  erratum at {e.weight}: printed {err['source_text']!r} -> {err['corrected']!r}")
                print(f"    {err['reason']}")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
