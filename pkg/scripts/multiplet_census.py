#!/usr/bin/env python3
"""Census of walk multiplets across seeded template instances.

For each template, draw several seeded instances and tabulate how many
full-support multiplets of each size/parity the planted pair carries.
"""

import argparse
from collections import Counter

from walkmult import build_template, enumerate_multiplets
from walkmult.generators import TEMPLATES


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=3)
    ap.add_argument("--max-size", type=int, default=3)
    args = ap.parse_args()

    for name in TEMPLATES:
        counts = Counter()
        uniform = 0
        total = 0
        for seed in range(args.samples):
            inst = build_template(name, seed=seed)
            found = enumerate_multiplets(inst.graph, inst.pair,
                                         max_cardinality=args.max_size)
            for m in found:
                counts[(m.cardinality, m.parity)] += 1
                uniform += m.uniform
                total += 1
        cells = "  ".join(
            f"size{s}/{'+' if p == 1 else '-' if p == -1 else '±'}:{c}"
            for (s, p), c in sorted(counts.items(),
                                    key=lambda kv: (kv[0][0], str(kv[0][1])))
        )
        print(f"{name:12s} total={total:3d} uniform={uniform:3d}  {cells}")


if __name__ == "__main__":
    main()
