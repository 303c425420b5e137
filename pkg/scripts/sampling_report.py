"""Oracle sampling across several dihedral orders, with per-functional margins."""

import argparse
import json
import time

from rank2polygons.cli import dumps
from rank2polygons.functionals import enumerate_Bn
from rank2polygons.oracles import apartment_sample, check_triples, hermitian_sample


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ms", type=int, nargs="+", default=[3, 4, 5, 6, 8])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="print full reports as JSON")
    args = ap.parse_args()

    print(f"# seed={args.seed} count={args.count} n={args.n}")
    for m in args.ms:
        t0 = time.perf_counter()
        rep = apartment_sample(m, args.n, args.seed, args.count)
        sat = sum(rep.zeros.values())
        print(f"apartment m={m}: violations={len(rep.violations)} exact saturations={sat} "
              f"closest margin={max(rep.worst.values()):.3g} ({time.perf_counter() - t0:.1f}s)")
        if args.json:
            print(dumps(rep.to_json()))
    if args.n == 3:
        rep = check_triples(enumerate_Bn(3, 3), hermitian_sample(args.seed, args.count), seed=args.seed)
        print(f"hermitian m=3: violations={len(rep.violations)} "
              f"closest margin={max(rep.worst.values()):.3g}")
        for label, v in sorted(rep.worst.items()):
            print(f"  {label:<12} {v:.6g}")


if __name__ == "__main__":
    main()
