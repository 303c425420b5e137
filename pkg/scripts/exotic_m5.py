"""Emit the inequality list of the side-length cone for m = 5, n = 3.

Writes the system JSON and a certificate file, and prints each functional
with its coefficient row over (a1, b1, a2, b2, a3, b3).
"""

import argparse
import json
from pathlib import Path

from rank2polygons.cli import dumps
from rank2polygons.cone import build_cone, irredundant
from rank2polygons.functionals import enumerate_Bn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()

    system = enumerate_Bn(args.m, args.n)
    cone = build_cone(system)
    args.out.mkdir(parents=True, exist_ok=True)
    rows = []
    for L, row in zip(system.functionals, cone.functional_rows()):
        ok, cert = irredundant(cone, L)
        rows.append({"functional": list(L.indices), "irredundant": ok, "certificate": cert.to_json()})
        coeffs = "  ".join(f"{float(c):+.6f}" for c in row.coeffs)
        print(f"{str(list(L.indices)):<12} {'irredundant' if ok else 'REDUNDANT':<12} {coeffs}")
    (args.out / f"B{args.n}_m{args.m}.json").write_text(dumps(system.to_json()))
    (args.out / f"B{args.n}_m{args.m}_certificates.json").write_text(
        dumps({"m": args.m, "n": args.n, "rows": rows}))
    print(f"{sum(r['irredundant'] for r in rows)}/{len(rows)} irredundant; files in {args.out}/")


if __name__ == "__main__":
    main()
