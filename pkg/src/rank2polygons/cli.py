"""Command line: ``rank2polygons <command> ...``.

Exit codes: 0 success, 1 a negative verdict (outside point, redundant row,
violation, failed identity, non-billiard input), 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .cone import build_cone, irredundant, member
from .coxeter import WeylElement, identity
from .errors import DomainError, ResourceError, UsageError
from .exactreal import CycloReal, FieldContext, field_new
from .functionals import DeltaVector, InequalitySystem, enumerate_Bn, enumerate_Bn_weak
from .oracles import apartment_sample, check_triples, hermitian_sample, triples_to_csv
from .polygonlab import (
    ApartmentPolygon,
    BilliardPath,
    open_polygon,
    side_chambers,
    sigma,
    verify_straightening,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 0


@dataclass
class RunConfig:
    command: str
    m: int | None = None
    n: int | None = None
    seed: int = DEFAULT_SEED
    count: int = 1
    input: Path | None = None
    output: Path | None = None
    fmt: str = "text"

    def validate(self) -> None:
        if self.m is not None and self.m < 3:
            raise UsageError(f"m must be >= 3, got {self.m}")
        if self.n is not None and self.n < 2:
            raise UsageError(f"n must be >= 2, got {self.n}")
        if self.count < 1:
            raise UsageError(f"count must be >= 1, got {self.count}")


# --- formatting -----------------------------------------------------------------

def fmt_value(x) -> str:
    if isinstance(x, CycloReal):
        return f"{float(x):.12g} (exact)"
    return f"{float(x):.12g}"


_FLAT_LIST = re.compile(r"\[\s*([^\[\]{}]*?)\s*\]")


def dumps(data) -> str:
    """Indented JSON with innermost scalar lists kept on one line."""
    text = json.dumps(data, indent=2)
    return _FLAT_LIST.sub(lambda mt: "[" + re.sub(r",\s+", ", ", mt.group(1)) + "]", text) + "\n"


def dump_json(data, path: Path | None, out) -> None:
    text = dumps(data)
    if path is None:
        out.write(text)
    else:
        path.write_text(text)


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def parse_scalar(ctx: FieldContext, v) -> CycloReal:
    """An int, a fraction string, a coefficient list, or a {"coeffs": ...} object."""
    if isinstance(v, (int, str)):
        return ctx.coerce(Fraction(v))
    if isinstance(v, float):
        raise UsageError("floats are not exact; write the value as a fraction string")
    return CycloReal.from_json(ctx, v)


def parse_point(data: dict, m: int, n: int) -> list[DeltaVector]:
    if int(data.get("m", m)) != m:
        raise UsageError(f"point is for m={data['m']}, system for m={m}")
    ctx = field_new(m)
    sides = data["point"] if isinstance(data, dict) else data
    if len(sides) != n:
        raise UsageError(f"point has {len(sides)} sides, system has n={n}")
    out = []
    for s in sides:
        a, b = (s["a"], s["b"]) if isinstance(s, dict) else s
        out.append(DeltaVector(parse_scalar(ctx, a), parse_scalar(ctx, b)))
    return out


# --- commands -------------------------------------------------------------------

def cmd_inequalities(args, out) -> int:
    cfg = RunConfig("inequalities", args.m, args.n, output=args.out)
    cfg.validate()
    system = enumerate_Bn_weak(args.m, args.n) if args.weak else enumerate_Bn(args.m, args.n)
    data = system.to_json()
    if args.out is not None:
        dump_json(data, args.out, out)
    counts = system.count_by_parity()
    out.write(f"m={args.m} n={args.n} provenance={system.provenance}: {len(system)} functionals "
              f"(parity 0: {counts.get(0, 0)}, parity 1: {counts.get(1, 0)})\n")
    if args.out is None:
        dump_json(data, None, out)
    return EXIT_OK


def _load_system(path) -> InequalitySystem:
    try:
        return InequalitySystem.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed system file {path}: {exc}") from exc


def cmd_check(args, out) -> int:
    system = _load_system(args.system)
    try:
        point = parse_point(_load_json(args.point), system.m, system.n)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise UsageError(f"malformed point file {args.point}: {exc}") from exc
    cone = build_cone(system)
    mem = member(cone, point)
    if args.format == "json":
        dump_json({"status": mem.status, "active": mem.active, "violated": mem.violated,
                   "values": {k: v.to_json() for k, v in mem.values.items()}}, None, out)
    else:
        out.write(f"{mem.status}\n")
        for r in cone.rows:
            tag = "violated" if r.label in mem.violated else "active" if r.label in mem.active else ""
            out.write(f"  {r.label:<16} {fmt_value(mem.values[r.label]):<32} {tag}\n".rstrip() + "\n")
        if mem.violated:
            out.write("violated rows: " + ", ".join(mem.violated) + "\n")
    return EXIT_NEGATIVE if mem.status == "outside" else EXIT_OK


def cmd_irredundant(args, out) -> int:
    system = _load_system(args.system)
    cone = build_cone(system)
    certs = []
    all_ok = True
    for L in system.functionals:
        ok, cert = irredundant(cone, L)
        all_ok &= ok
        certs.append({"functional": list(L.indices), "irredundant": ok, "certificate": cert.to_json()})
        out.write(f"{'irredundant' if ok else 'REDUNDANT':<12} L{list(L.indices)} "
                  f"({'witness' if ok else 'Farkas'} certificate verified)\n")
    n_ok = sum(c["irredundant"] for c in certs)
    out.write(f"{n_ok}/{len(certs)} rows irredundant\n")
    if args.out is not None:
        dump_json({"m": system.m, "n": system.n, "rows": certs}, args.out, out)
    return EXIT_OK if all_ok else EXIT_NEGATIVE


def cmd_sample(args, out) -> int:
    cfg = RunConfig("sample", args.m, args.n, args.seed, args.count, output=args.out)
    cfg.validate()
    if args.oracle == "hermitian":
        if (args.m, args.n) != (3, 3):
            raise UsageError("the hermitian oracle exists only for m=3, n=3")
        triples = hermitian_sample(args.seed, args.count)
        report = check_triples(enumerate_Bn(3, 3), triples, seed=args.seed)
        if args.csv is not None:
            args.csv.write_text(triples_to_csv(triples))
    else:
        report = apartment_sample(args.m, args.n, args.seed, args.count)
    out.write(f"# oracle={report.oracle} m={report.m} n={report.n} seed={report.seed} "
              f"count={report.count} {'exact' if report.exact else f'tol={report.tolerance:g}'}\n")
    out.write(f"violations: {len(report.violations)}\n")
    for label in sorted(report.worst):
        zeros = report.zeros.get(label, 0)
        out.write(f"  {label:<16} worst {report.worst[label]:.12g}"
                  + (f"  saturated {zeros}x" if zeros else "") + "\n")
    if args.out is not None:
        dump_json(report.to_json(), args.out, out)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def _vec_text(v) -> str:
    return f"({float(v[0]):.12g}, {float(v[1]):.12g})"


def cmd_fold(args, out) -> int:
    data = _load_json(args.path)
    try:
        path = BilliardPath.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed billiard path: {exc}") from exc
    try:
        res = verify_straightening(path)
    except DomainError as exc:
        out.write(f"not a billiard path: {exc}\n")
        if exc.index is not None:
            out.write(f"offending break index: {exc.index}\n")
        return EXIT_NEGATIVE
    ok = res["straightened"] and res["mu_product"] and res["holonomy"]
    report = {
        "breaks": res["breaks"],
        "holonomy": res["holonomy_element"].to_json(),
        "openedEndpoint": [c.to_json() for c in res["opened_endpoint"]],
        "mus": [mu.to_json() for mu in res["mus"]],
        "identities": {k: res[k] for k in ("straightened", "mu_product", "holonomy")},
    }
    if args.format == "json":
        dump_json(report, None, out)
    else:
        out.write(f"breaks at: {res['breaks']}\n")
        out.write(f"holonomy: {res['holonomy_element']!r}\n")
        out.write(f"opened endpoint: {_vec_text(res['opened_endpoint'])} (exact)\n")
        for k in ("straightened", "mu_product", "holonomy"):
            out.write(f"{k}: {'pass' if res[k] else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_open(args, out) -> int:
    data = _load_json(args.path)
    try:
        poly = ApartmentPolygon.from_json(data)
        transitions = [WeylElement.from_json(poly.m, t) for t in data.get("transitions", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed polygon: {exc}") from exc
    if not transitions:
        transitions = [identity(poly.m)] * poly.n
    if poly.degenerate_sides():
        out.write(f"degenerate sides: {poly.degenerate_sides()}\n")
    chambers = [c if c is not None else 0 for c in side_chambers(poly)]
    sides = list(zip(sigma(poly), chambers))
    path, hol = open_polygon(sides, transitions, start=poly.vertices[0])
    closed = path[-1] == path[0]
    if args.format == "json":
        dump_json({"path": [[c.to_json() for c in v] for v in path], "holonomy": hol.to_json(),
                   "closed": closed}, None, out)
    else:
        for v in path:
            out.write(f"  {_vec_text(v)}\n")
        out.write(f"holonomy: {hol!r}\nclosed: {closed}\n")
    # with trivial transitions the opening must give the polygon back
    if all(t.is_identity() for t in transitions):
        return EXIT_OK if closed and tuple(path[:-1]) == poly.vertices else EXIT_NEGATIVE
    return EXIT_OK


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rank2polygons",
                                description="Side-length cones of polygons in rank-2 buildings.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("inequalities", help="enumerate the boundary functionals")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    g = q.add_mutually_exclusive_group()
    g.add_argument("--weak", action="store_true", help="antipodal-pair enumeration")
    g.add_argument("--full", action="store_true", help="covering-property enumeration (default)")
    q.add_argument("--out", type=Path)
    q.set_defaults(func=cmd_inequalities)

    q = sub.add_parser("check", help="classify a point against a system")
    q.add_argument("--system", type=Path, required=True)
    q.add_argument("--point", type=Path, required=True)
    q.add_argument("--format", choices=("text", "json"), default="text")
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("irredundant", help="certify every row of a system")
    q.add_argument("--system", type=Path, required=True)
    q.add_argument("--out", type=Path, help="write the certificates here")
    q.set_defaults(func=cmd_irredundant)

    q = sub.add_parser("sample", help="oracle sampling")
    q.add_argument("--oracle", choices=("hermitian", "apartment"), required=True)
    q.add_argument("--m", type=int, default=3)
    q.add_argument("--n", type=int, default=3)
    q.add_argument("--seed", type=int, default=DEFAULT_SEED)
    q.add_argument("--count", type=int, default=1000)
    q.add_argument("--out", type=Path)
    q.add_argument("--csv", type=Path, help="hermitian only: dump the spectra")
    q.set_defaults(func=cmd_sample)

    for name, func, text in (("fold", cmd_fold, "straighten a billiard path"),
                             ("open", cmd_open, "open a polygon along transitions")):
        q = sub.add_parser(name, help=text)
        q.add_argument("--path", type=Path, required=True)
        q.add_argument("--format", choices=("text", "json"), default="text")
        q.set_defaults(func=func)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, DomainError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
