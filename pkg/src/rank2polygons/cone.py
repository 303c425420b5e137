"""The side-length cone as an exact H-representation.

Variables are (a_1, b_1, ..., a_n, b_n); every row reads ``coeffs . x <= 0``.
Functional rows come from an :class:`InequalitySystem`, chamber rows encode
a_i >= 0 and b_i >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, ResourceError, UsageError
from .exactreal import CycloReal, FieldContext, field_new, sign
from .functionals import DeltaVector, Functional, InequalitySystem
from .lp import LPCertificate, Row, lp_feasible, verify_certificate

__all__ = [
    "ConeRow",
    "ConeSystem",
    "Membership",
    "build_cone",
    "member",
    "irredundant",
    "irredundancy_rows",
    "fm_eliminate",
    "cone_from_rays",
    "extreme_rays",
    "flatten_point",
    "MAX_RAY_DIM",
]

MAX_RAY_DIM = 8


@dataclass(frozen=True)
class ConeRow:
    label: str
    coeffs: tuple[CycloReal, ...]
    kind: str = "functional"  # "functional" | "chamber" | "derived"
    functional: Functional | None = None

    def value(self, x: Sequence[CycloReal]) -> CycloReal:
        total = self.coeffs[0].ctx.zero()
        for c, v in zip(self.coeffs, x):
            if not c.is_zero():
                total = total + c * v
        return total

    def to_json(self) -> dict:
        out = {"label": self.label, "kind": self.kind, "coeffs": [c.to_json() for c in self.coeffs]}
        if self.functional is not None:
            out["tuple"] = list(self.functional.indices)
        return out


@dataclass(frozen=True)
class ConeSystem:
    """Homogeneous system {x : row . x <= 0 for all rows}."""

    ctx: FieldContext
    dim: int
    rows: tuple[ConeRow, ...]
    variables: tuple[str, ...]
    n: int | None = None

    def __post_init__(self):
        for r in self.rows:
            if len(r.coeffs) != self.dim:
                raise UsageError(f"row {r.label} has {len(r.coeffs)} coefficients, expected {self.dim}")

    @property
    def m(self) -> int:
        return self.ctx.m

    def functional_rows(self) -> list[ConeRow]:
        return [r for r in self.rows if r.kind == "functional"]

    def row_for(self, L: Functional) -> ConeRow:
        for r in self.rows:
            if r.functional == L:
                return r
        raise UsageError(f"functional {L.indices} is not a row of this cone")

    def to_json(self) -> dict:
        return {"m": self.m, "dim": self.dim, "variables": list(self.variables),
                "rows": [r.to_json() for r in self.rows]}


@dataclass
class Membership:
    status: str  # "interior" | "boundary" | "outside"
    active: list[str] = field(default_factory=list)
    violated: list[str] = field(default_factory=list)
    values: dict[str, CycloReal] = field(default_factory=dict)


def _var_names(n: int) -> tuple[str, ...]:
    return tuple(f"{c}{i + 1}" for i in range(n) for c in ("a", "b"))


def build_cone(system: InequalitySystem) -> ConeSystem:
    """Functional rows in system order followed by the 2n chamber rows."""
    ctx = field_new(system.m)
    dim = 2 * system.n
    rows = [ConeRow("L" + str(list(L.indices)), tuple(L.coefficients()), "functional", L)
            for L in system.functionals]
    names = _var_names(system.n)
    for i in range(dim):
        coeffs = tuple(-ctx.one() if k == i else ctx.zero() for k in range(dim))
        rows.append(ConeRow(f"{names[i]}>=0", coeffs, "chamber"))
    return ConeSystem(ctx, dim, tuple(rows), names, system.n)


def flatten_point(cone: ConeSystem, s) -> list[CycloReal]:
    """Accept n DeltaVectors, n (a, b) pairs, or a flat coordinate list."""
    flat: list = []
    for v in s:
        if isinstance(v, DeltaVector):
            flat.extend((v.a, v.b))
        elif isinstance(v, (tuple, list)):
            flat.extend(v)
        else:
            flat.append(v)
    if len(flat) != cone.dim:
        raise UsageError(f"point has {len(flat)} coordinates, cone has dimension {cone.dim}")
    return [cone.ctx.coerce(v) for v in flat]


def member(cone: ConeSystem, s) -> Membership:
    """Exact classification of ``s`` against every row."""
    x = flatten_point(cone, s)
    out = Membership("interior")
    for r in cone.rows:
        v = r.value(x)
        out.values[r.label] = v
        sg = sign(v)
        if sg > 0:
            out.violated.append(r.label)
        elif sg == 0:
            out.active.append(r.label)
    if out.violated:
        out.status = "outside"
    elif out.active:
        out.status = "boundary"
    return out


def irredundancy_rows(cone: ConeSystem, L: Functional) -> list[Row]:
    """{L = 0, L' <= -1 for the other functional rows, every coordinate >= 1}."""
    target = cone.row_for(L)
    rows = [Row(target.coeffs, "=", 0)]
    for r in cone.functional_rows():
        if r is not target:
            rows.append(Row(r.coeffs, "<=", -1))
    ctx = cone.ctx
    for i in range(cone.dim):
        rows.append(Row(tuple(ctx.one() if k == i else ctx.zero() for k in range(cone.dim)), ">=", 1))
    return rows


def irredundant(cone: ConeSystem, L: Functional) -> tuple[bool, LPCertificate]:
    """Whether ``L`` can be the only tight functional row at a regular point."""
    rows = irredundancy_rows(cone, L)
    cert = lp_feasible(rows, cone.ctx)
    return cert.feasible, cert


# --- Fourier-Motzkin --------------------------------------------------------

def _normalise_row(coeffs: Sequence[CycloReal]) -> tuple[CycloReal, ...] | None:
    """Scale so the first nonzero coefficient is +-1; None for the zero row."""
    for c in coeffs:
        if not c.is_zero():
            scale = abs(c).inverse()
            return tuple(v * scale for v in coeffs)
    return None


def _prune(ctx: FieldContext, rows: list[tuple[CycloReal, ...]]) -> list[tuple[CycloReal, ...]]:
    """Drop rows implied by the others (homogeneous: {others <= 0, r >= 1} empty)."""
    kept = list(dict.fromkeys(rows))
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1:]
        if others:
            lp = [Row(r, "<=", 0) for r in others] + [Row(kept[i], ">=", 1)]
            if not lp_feasible(lp, ctx).feasible:
                kept.pop(i)
                continue
        else:
            # a lone row is redundant only if it is identically zero
            pass
        i += 1
    return kept


def fm_eliminate(cone: ConeSystem, keep: Sequence[int], prune: bool = True) -> ConeSystem:
    """Project onto the coordinates ``keep`` by Fourier-Motzkin elimination."""
    keep = sorted(set(keep))
    if not keep:
        raise UsageError("keep at least one variable")
    if any(k < 0 or k >= cone.dim for k in keep):
        raise UsageError(f"variable index out of range: {keep}")
    ctx = cone.ctx
    rows = [r for r in (_normalise_row(r.coeffs) for r in cone.rows) if r is not None]
    rows = list(dict.fromkeys(rows))
    for var in range(cone.dim):
        if var in keep:
            continue
        pos, neg, zero = [], [], []
        for r in rows:
            s = sign(r[var])
            (pos if s > 0 else neg if s < 0 else zero).append(r)
        combined = list(zero)
        for p in pos:
            for q in neg:
                cp, cq = p[var], -q[var]
                new = _normalise_row([a * cq + b * cp for a, b in zip(p, q)])
                if new is not None:
                    combined.append(new)
        rows = list(dict.fromkeys(combined))
        if prune:
            rows = _prune(ctx, rows)
    projected = []
    for k, r in enumerate(rows):
        coeffs = tuple(r[v] for v in keep)
        if all(c.is_zero() for c in coeffs):
            continue
        projected.append(ConeRow(f"fm{k}", coeffs, "derived"))
    names = tuple(cone.variables[v] for v in keep)
    return ConeSystem(ctx, len(keep), tuple(projected), names)


def cone_from_rays(ctx: FieldContext, rays: Sequence[Sequence[CycloReal]]) -> ConeSystem:
    """H-representation of cone(rays), by eliminating lambda from {x = R lambda, lambda >= 0}."""
    if not rays:
        raise UsageError("need at least one ray")
    d, k = len(rays[0]), len(rays)
    zero, one = ctx.zero(), ctx.one()
    rows = []
    for i in range(d):
        eq = tuple([one if j == i else zero for j in range(d)] + [-ctx.coerce(r[i]) for r in rays])
        rows.append(ConeRow(f"x{i + 1}<=", eq, "derived"))
        rows.append(ConeRow(f"x{i + 1}>=", tuple(-c for c in eq), "derived"))
    for r in range(k):
        rows.append(ConeRow(f"lambda{r + 1}>=0",
                            tuple(-one if j == d + r else zero for j in range(d + k)), "derived"))
    names = tuple(f"x{i + 1}" for i in range(d)) + tuple(f"lambda{r + 1}" for r in range(k))
    lifted = ConeSystem(ctx, d + k, tuple(rows), names)
    return fm_eliminate(lifted, range(d))


# --- double description -------------------------------------------------------

def _dot(a, b):
    total = a[0] * b[0]
    for x, y in zip(a[1:], b[1:]):
        if not x.is_zero() and not y.is_zero():
            total = total + x * y
    return total


def extreme_rays(cone: ConeSystem) -> list[tuple[CycloReal, ...]]:
    """Generators of the cone by the double description method.

    For a pointed cone these are exactly the extreme rays, each scaled so its
    first nonzero coordinate is +-1.  A nontrivial lineality space is returned
    as the pairs +-l of its basis vectors.
    """
    d = cone.dim
    if d > MAX_RAY_DIM:
        raise ResourceError(f"double description limited to dimension {MAX_RAY_DIM}, got {d}")
    ctx = cone.ctx
    zero, one = ctx.zero(), ctx.one()
    lineality = [tuple(one if i == k else zero for i in range(d)) for k in range(d)]
    rays: list[tuple[tuple[CycloReal, ...], int]] = []  # (vector, zero-set bitmask)
    for idx, row in enumerate(cone.rows):
        a = row.coeffs
        bit = 1 << idx
        hit = next((k for k, l in enumerate(lineality) if not _dot(a, l).is_zero()), None)
        if hit is not None:
            l = lineality.pop(hit)
            al = _dot(a, l)
            lineality = [tuple(x - y * (_dot(a, v) / al) for x, y in zip(v, l)) for v in lineality]
            new_rays = []
            for r, z in rays:
                ar = _dot(a, r)
                if not ar.is_zero():
                    r = tuple(x - y * (ar / al) for x, y in zip(r, l))
                new_rays.append((r, z | bit))
            direction = tuple(-x for x in l) if sign(al) > 0 else l
            # tight on every earlier row, which all vanish on the lineality space
            new_rays.append((direction, bit - 1))
            rays = new_rays
            continue
        values = [(r, z, sign(_dot(a, r))) for r, z in rays]
        plus = [(r, z) for r, z, s in values if s > 0]
        minus = [(r, z) for r, z, s in values if s < 0]
        keep = [(r, z | bit) if s == 0 else (r, z) for r, z, s in values if s <= 0]
        for rp, zp in plus:
            ap = _dot(a, rp)
            for rn, zn in minus:
                common = zp & zn
                adjacent = all((zo & common) != common for ro, zo in rays
                               if ro is not rp and ro is not rn)
                if not adjacent:
                    continue
                an = _dot(a, rn)
                new = tuple(x * ap - y * an for x, y in zip(rn, rp))
                keep.append((new, common | bit))
        rays = keep
    out = [r for r, _ in rays]
    for l in lineality:
        out.extend([l, tuple(-x for x in l)])
    normed = []
    for r in out:
        n = _normalise_row(r)
        if n is not None and n not in normed:
            normed.append(n)
    return normed
