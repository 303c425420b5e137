"""Polygons and billiard paths in the model apartment.

The affine group acting on the apartment is the Weyl group extended by all
translations, so every point has stabiliser W and the length of a segment is
just the chamber representative of its displacement vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Sequence

from .coxeter import (
    ApartmentModel,
    WeylElement,
    act,
    all_elements,
    apartment,
    chamber_element,
    identity,
)
from .errors import DomainError, UsageError
from .exactreal import CycloReal, FieldContext, field_new, sign
from .functionals import DeltaVector, eval_l

__all__ = [
    "ApartmentPolygon",
    "BilliardPath",
    "AffineIsometry",
    "StraightenResult",
    "point",
    "sigma_side",
    "sigma",
    "reversal",
    "open_polygon",
    "straighten",
    "verify_straightening",
    "fold_onto_chamber",
    "fold_pieces",
    "holonomy_fixes_vertex",
    "aligned_functional_value",
    "side_chambers",
    "side_functional_index",
    "side_consistency",
]

Vec = tuple[CycloReal, CycloReal]


def point(m: int, p, q) -> Vec:
    ctx = field_new(m)
    return (ctx.coerce(p), ctx.coerce(q))


def _is_zero(v: Vec) -> bool:
    return v[0].is_zero() and v[1].is_zero()


def _vec_json(v: Vec) -> list:
    return [v[0].to_json()["coeffs"], v[1].to_json()["coeffs"]]


def _vec_from_json(ctx: FieldContext, data) -> Vec:
    return (ctx.from_coeffs(data[0]), ctx.from_coeffs(data[1]))


@dataclass(frozen=True)
class ApartmentPolygon:
    """Closed polygon given by its vertices x_0, ..., x_{n-1}."""

    m: int
    vertices: tuple[Vec, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(tuple(v) for v in self.vertices))
        if len(self.vertices) < 2:
            raise UsageError("a polygon needs at least two vertices")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def sides(self) -> list[Vec]:
        A = apartment(self.m)
        vs = self.vertices
        return [A.sub(vs[(i + 1) % self.n], vs[i]) for i in range(self.n)]

    def degenerate_sides(self) -> list[int]:
        return [i for i, v in enumerate(self.sides()) if _is_zero(v)]

    def to_json(self) -> dict:
        return {"m": self.m, "vertices": [_vec_json(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "ApartmentPolygon":
        m = int(data["m"])
        ctx = field_new(m)
        return cls(m, tuple(_vec_from_json(ctx, v) for v in data["vertices"]))


@dataclass(frozen=True)
class BilliardPath:
    """Apex x_0 and the broken side y_1, ..., y_k of a folded triangle."""

    m: int
    apex: Vec
    points: tuple[Vec, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(tuple(v) for v in self.points))
        object.__setattr__(self, "apex", tuple(self.apex))
        if len(self.points) < 2:
            raise UsageError("a billiard path needs at least two points")

    def pieces(self) -> list[Vec]:
        A = apartment(self.m)
        return [A.sub(self.points[i + 1], self.points[i]) for i in range(len(self.points) - 1)]

    def to_json(self) -> dict:
        return {"m": self.m, "apex": _vec_json(self.apex),
                "vertices": [_vec_json(v) for v in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "BilliardPath":
        m = int(data["m"])
        ctx = field_new(m)
        return cls(m, _vec_from_json(ctx, data["apex"]),
                   tuple(_vec_from_json(ctx, v) for v in data["vertices"]))


@dataclass(frozen=True)
class AffineIsometry:
    """x -> g(x) + t."""

    linear: WeylElement
    translation: Vec

    @classmethod
    def fixing(cls, g: WeylElement, y: Vec) -> "AffineIsometry":
        """The isometry with linear part g that fixes y."""
        A = apartment(g.m)
        return cls(g, A.sub(y, A.apply(g, y)))

    @classmethod
    def identity(cls, m: int) -> "AffineIsometry":
        return cls(identity(m), apartment(m).zero())

    def __call__(self, x: Vec) -> Vec:
        A = apartment(self.linear.m)
        return A.add(A.apply(self.linear, x), self.translation)

    def __mul__(self, other: "AffineIsometry") -> "AffineIsometry":
        A = apartment(self.linear.m)
        return AffineIsometry(self.linear * other.linear,
                              A.add(A.apply(self.linear, other.translation), self.translation))

    def inverse(self) -> "AffineIsometry":
        A = apartment(self.linear.m)
        g = self.linear.inverse()
        t = A.apply(g, self.translation)
        return AffineIsometry(g, (-t[0], -t[1]))

    def to_json(self) -> dict:
        return {"linear": self.linear.to_json(), "translation": _vec_json(self.translation)}


# --- side lengths --------------------------------------------------------------

def _delta_of(A: ApartmentModel, v: Vec) -> tuple[WeylElement, DeltaVector]:
    omega, s = A.to_delta(v)
    return omega, DeltaVector(s[0], s[1])


def sigma_side(m: int, x: Vec, y: Vec) -> DeltaVector:
    """Chamber representative of the displacement y - x."""
    A = apartment(m)
    v = A.sub(y, x)
    return _delta_of(A, v)[1]


def sigma(p: ApartmentPolygon) -> list[DeltaVector]:
    A = apartment(p.m)
    return [_delta_of(A, v)[1] for v in p.sides()]


def side_chambers(p: ApartmentPolygon) -> list[int | None]:
    """Chamber index of every side (None for degenerate sides)."""
    A = apartment(p.m)
    return [None if _is_zero(v) else A.chamber_of(v) for v in p.sides()]


def reversal(s: DeltaVector) -> DeltaVector:
    """Length of the reversed segment: the chamber representative of -s."""
    A = apartment(s.ctx.m)
    return _delta_of(A, (-s.a, -s.b))[1]


# --- opening -----------------------------------------------------------------

def open_polygon(sides: Sequence[tuple[DeltaVector, int]], transitions: Sequence[WeylElement],
                 start: Vec | None = None) -> tuple[list[Vec], WeylElement]:
    """Lay the sides down one after another in a single apartment.

    Side i is the vector omega_{c_i}(s_i) transported by t_0 ... t_{i-1};
    ``transitions[i]`` sits at the end vertex of side i.  Returns the polygonal
    path x'_0, ..., x'_n and the holonomy t_0 ... t_{n-1}.
    """
    if len(sides) != len(transitions):
        raise UsageError(f"{len(sides)} sides but {len(transitions)} transitions")
    if not sides:
        raise UsageError("no sides")
    m = sides[0][0].ctx.m
    A = apartment(m)
    x = start if start is not None else A.zero()
    path = [x]
    h = identity(m)
    for (s, c), t in zip(sides, transitions):
        v = A.apply(chamber_element(m, c), s.as_vec())
        x = A.add(x, A.apply(h, v))
        path.append(x)
        h = h * t
    return path, h


# --- folding / straightening ---------------------------------------------------

def _proportional(A: ApartmentModel, v: Vec, w: Vec) -> bool:
    """True iff w is a positive multiple of v (both nonzero)."""
    return A.det(v, w).is_zero() and sign(A.inner(v, w)) > 0


def _straightening_linear(A: ApartmentModel, incoming: Vec, outgoing: Vec) -> WeylElement | None:
    """Least g in W with g(outgoing) a positive multiple of incoming."""
    for g in sorted(all_elements(A.m)):
        if _proportional(A, incoming, A.apply(g, outgoing)):
            return g
    return None


@dataclass
class StraightenResult:
    straightened_endpoint: Vec  # tip of the broken side laid straight from y_1
    mus: list[AffineIsometry]  # mu_0, mu_1, ..., mu_k
    holonomy: WeylElement  # linear part of mu_0^-1 o mu_k^-1 o ... o mu_1^-1
    opened_endpoint: Vec  # mu_1 o ... o mu_k o mu_0 applied to y_1
    breaks: list[int] = field(default_factory=list)  # positions (into points) of true breaks


def straighten(path: BilliardPath) -> StraightenResult:
    """Straightening isometries of a billiard triangle.

    mu_i (1 < i < k, 1-based as y_i) fixes y_i and turns the outgoing piece
    onto the continuation of the incoming one.  The corner isometries mu_0,
    mu_1, mu_k are the identity: in the model apartment the sides meeting at
    a corner already lie in one apartment.
    """
    m = path.m
    A = apartment(m)
    pts = path.points
    k = len(pts)
    for i, v in enumerate(path.pieces()):
        if _is_zero(v):
            raise DomainError(f"degenerate piece at index {i}", index=i)
    mus = {0: AffineIsometry.identity(m), 1: AffineIsometry.identity(m),
           k: AffineIsometry.identity(m)}
    breaks = []
    for i in range(1, k - 1):  # 0-based interior points y_2 .. y_{k-1}
        incoming = A.sub(pts[i], pts[i - 1])
        outgoing = A.sub(pts[i + 1], pts[i])
        g = _straightening_linear(A, incoming, outgoing)
        if g is None:
            raise DomainError(f"break {i} is not a billiard break (directions not W-antipodal)",
                              index=i)
        if not g.is_identity():
            breaks.append(i)
        mus[i + 1] = AffineIsometry.fixing(g, pts[i])
    order = [mus[i] for i in range(k + 1)]
    # mu_1 o mu_2 o ... o mu_k o mu_0
    composed = AffineIsometry.identity(m)
    for i in range(1, k + 1):
        composed = composed * order[i]
    composed = composed * order[0]
    # straightened tip: mu_2 o ... o mu_{k-1} (y_k)
    inner = AffineIsometry.identity(m)
    for i in range(2, k):
        inner = inner * order[i]
    back = order[0].inverse()
    for i in range(k, 0, -1):
        back = back * order[i].inverse()
    return StraightenResult(
        straightened_endpoint=inner(pts[-1]),
        mus=order,
        holonomy=back.linear,
        opened_endpoint=composed(pts[0]),
        breaks=breaks,
    )


def verify_straightening(path: BilliardPath) -> dict:
    """Check both composed-isometry identities against an independent opening.

    The opening is built from side lengths and chambers only: the straightened
    side keeps the chamber of the first piece, the transition at its far end
    is the Weyl element carrying the last piece's chamber onto the first
    piece's chamber, and the remaining two sides are laid down with it.
    For singular pieces that chamber element is not determined by the
    lengths, so the straightening's own linear part is used instead and the
    check reduces to a consistency check of the opening.
    """
    m = path.m
    A = apartment(m)
    res = straighten(path)
    pieces = path.pieces()
    regular = _all_regular(A, pieces)
    if regular:
        first_omega, _ = A.to_delta(pieces[0])
        last_omega, _ = A.to_delta(pieces[-1])
        transport = first_omega * last_omega.inverse()
    else:
        transport = res.holonomy.inverse()
    total = None
    for v in pieces:
        d = _delta_of(A, v)[1]
        total = d if total is None else total + d
    y1, yk, x0 = path.points[0], path.points[-1], path.apex
    side2 = (total, A.chamber_of(pieces[0]))
    sides = [side2]
    for a, b in ((yk, x0), (x0, y1)):
        v = A.sub(b, a)
        if _is_zero(v):
            raise DomainError("degenerate triangle side")
        sides.append((_delta_of(A, v)[1], A.chamber_of(v)))
    opened, hol = open_polygon(sides, [transport, identity(m), identity(m)], start=y1)
    straight_ok = opened[1] == res.straightened_endpoint
    product_ok = opened[-1] == res.opened_endpoint
    # the holonomy undoes the transport on the last piece direction; for
    # regular pieces the transport is unique and the elements must agree
    holonomy_ok = A.apply(res.holonomy, A.apply(transport, pieces[-1])) == pieces[-1]
    if regular:
        holonomy_ok = holonomy_ok and res.holonomy == hol.inverse()
    return {
        "regular": regular,
        "straightened": straight_ok,
        "mu_product": product_ok,
        "holonomy": holonomy_ok,
        "holonomy_element": res.holonomy,
        "opened_endpoint": res.opened_endpoint,
        "mus": res.mus,
        "breaks": res.breaks,
    }


def _all_regular(A: ApartmentModel, pieces: Sequence[Vec]) -> bool:
    return all(_delta_of(A, v)[1].is_regular() for v in pieces)


def _wall_cuts(A: ApartmentModel, P: Vec, d: Vec) -> list[CycloReal]:
    """Parameters 0 = t_0 < ... < t_r = 1 where P + t d crosses a wall."""
    ctx = A.ctx
    cuts = {ctx.zero(), ctx.one()}
    for j in range(A.m):
        e = A.unit_vector(j)
        den = A.det(d, e)
        if den.is_zero():
            continue
        t = -A.det(P, e) / den
        if sign(t) > 0 and sign(t - 1) < 0:
            cuts.add(t)
    return sorted(cuts, key=cmp_to_key(lambda a, b: sign(a - b)))


def fold_pieces(path: Sequence[Vec], m: int | None = None) -> list[list[tuple[Vec, Vec]]]:
    """Accordion-fold every segment of ``path`` onto the model chamber.

    Each segment is cut where it crosses a wall through the origin and each
    piece is moved by the Weyl element carrying its chamber back to the model
    chamber.  Returns the folded (start, end) pairs per segment.
    """
    if len(path) < 2:
        return []
    if m is None:
        m = path[0][0].ctx.m
    A = apartment(m)
    out = []
    for P, Q in zip(path[:-1], path[1:]):
        d = A.sub(Q, P)
        pieces = []
        if _is_zero(d):
            out.append(pieces)
            continue
        cuts = _wall_cuts(A, P, d)
        for t0, t1 in zip(cuts, cuts[1:]):
            a = A.add(P, A.scale(d, t0))
            b = A.add(P, A.scale(d, t1))
            mid = A.add(a, b)
            g = identity(m) if _is_zero(mid) else chamber_element(m, A.chamber_of(mid)).inverse()
            pieces.append((A.apply(g, a), A.apply(g, b)))
        out.append(pieces)
    return out


def fold_onto_chamber(path: Sequence[Vec], m: int | None = None) -> list[list[DeltaVector]]:
    """Delta-lengths of the folded pieces of every segment of ``path``."""
    if len(path) < 2:
        return []
    if m is None:
        m = path[0][0].ctx.m
    return [[sigma_side(m, a, b) for a, b in seg] for seg in fold_pieces(path, m)]


def holonomy_fixes_vertex(g: WeylElement) -> str | tuple[int, ...]:
    """Vertex directions fixed by ``g``: "all", the axis pair, or ()."""
    if g.is_identity():
        return "all"
    if g.is_reflection:
        return (g.j, g.j + g.m)
    return ()


def aligned_functional_value(vertices: Sequence[Vec], eta: int, m: int | None = None,
                             closed: bool = True) -> CycloReal:
    """sum_i <x_{i+1} - x_i, e(eta)> around the polygon (or along the open path)."""
    if m is None:
        m = vertices[0][0].ctx.m
    A = apartment(m)
    e = A.unit_vector(eta)
    pts = list(vertices) + ([vertices[0]] if closed else [])
    total = A.ctx.zero()
    for a, b in zip(pts[:-1], pts[1:]):
        total = total + A.inner(A.sub(b, a), e)
    return total


def side_functional_index(m: int, side: Vec, eta: int) -> int:
    """The index k with omega(k) = eta for the chamber element omega of ``side``."""
    A = apartment(m)
    omega, _ = A.to_delta(side)
    return act(omega.inverse(), eta)


def side_consistency(m: int, side: Vec, eta: int) -> bool:
    """<side, e(eta)> equals l_k(sigma(side)) for the side's aligned index k."""
    A = apartment(m)
    omega, s = _delta_of(A, side)
    return A.inner(side, A.unit_vector(eta)) == eval_l(m, act(omega.inverse(), eta), s)
