"""The dihedral Coxeter complex I2(m) and its planar model apartment.

Directions are the 2m unit vectors e(k) at angle k*pi/m, chambers are the
closed arcs [k, k+1], walls are the m lines through e(j) and e(j+m).  All of
this is integer arithmetic mod 2m; the field only enters through
coordinates in the extreme-ray basis (u0, u1) = (e(0), e(1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import UsageError
from .exactreal import CycloReal, FieldContext, field_new, sign

__all__ = [
    "WeylElement",
    "identity",
    "rotation",
    "reflection",
    "all_elements",
    "act",
    "act_chamber",
    "orbit_type",
    "orbit",
    "chamber_element",
    "chamber_of_element",
    "side_of_wall",
    "chamber_side_of_wall",
    "ApartmentModel",
    "apartment",
]


@dataclass(frozen=True, order=True)
class WeylElement:
    """rotation_j: k -> k + 2j, reflection_j: k -> 2j - k (mod 2m)."""

    # field order gives the tie-breaking order: rotations first, then by j
    is_reflection: bool
    j: int
    m: int

    def __post_init__(self):
        if self.m < 3:
            raise UsageError(f"dihedral order must be >= 3, got {self.m}")
        object.__setattr__(self, "j", self.j % self.m)

    @property
    def kind(self) -> str:
        return "ref" if self.is_reflection else "rot"

    def __call__(self, k: int) -> int:
        return act(self, k)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        """Composition: (self * other)(k) = self(other(k))."""
        if other.m != self.m:
            raise UsageError("composing elements of different dihedral groups")
        a, b = self.j, other.j
        if not self.is_reflection:
            return WeylElement(other.is_reflection, a + b, self.m)
        if not other.is_reflection:
            return WeylElement(True, a - b, self.m)
        return WeylElement(False, a - b, self.m)

    def inverse(self) -> "WeylElement":
        if self.is_reflection:
            return self
        return WeylElement(False, -self.j, self.m)

    def is_identity(self) -> bool:
        return not self.is_reflection and self.j == 0

    def to_json(self) -> dict:
        return {"kind": self.kind, "j": self.j}

    @classmethod
    def from_json(cls, m: int, data: dict) -> "WeylElement":
        if data["kind"] not in ("rot", "ref"):
            raise UsageError(f"unknown Weyl element kind {data['kind']!r}")
        return cls(data["kind"] == "ref", int(data["j"]), m)

    def __repr__(self):
        return f"{'reflection' if self.is_reflection else 'rotation'}_{self.j}(m={self.m})"


def identity(m: int) -> WeylElement:
    return WeylElement(False, 0, m)


def rotation(m: int, j: int) -> WeylElement:
    return WeylElement(False, j, m)


def reflection(m: int, j: int) -> WeylElement:
    return WeylElement(True, j, m)


@lru_cache(maxsize=None)
def all_elements(m: int) -> tuple[WeylElement, ...]:
    return tuple(rotation(m, j) for j in range(m)) + tuple(reflection(m, j) for j in range(m))


def act(g: WeylElement, k: int) -> int:
    """Image of direction index ``k`` under ``g``."""
    if g.is_reflection:
        return (2 * g.j - k) % (2 * g.m)
    return (k + 2 * g.j) % (2 * g.m)


def act_chamber(g: WeylElement, c: int) -> int:
    """Image of chamber ``c`` (arc [c, c+1]) under ``g``."""
    if g.is_reflection:
        return (2 * g.j - c - 1) % (2 * g.m)
    return (c + 2 * g.j) % (2 * g.m)


def orbit_type(m: int, k: int) -> int:
    """W-type (parity) of direction ``k``; the orbit is all indices of that parity."""
    return (k % (2 * m)) % 2


def orbit(m: int, k: int) -> frozenset[int]:
    return frozenset(act(g, k) for g in all_elements(m))


def chamber_element(m: int, c: int) -> WeylElement:
    """The unique g with g(chamber 0) = chamber c."""
    c %= 2 * m
    if c % 2 == 0:
        return rotation(m, c // 2)
    return reflection(m, (c + 1) // 2)


def chamber_of_element(g: WeylElement) -> int:
    return act_chamber(g, 0)


def side_of_wall(m: int, k: int, j: int) -> int:
    """Sign of sin((k - j) pi/m): +1, -1, or 0 when e(k) lies on wall j."""
    r = (k - j) % (2 * m)
    if r == 0 or r == m:
        return 0
    return 1 if r < m else -1


def chamber_side_of_wall(m: int, c: int, j: int) -> int:
    """Side of wall ``j`` containing the interior of chamber ``c`` (never 0)."""
    r = (2 * c + 1 - 2 * j) % (4 * m)
    return 1 if r < 2 * m else -1


Vec = tuple[CycloReal, CycloReal]


class ApartmentModel:
    """The plane E in coordinates (p, q) meaning p*u0 + q*u1.

    The Gram matrix of (u0, u1) is [[1, c], [c, 1]] with c = cos(pi/m).
    ``det`` is the coordinate determinant, a positive multiple (sin(pi/m)) of
    the oriented area, so its sign is the orientation.
    """

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.m = ctx.m
        c = ctx.cos(1)
        one = ctx.one()
        self.gram = ((one, c), (c, one))
        g = ctx.generator()
        vecs = [(one, ctx.zero()), (ctx.zero(), one)]
        for _ in range(2, 2 * self.m):
            a, b = vecs[-1], vecs[-2]
            vecs.append((g * a[0] - b[0], g * a[1] - b[1]))
        self._unit = vecs
        # cartesian float shadows for chamber guesses
        self._angle = math.pi / self.m

    def unit_vector(self, k: int) -> Vec:
        return self._unit[k % (2 * self.m)]

    def zero(self) -> Vec:
        z = self.ctx.zero()
        return (z, z)

    def inner(self, v: Vec, w: Vec) -> CycloReal:
        c = self.gram[0][1]
        return v[0] * w[0] + v[1] * w[1] + (v[0] * w[1] + v[1] * w[0]) * c

    def norm2(self, v: Vec) -> CycloReal:
        return self.inner(v, v)

    @staticmethod
    def det(v: Vec, w: Vec) -> CycloReal:
        return v[0] * w[1] - v[1] * w[0]

    @staticmethod
    def add(v: Vec, w: Vec) -> Vec:
        return (v[0] + w[0], v[1] + w[1])

    @staticmethod
    def sub(v: Vec, w: Vec) -> Vec:
        return (v[0] - w[0], v[1] - w[1])

    @staticmethod
    def scale(v: Vec, t) -> Vec:
        return (v[0] * t, v[1] * t)

    def apply(self, g: WeylElement, v: Vec) -> Vec:
        """Linear action of ``g`` on a vector given in (u0, u1) coordinates."""
        if g.m != self.m:
            raise UsageError("Weyl element from a different dihedral group")
        e0 = self.unit_vector(act(g, 0))
        e1 = self.unit_vector(act(g, 1))
        return (v[0] * e0[0] + v[1] * e1[0], v[0] * e0[1] + v[1] * e1[1])

    def cartesian(self, v: Vec) -> tuple[float, float]:
        p, q = float(v[0]), float(v[1])
        return (p + q * math.cos(self._angle), q * math.sin(self._angle))

    def in_chamber(self, v: Vec, c: int) -> bool:
        """True iff ``v`` lies in the closed cone over chamber ``c``."""
        return (sign(self.det(self.unit_vector(c), v)) >= 0
                and sign(self.det(v, self.unit_vector(c + 1))) >= 0)

    def in_open_chamber(self, v: Vec, c: int) -> bool:
        return (sign(self.det(self.unit_vector(c), v)) > 0
                and sign(self.det(v, self.unit_vector(c + 1))) > 0)

    def chamber_of(self, v: Vec) -> int:
        """Some chamber whose closed cone contains the nonzero vector ``v``.

        A float guess is tried first and then certified exactly; boundary
        vectors get the chamber with the smallest index among the candidates.
        """
        if v[0].is_zero() and v[1].is_zero():
            raise UsageError("zero vector has no chamber")
        n = 2 * self.m
        x, y = self.cartesian(v)
        guess = int(math.floor((math.atan2(y, x) % (2 * math.pi)) / self._angle)) % n
        hits = [c for c in ((guess - 1) % n, guess, (guess + 1) % n) if self.in_chamber(v, c)]
        if not hits:
            hits = [c for c in range(n) if self.in_chamber(v, c)]
        return min(hits)

    def to_delta(self, v: Vec) -> tuple[WeylElement, Vec]:
        """(omega, s) with v = omega(s) and s in the model chamber."""
        if v[0].is_zero() and v[1].is_zero():
            return identity(self.m), v
        omega = chamber_element(self.m, self.chamber_of(v))
        s = self.apply(omega.inverse(), v)
        return omega, s


@lru_cache(maxsize=None)
def apartment(m: int) -> ApartmentModel:
    return ApartmentModel(field_new(m))
