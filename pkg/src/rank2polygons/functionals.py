"""Functionals L = (l_eta_1, ..., l_eta_n) on products of the model chamber.

A direction index k stands for the unit vector e(k); l_k(s) = <s, e(k)> for a
chamber vector s = a*u0 + b*u1, which is a*cos(k pi/m) + b*cos((k-1) pi/m).
This module also holds the combinatorial selection of the boundary
functionals: the wall sets T_eta, T_eta^omega, membership in B_eta, the two
enumerations of the resulting system (directly and via antipodal chamber
pairs) and the domination map for tuples that are disjoint but not covering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coxeter import (
    WeylElement,
    act,
    all_elements,
    chamber_element,
    chamber_of_element,
    chamber_side_of_wall,
    side_of_wall,
)
from .errors import DomainError, UsageError
from .exactreal import CycloReal, FieldContext, field_new, sign

__all__ = [
    "DeltaVector",
    "Functional",
    "InequalitySystem",
    "eval_l",
    "evaluate",
    "enumerate_Ln",
    "T_eta",
    "T_eta_omega",
    "omega_candidates",
    "is_in_B",
    "has_star",
    "enumerate_Bn",
    "enumerate_Bn_weak",
    "dominating_functional",
    "minimal_index",
    "sign_vector",
]


@dataclass(frozen=True)
class DeltaVector:
    """A point a*u0 + b*u1 of the model chamber (a, b >= 0)."""

    a: CycloReal
    b: CycloReal

    def __post_init__(self):
        if self.a.ctx is not self.b.ctx:
            raise UsageError("DeltaVector coordinates from different fields")
        if sign(self.a) < 0 or sign(self.b) < 0:
            raise DomainError(f"not in the model chamber: ({float(self.a)}, {float(self.b)})")

    @classmethod
    def of(cls, m: int, a, b) -> "DeltaVector":
        ctx = field_new(m)
        return cls(ctx.coerce(a), ctx.coerce(b))

    @property
    def ctx(self) -> FieldContext:
        return self.a.ctx

    def is_regular(self) -> bool:
        return sign(self.a) > 0 and sign(self.b) > 0

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __add__(self, other: "DeltaVector") -> "DeltaVector":
        return DeltaVector(self.a + other.a, self.b + other.b)

    def scaled(self, t) -> "DeltaVector":
        return DeltaVector(self.a * t, self.b * t)

    def as_vec(self) -> tuple[CycloReal, CycloReal]:
        return (self.a, self.b)

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json()}

    @classmethod
    def from_json(cls, ctx: FieldContext, data) -> "DeltaVector":
        if isinstance(data, dict):
            return cls(CycloReal.from_json(ctx, data["a"]), CycloReal.from_json(ctx, data["b"]))
        a, b = data
        return cls(CycloReal.from_json(ctx, a), CycloReal.from_json(ctx, b))


@dataclass(frozen=True, order=True)
class Functional:
    m: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(k % (2 * self.m) for k in self.indices)
        object.__setattr__(self, "indices", idx)
        if not idx:
            raise DomainError("a functional needs at least one side")
        if len({k % 2 for k in idx}) != 1:
            raise DomainError(f"indices {idx} do not share one W-type")

    @property
    def n(self) -> int:
        return len(self.indices)

    @property
    def parity(self) -> int:
        return self.indices[0] % 2

    def __call__(self, s: Sequence[DeltaVector]) -> CycloReal:
        return evaluate(self, s)

    def coefficients(self) -> list[CycloReal]:
        """Row coefficients over (a_1, b_1, ..., a_n, b_n)."""
        ctx = field_new(self.m)
        out = []
        for k in self.indices:
            out.extend((ctx.cos(k), ctx.cos(k - 1)))
        return out


@dataclass(frozen=True)
class InequalitySystem:
    m: int
    n: int
    functionals: tuple[Functional, ...]
    provenance: str = "custom"

    def __post_init__(self):
        if self.provenance not in ("Ln", "Bn", "BnWeak", "custom"):
            raise UsageError(f"unknown provenance {self.provenance!r}")
        seen = set()
        for L in self.functionals:
            if L.m != self.m or L.n != self.n:
                raise UsageError(f"functional {L.indices} does not match (m={self.m}, n={self.n})")
            if L.indices in seen:
                raise UsageError(f"duplicate functional {L.indices}")
            seen.add(L.indices)

    def __len__(self):
        return len(self.functionals)

    def __iter__(self):
        return iter(self.functionals)

    def tuples(self) -> list[tuple[int, ...]]:
        return [L.indices for L in self.functionals]

    def count_by_parity(self) -> dict[int, int]:
        out = {0: 0, 1: 0}
        for L in self.functionals:
            out[L.parity] += 1
        return out

    def with_rows(self, extra: Iterable[Sequence[int]], provenance: str = "custom") -> "InequalitySystem":
        rows = list(self.functionals) + [Functional(self.m, tuple(t)) for t in extra]
        return InequalitySystem(self.m, self.n, tuple(rows), provenance)

    def to_json(self) -> dict:
        groups = []
        for parity in (0, 1):
            tuples = [list(L.indices) for L in self.functionals if L.parity == parity]
            groups.append({"parity": parity, "tuples": tuples})
        return {"m": self.m, "n": self.n, "parityGroups": groups, "provenance": self.provenance}

    @classmethod
    def from_json(cls, data: dict) -> "InequalitySystem":
        m, n = int(data["m"]), int(data["n"])
        rows = []
        for group in data["parityGroups"]:
            for t in group["tuples"]:
                L = Functional(m, tuple(int(k) for k in t))
                if L.parity != int(group["parity"]):
                    raise UsageError(f"tuple {t} filed under the wrong parity")
                rows.append(L)
        return cls(m, n, tuple(rows), data.get("provenance", "custom"))


def eval_l(m: int, k: int, s: DeltaVector) -> CycloReal:
    """l_k(s) = <s, e(k)>."""
    ctx = s.ctx
    if ctx.m != m:
        raise UsageError(f"DeltaVector lives in m={ctx.m}, functional in m={m}")
    return s.a * ctx.cos(k) + s.b * ctx.cos(k - 1)


def evaluate(L: Functional, s: Sequence[DeltaVector]) -> CycloReal:
    if len(s) != L.n:
        raise UsageError(f"functional has {L.n} sides, point has {len(s)}")
    total = field_new(L.m).zero()
    for k, v in zip(L.indices, s):
        total = total + eval_l(L.m, k, v)
    return total


def _row_key(L: Functional):
    # the JSON layout groups by parity, so the in-memory order does too
    return (L.parity, L.indices)


def enumerate_Ln(m: int, n: int) -> InequalitySystem:
    """All equal-type index tuples: 2 * m**n functionals."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rows = []
    for parity in (0, 1):
        same_type = range(parity, 2 * m, 2)
        rows.extend(Functional(m, t) for t in itertools.product(same_type, repeat=n))
    rows.sort(key=_row_key)
    return InequalitySystem(m, n, tuple(rows), "Ln")


def T_eta(m: int, eta: int) -> frozenset[int]:
    """Walls (lines j*pi/m) not containing e(eta)."""
    return frozenset(j for j in range(m) if (eta - j) % m != 0)


def T_eta_omega(m: int, eta: int, omega: WeylElement) -> frozenset[int]:
    """Walls of T_eta with e(eta) and the chamber omega(Delta) strictly on one side."""
    c = chamber_of_element(omega)
    return frozenset(j for j in T_eta(m, eta)
                     if side_of_wall(m, eta, j) == chamber_side_of_wall(m, c, j))


def omega_candidates(m: int, k: int, eta: int) -> tuple[WeylElement, WeylElement]:
    """The two Weyl elements omega with omega(k) = eta (a rotation and a reflection)."""
    if (k - eta) % 2:
        raise DomainError(f"indices {k} and {eta} have different W-types")
    found = tuple(g for g in all_elements(m) if act(g, k) == eta % (2 * m))
    assert len(found) == 2
    return found


def _mask(walls: frozenset[int]) -> int:
    out = 0
    for j in walls:
        out |= 1 << j
    return out


def _canonical_eta(m: int, tup: Sequence[int]) -> int:
    parities = {k % 2 for k in tup}
    if len(parities) != 1:
        raise DomainError(f"tuple {tuple(tup)} mixes W-types")
    return parities.pop()


def _options(m: int, tup: Sequence[int], eta: int):
    """Per position: list of (omega, T-mask)."""
    return [[(g, _mask(T_eta_omega(m, eta, g))) for g in omega_candidates(m, k, eta)]
            for k in tup]


def _search(options, full: int | None):
    """Choices with pairwise disjoint T-sets whose union is ``full`` (any union if None)."""
    n = len(options)
    chosen: list[WeylElement] = []

    def rec(i, used):
        if i == n:
            if full is None or used == full:
                return list(chosen)
            return None
        for g, mask in options[i]:
            if mask & used:
                continue
            chosen.append(g)
            found = rec(i + 1, used | mask)
            chosen.pop()
            if found is not None:
                return found
        return None

    return rec(0, 0)


def is_in_B(m: int, tup: Sequence[int]) -> tuple[bool, tuple[WeylElement, ...] | None]:
    """Whether (e(k_1), ..., e(k_n)) lies in B_eta, eta the chamber vertex of its type.

    Returns the witnessing (omega_1, ..., omega_n) when it does.
    """
    eta = _canonical_eta(m, tup)
    witness = _search(_options(m, tup, eta), _mask(T_eta(m, eta)))
    return (witness is not None, tuple(witness) if witness is not None else None)


def has_star(m: int, tup: Sequence[int]) -> tuple[WeylElement, ...] | None:
    """A choice of omegas with pairwise disjoint T-sets, or None."""
    eta = _canonical_eta(m, tup)
    witness = _search(_options(m, tup, eta), None)
    return tuple(witness) if witness is not None else None


def enumerate_Bn(m: int, n: int) -> InequalitySystem:
    """Filter all equal-type tuples through :func:`is_in_B`; ordered by (parity, tuple)."""
    if n < 2:
        raise DomainError("the boundary system needs n >= 2")
    rows = []
    for parity in (0, 1):
        full = _mask(T_eta(m, parity))
        # the options only depend on the index, not on the position
        per_index = {k: [(g, _mask(T_eta_omega(m, parity, g)))
                         for g in omega_candidates(m, k, parity)]
                     for k in range(parity, 2 * m, 2)}
        for tup in itertools.product(range(parity, 2 * m, 2), repeat=n):
            if _search([per_index[k] for k in tup], full) is not None:
                rows.append(Functional(m, tup))
    rows.sort(key=_row_key)
    return InequalitySystem(m, n, tuple(rows), "Bn")


def minimal_index(m: int, eta: int) -> int:
    """The index k of eta's type minimising l_k on the chamber (omega(Delta) touches -eta)."""
    c = (eta + m) % (2 * m)
    return act(chamber_element(m, c).inverse(), eta)


def enumerate_Bn_weak(m: int, n: int) -> InequalitySystem:
    """One antipodal chamber pair at positions j != j', chambers touching -eta elsewhere."""
    if n < 2:
        raise DomainError("the boundary system needs n >= 2")
    found = set()
    for eta in (0, 1):
        minus = (eta + m) % (2 * m)
        # the two chambers having -eta as an endpoint
        touching = [chamber_element(m, minus), chamber_element(m, minus - 1)]
        rest_choices = [act(w.inverse(), eta) for w in touching]
        for j, jp in itertools.permutations(range(n), 2):
            for c in range(2 * m):
                wj = chamber_element(m, c)
                wjp = chamber_element(m, c + m)
                others = [i for i in range(n) if i not in (j, jp)]
                for rest in itertools.product(rest_choices, repeat=len(others)):
                    tup = [0] * n
                    tup[j] = act(wj.inverse(), eta)
                    tup[jp] = act(wjp.inverse(), eta)
                    for i, k in zip(others, rest):
                        tup[i] = k
                    found.add(tuple(tup))
    rows = sorted((Functional(m, t) for t in found), key=_row_key)
    return InequalitySystem(m, n, tuple(rows), "BnWeak")


def dominating_functional(m: int, tup: Sequence[int]) -> Functional:
    """A member of B_eta dominating a tuple that is disjoint but not covering.

    Keeps one position j carrying a nonempty T-set and replaces the index at
    another position j' (all remaining positions have empty T-sets) by the
    index of the chamber antipodal to omega_j.
    """
    tup = tuple(k % (2 * m) for k in tup)
    eta = _canonical_eta(m, tup)
    if is_in_B(m, tup)[0]:
        raise DomainError(f"{tup} already satisfies the covering property")
    omegas = has_star(m, tup)
    if omegas is None:
        raise DomainError(f"{tup} violates the disjointness property")
    nonempty = [i for i, g in enumerate(omegas) if T_eta_omega(m, eta, g)]
    if len(nonempty) > 2:
        raise AssertionError("rank 2 allows at most two nonempty disjoint T-sets")
    j = nonempty[0] if nonempty else 0
    if len(nonempty) == 2:
        jp = nonempty[1]
    else:
        jp = next(i for i in range(len(tup)) if i != j)
    hat = chamber_element(m, chamber_of_element(omegas[j]) + m)
    out = list(tup)
    out[jp] = act(hat.inverse(), eta)
    result = Functional(m, tuple(out))
    assert is_in_B(m, result.indices)[0]
    return result


def sign_vector(system: InequalitySystem, s: Sequence[DeltaVector]) -> tuple[int, ...]:
    """Exact signs of every functional of ``system`` at ``s``."""
    return tuple(sign(evaluate(L, s)) for L in system.functionals)
