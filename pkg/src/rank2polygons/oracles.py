"""Independent evidence for the inequality systems.

Three generators live here: spectra of sums of traceless 3x3 Hermitian
matrices (the A2 case), exact random polygons in the model apartment (any m),
and polygons built to saturate one prescribed functional.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cone import build_cone, member
from .coxeter import apartment, chamber_element
from .errors import DomainError, UsageError
from .exactreal import CycloReal, field_new, sign
from .functionals import (
    DeltaVector,
    Functional,
    InequalitySystem,
    enumerate_Bn,
    eval_l,
    T_eta,
    T_eta_omega,
    omega_candidates,
)
from .lp import Row, lp_feasible
from .polygonlab import ApartmentPolygon, BilliardPath, sigma

__all__ = [
    "SpectralTriple",
    "SampleReport",
    "SPECTRAL_TOL",
    "SQRT_2_3",
    "hermitian_sample",
    "diagonal_triple",
    "spectrum_to_delta",
    "float_functional",
    "check_triples",
    "triples_to_csv",
    "random_polygon",
    "random_billiard_path",
    "apartment_sample",
    "facet_witness",
    "diagonal_triangle",
    "covering_witnesses",
    "witness_report",
]

SPECTRAL_TOL = 1e-9
SANITY_TOL = 1e-12
SQRT_2_3 = math.sqrt(2.0 / 3.0)


# --- spectral oracle (m = 3) ---------------------------------------------------

@dataclass(frozen=True)
class SpectralTriple:
    """Descending spectra of A, B and C = -(A + B)."""

    A: tuple[float, float, float]
    B: tuple[float, float, float]
    C: tuple[float, float, float]

    def __post_init__(self):
        for name in ("A", "B", "C"):
            lam = tuple(float(x) for x in getattr(self, name))
            if len(lam) != 3:
                raise UsageError(f"spectrum {name} must have three entries")
            if not (lam[0] >= lam[1] >= lam[2]):
                raise DomainError(f"spectrum {name} is not sorted descending: {lam}")
            if abs(sum(lam)) > SANITY_TOL * max(1.0, max(abs(x) for x in lam)):
                raise DomainError(f"spectrum {name} is not traceless: {lam}")
            object.__setattr__(self, name, lam)

    def spectra(self):
        return (self.A, self.B, self.C)


def _descending(values) -> tuple[float, float, float]:
    return tuple(float(x) for x in sorted(values, reverse=True))


def _traceless_hermitian(rng: np.random.Generator) -> np.ndarray:
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    H = (X + X.conj().T) / 2
    return H - (np.trace(H).real / 3) * np.eye(3)


def hermitian_sample(seed: int, count: int) -> list[SpectralTriple]:
    """Spectra of random traceless A, B and of C = -(A + B)."""
    if count < 1:
        raise UsageError("count must be >= 1")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        A = _traceless_hermitian(rng)
        B = _traceless_hermitian(rng)
        C = -(A + B)
        out.append(SpectralTriple(*(_descending(np.linalg.eigvalsh(M)) for M in (A, B, C))))
    return out


def diagonal_triple(dA: Sequence[float], dB: Sequence[float]) -> SpectralTriple:
    """Spectral triple of two commuting diagonal matrices."""
    dC = [-(x + y) for x, y in zip(dA, dB)]
    return SpectralTriple(_descending(dA), _descending(dB), _descending(dC))


def spectrum_to_delta(lam: Sequence[float]) -> tuple[float, float]:
    """Coordinates of a descending traceless triple in the unit coweight basis.

    The coweights (2,-1,-1)/3 and (1,1,-2)/3 both have norm sqrt(2/3) and
    meet at angle pi/3, matching the Gram matrix of the m = 3 apartment.
    """
    l1, l2, l3 = (float(x) for x in lam)
    if not (l1 >= l2 >= l3):
        raise DomainError(f"spectrum not sorted descending: {tuple(lam)}")
    return ((l1 - l2) * SQRT_2_3, (l2 - l3) * SQRT_2_3)


def float_functional(L: Functional, deltas: Sequence[tuple[float, float]]) -> float:
    """Float shadow of L on float chamber vectors."""
    total = 0.0
    for k, (a, b) in zip(L.indices, deltas):
        total += a * math.cos(k * math.pi / L.m) + b * math.cos((k - 1) * math.pi / L.m)
    return total


@dataclass
class SampleReport:
    """Outcome of evaluating a system on a batch of samples.

    ``worst`` holds, per functional, the largest value seen (closest to or
    beyond saturation); ``zeros`` counts exact saturations.
    """

    oracle: str
    m: int
    n: int
    seed: int | None
    count: int
    tolerance: float | None  # None for exact runs
    violations: list[dict] = field(default_factory=list)
    worst: dict[str, float] = field(default_factory=dict)
    zeros: dict[str, int] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.tolerance is None

    @property
    def passed(self) -> bool:
        return not self.violations

    def merge(self, other: "SampleReport") -> "SampleReport":
        if (self.oracle, self.m, self.n) != (other.oracle, other.m, other.n):
            raise UsageError("cannot merge reports of different experiments")
        out = SampleReport(self.oracle, self.m, self.n, self.seed, self.count + other.count,
                           self.tolerance, self.violations + other.violations,
                           dict(self.worst), dict(self.zeros))
        for k, v in other.worst.items():
            out.worst[k] = max(out.worst.get(k, -math.inf), v)
        for k, v in other.zeros.items():
            out.zeros[k] = out.zeros.get(k, 0) + v
        return out

    def to_json(self) -> dict:
        return {
            "oracle": self.oracle,
            "m": self.m,
            "n": self.n,
            "seed": self.seed,
            "count": self.count,
            "exact": self.exact,
            "tolerance": self.tolerance,
            "violations": self.violations,
            "worstMargins": self.worst,
            "saturations": self.zeros,
        }


def _label(L: Functional) -> str:
    return "L" + str(list(L.indices))


def check_triples(system: InequalitySystem, triples: Iterable[SpectralTriple],
                  tol: float = SPECTRAL_TOL, seed: int | None = None) -> SampleReport:
    """Float evaluation of every functional on (sigma(A), sigma(B), sigma(C))."""
    if system.m != 3 or system.n != 3:
        raise UsageError("the spectral oracle needs the m = 3, n = 3 system")
    rows = [(_label(L), np.array([[math.cos(k * math.pi / 3), math.cos((k - 1) * math.pi / 3)]
                                  for k in L.indices])) for L in system.functionals]
    report = SampleReport("hermitian", 3, 3, seed, 0, tol)
    for idx, t in enumerate(triples):
        report.count += 1
        D = np.array([spectrum_to_delta(lam) for lam in t.spectra()])
        for label, coeff in rows:
            v = float((coeff * D).sum())
            if v > report.worst.get(label, -math.inf):
                report.worst[label] = v
            if v > tol:
                report.violations.append({"sample": idx, "functional": label, "value": v,
                                          "spectra": [list(s) for s in t.spectra()]})
    return report


def triples_to_csv(triples: Iterable[SpectralTriple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"{M}{i}" for M in "ABC" for i in (1, 2, 3)])
    for t in triples:
        w.writerow([repr(x) for s in t.spectra() for x in s])
    return buf.getvalue()


def diagonal_triangle(dA: Sequence[int], dB: Sequence[int]) -> ApartmentPolygon:
    """Exact m = 3 triangle whose sides are the diagonals of A, B, -(A + B).

    The diagonal (d1, d2, d3) becomes the vector (d1 - d2) u0 + (d2 - d3) u1;
    the float spectral coordinates are sqrt(2/3) times the exact ones.
    """
    ctx = field_new(3)
    dC = [-(x + y) for x, y in zip(dA, dB)]
    sides = []
    for d in (dA, dB, dC):
        q = [Fraction(x) for x in d]
        sides.append((ctx.coerce(q[0] - q[1]), ctx.coerce(q[1] - q[2])))
    A = apartment(3)
    x0 = A.zero()
    x1 = A.add(x0, sides[0])
    x2 = A.add(x1, sides[1])
    return ApartmentPolygon(3, (x0, x1, x2))


# --- exact apartment oracle -------------------------------------------------------

def _random_scalar(ctx, rng: random.Random, span: int = 12, dens: int = 4) -> CycloReal:
    coeffs = [Fraction(rng.randint(-span, span), rng.randint(1, dens))]
    # a little irrational part so that exotic fields are exercised
    coeffs += [Fraction(rng.randint(-2, 2), rng.randint(1, dens)) for _ in range(ctx.degree - 1)]
    return ctx.from_coeffs(coeffs)


def random_polygon(m: int, n: int, rng: random.Random) -> ApartmentPolygon:
    ctx = field_new(m)
    return ApartmentPolygon(m, tuple((_random_scalar(ctx, rng), _random_scalar(ctx, rng))
                                     for _ in range(n)))


def _side_table(m: int, deltas: Sequence[DeltaVector]) -> list[list[CycloReal]]:
    return [[eval_l(m, k, s) for k in range(2 * m)] for s in deltas]


def apartment_sample(m: int, n: int, seed: int, count: int,
                     system: InequalitySystem | None = None) -> SampleReport:
    """Exact signs of every functional on sigma of random closed n-gons."""
    if count < 1:
        raise UsageError("count must be >= 1")
    if system is None:
        system = enumerate_Bn(m, n)
    if system.m != m or system.n != n:
        raise UsageError(f"system is for (m={system.m}, n={system.n}), not (m={m}, n={n})")
    rng = random.Random(seed)
    report = SampleReport("apartment", m, n, seed, 0, None)
    labels = [_label(L) for L in system.functionals]
    for idx in range(count):
        p = random_polygon(m, n, rng)
        table = _side_table(m, sigma(p))
        report.count += 1
        for label, L in zip(labels, system.functionals):
            v = table[0][L.indices[0]]
            for i in range(1, n):
                v = v + table[i][L.indices[i]]
            s = sign(v)
            f = float(v)
            if f > report.worst.get(label, -math.inf):
                report.worst[label] = f
            if s == 0:
                report.zeros[label] = report.zeros.get(label, 0) + 1
            elif s > 0:
                report.violations.append({"sample": idx, "functional": label, "value": f,
                                          "polygon": p.to_json()})
    return report


def random_billiard_path(m: int, rng: random.Random, k: int | None = None) -> BilliardPath:
    """Pieces omega_i(t_i d) for one random regular chamber direction d.

    Any two pieces share their Delta-direction, so every break is a billiard
    break.  Apex and start point are random field-rational points.
    """
    ctx = field_new(m)
    A = apartment(m)
    k = k if k is not None else rng.randint(2, 6)
    d = (ctx.coerce(Fraction(rng.randint(1, 9), rng.randint(1, 4))),
         ctx.coerce(Fraction(rng.randint(1, 9), rng.randint(1, 4))))
    pts = [(_random_scalar(ctx, rng), _random_scalar(ctx, rng))]
    for _ in range(k - 1):
        g = chamber_element(m, rng.randrange(2 * m))
        t = Fraction(rng.randint(1, 8), rng.randint(1, 3))
        pts.append(A.add(pts[-1], A.scale(A.apply(g, d), t)))
    apex = (_random_scalar(ctx, rng), _random_scalar(ctx, rng))
    while apex == pts[0] or apex == pts[-1]:
        apex = (_random_scalar(ctx, rng), _random_scalar(ctx, rng))
    return BilliardPath(m, apex, tuple(pts))


# --- facet witnesses ----------------------------------------------------------

def _closing_rows(m: int, omegas, others: Sequence[Functional] = ()):
    """sum_i omega_i(s_i) = 0, s >= 1, and optionally L'(s) <= -1."""
    A = apartment(m)
    ctx = A.ctx
    n = len(omegas)
    cols = []
    for g in omegas:
        cols.append(A.apply(g, (ctx.one(), ctx.zero())))
        cols.append(A.apply(g, (ctx.zero(), ctx.one())))
    rows = [Row(tuple(c[0] for c in cols), "=", 0), Row(tuple(c[1] for c in cols), "=", 0)]
    for i in range(2 * n):
        rows.append(Row(tuple(ctx.one() if k == i else ctx.zero() for k in range(2 * n)), ">=", 1))
    for L in others:
        rows.append(Row(tuple(L.coefficients()), "<=", -1))
    return rows


def covering_witnesses(m: int, tup: Sequence[int]) -> list[tuple]:
    """Every omega-choice with disjoint T-sets covering T_eta."""
    eta = tup[0] % 2
    full = T_eta(m, eta)
    options = [[(g, T_eta_omega(m, eta, g)) for g in omega_candidates(m, k, eta)] for k in tup]
    out = []
    for choice in itertools.product(*options):
        sets = [t for _, t in choice]
        if sum(len(t) for t in sets) == len(full) and frozenset().union(*sets) == full:
            out.append(tuple(g for g, _ in choice))
    return out


def facet_witness(m: int, n: int, L: Functional | Sequence[int]) -> ApartmentPolygon:
    """A closed polygon with side i in the open chamber omega_i(Delta).

    The omegas form a covering witness of L, so each side contributes
    <side, e(eta)> to L and the sum telescopes to 0.  The side lengths are
    found by an exact LP over all covering witnesses; we first ask for every
    other row of the boundary system to be strictly negative and drop that
    request if it cannot be met.
    """
    if not isinstance(L, Functional):
        L = Functional(m, tuple(L))
    if L.m != m or L.n != n:
        raise UsageError("functional does not match (m, n)")
    witnesses = covering_witnesses(m, L.indices)
    if not witnesses:
        raise DomainError(f"{L.indices} is not in the boundary system")
    A = apartment(m)
    others = [K for K in enumerate_Bn(m, n).functionals if K != L]
    found = None
    for extra in (others, ()):
        for omegas in witnesses:
            cert = lp_feasible(_closing_rows(m, omegas, extra), A.ctx)
            if cert.feasible:
                found = omegas, cert
                break
        if found:
            break
    if found is None:
        raise AssertionError(f"no closing polygon for {L.indices}")
    omegas, cert = found
    x = cert.witness
    vertices = [A.zero()]
    for i, g in enumerate(omegas[:-1]):
        vertices.append(A.add(vertices[-1], A.apply(g, (x[2 * i], x[2 * i + 1]))))
    poly = ApartmentPolygon(m, tuple(vertices))
    assert sign(L(sigma(poly))) == 0
    return poly


def witness_report(m: int, n: int, L: Functional) -> dict:
    """Membership data of the facet witness against the full boundary cone."""
    system = enumerate_Bn(m, n)
    poly = facet_witness(m, n, L)
    mem = member(build_cone(system), sigma(poly))
    return {"functional": list(L.indices), "status": mem.status,
            "active": [a for a in mem.active if a.startswith("L")],
            "polygon": poly.to_json()}
