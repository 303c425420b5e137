"""Exact linear feasibility over Q(cos(pi/m)).

Dictionary-form simplex (Chvatal) with Bland's rule, run on the
split-variable form x = x+ - x-.  Feasible systems return a point,
infeasible ones a Farkas combination y of the rows with
sum_i y_i a_i = 0 and sum_i y_i b_i < 0, signs matching the relations.
Both kinds of certificate are re-checked by exact substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import UsageError
from .exactreal import CycloReal, FieldContext, field_new, sign

__all__ = ["Row", "LPCertificate", "lp_feasible", "verify_certificate"]

RELATIONS = ("<=", "=", ">=")


@dataclass(frozen=True)
class Row:
    """coeffs . x  (rel)  rhs"""

    coeffs: tuple
    rel: str
    rhs: object = 0

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise UsageError(f"relation must be one of {RELATIONS}, got {self.rel!r}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))


@dataclass
class LPCertificate:
    status: str  # "feasible" | "infeasible"
    witness: list[CycloReal] | None = None
    multipliers: list[CycloReal] | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.witness is not None:
            out["witness"] = [x.to_json() for x in self.witness]
        if self.multipliers is not None:
            out["multipliers"] = [y.to_json() for y in self.multipliers]
        return out

    @classmethod
    def from_json(cls, ctx: FieldContext, data: dict) -> "LPCertificate":
        w = data.get("witness")
        y = data.get("multipliers")
        return cls(
            data["status"],
            [CycloReal.from_json(ctx, v) for v in w] if w is not None else None,
            [CycloReal.from_json(ctx, v) for v in y] if y is not None else None,
        )


def _context(rows: Sequence[Row], ctx: FieldContext | None) -> FieldContext:
    if ctx is not None:
        return ctx
    for r in rows:
        for v in (*r.coeffs, r.rhs):
            if isinstance(v, CycloReal):
                return v.ctx
    return field_new(3)  # Q(cos(pi/3)) = Q


def _normalise(rows: Sequence[Row], ctx: FieldContext):
    if not rows:
        raise UsageError("empty system")
    dim = len(rows[0].coeffs)
    out = []
    for r in rows:
        if len(r.coeffs) != dim:
            raise UsageError("rows of different lengths")
        out.append((tuple(ctx.coerce(c) for c in r.coeffs), r.rel, ctx.coerce(r.rhs)))
    return dim, out


def verify_certificate(rows: Sequence[Row], cert: LPCertificate, ctx: FieldContext | None = None) -> bool:
    """Exact re-check of either kind of certificate."""
    ctx = _context(rows, ctx)
    dim, norm = _normalise(rows, ctx)
    if cert.feasible:
        x = cert.witness
        if x is None or len(x) != dim:
            return False
        for coeffs, rel, rhs in norm:
            lhs = ctx.zero()
            for c, v in zip(coeffs, x):
                lhs = lhs + c * v
            s = sign(lhs - rhs)
            if (rel == "<=" and s > 0) or (rel == ">=" and s < 0) or (rel == "=" and s != 0):
                return False
        return True
    y = cert.multipliers
    if y is None or len(y) != len(norm):
        return False
    combo = [ctx.zero()] * dim
    bound = ctx.zero()
    for yi, (coeffs, rel, rhs) in zip(y, norm):
        s = sign(yi)
        if (rel == "<=" and s < 0) or (rel == ">=" and s > 0):
            return False
        combo = [acc + yi * c for acc, c in zip(combo, coeffs)]
        bound = bound + yi * rhs
    # sum y_i a_i = 0 and sum y_i b_i < 0 make the system read 0 <= negative
    return all(c.is_zero() for c in combo) and sign(bound) < 0


class _Dictionary:
    """x_B = beta + sum_N alpha[B][N] x_N; objective zeta = z0 + sum_N c[N] x_N."""

    def __init__(self, ctx, A, b):
        self.ctx = ctx
        R, N = len(A), len(A[0]) if A else 0
        self.nvars = N
        self.x0 = N
        one, zero = ctx.one(), ctx.zero()
        self.nonbasic = list(range(N + 1))
        self.basic = [N + 1 + i for i in range(R)]
        self.beta = list(b)
        self.alpha = [[-a for a in row] + [one] for row in A]
        self.cost = [zero] * N + [-one]
        self.z0 = zero

    def pivot(self, row: int, col: int):
        alpha, beta = self.alpha, self.beta
        piv = alpha[row][col]
        inv = piv.inverse()
        prow = alpha[row]
        new_row = [-a * inv for a in prow]
        new_row[col] = inv
        new_beta = -beta[row] * inv
        for i in range(len(alpha)):
            if i == row:
                continue
            f = alpha[i][col]
            if f.is_zero():
                continue
            r = alpha[i]
            for j in range(len(r)):
                if j == col:
                    r[j] = f * inv
                else:
                    a = new_row[j]
                    if not a.is_zero():
                        r[j] = r[j] + f * a
            beta[i] = beta[i] + f * new_beta
        f = self.cost[col]
        if not f.is_zero():
            for j in range(len(self.cost)):
                if j == col:
                    self.cost[j] = f * inv
                else:
                    a = new_row[j]
                    if not a.is_zero():
                        self.cost[j] = self.cost[j] + f * a
            self.z0 = self.z0 + f * new_beta
        alpha[row] = new_row
        beta[row] = new_beta
        self.basic[row], self.nonbasic[col] = self.nonbasic[col], self.basic[row]

    def run(self, max_pivots: int = 100_000):
        for _ in range(max_pivots):
            # Bland: smallest-index improving variable
            entering = None
            for j in sorted(range(len(self.nonbasic)), key=lambda j: self.nonbasic[j]):
                if sign(self.cost[j]) > 0:
                    entering = j
                    break
            if entering is None:
                return
            best = None
            for i, r in enumerate(self.alpha):
                a = r[entering]
                if sign(a) >= 0:
                    continue
                if best is None:
                    best = i
                    continue
                # compare beta_i / -a_i with beta_best / -a_best
                lhs = self.beta[i] * (-self.alpha[best][entering])
                rhs = self.beta[best] * (-a)
                s = sign(lhs - rhs)
                if s < 0 or (s == 0 and self.basic[i] < self.basic[best]):
                    best = i
            if best is None:
                raise ArithmeticError("auxiliary problem unbounded; cannot happen")
            self.pivot(best, entering)
        raise RuntimeError("simplex pivot limit exceeded")


def lp_feasible(rows: Sequence[Row], ctx: FieldContext | None = None) -> LPCertificate:
    """Decide feasibility of a finite system of linear (in)equalities exactly."""
    ctx = _context(rows, ctx)
    dim, norm = _normalise(rows, ctx)
    # everything as <= rows over split variables
    A, b, origin = [], [], []
    for idx, (coeffs, rel, rhs) in enumerate(norm):
        if rel in ("<=", "="):
            A.append(list(coeffs) + [-c for c in coeffs])
            b.append(rhs)
            origin.append((idx, 1))
        if rel in (">=", "="):
            A.append([-c for c in coeffs] + list(coeffs))
            b.append(-rhs)
            origin.append((idx, -1))
    if all(sign(v) >= 0 for v in b):
        cert = LPCertificate("feasible", witness=[ctx.zero()] * dim)
        assert verify_certificate(rows, cert, ctx)
        return cert
    D = _Dictionary(ctx, A, b)
    worst = 0
    for i, v in enumerate(b):
        if sign(v - b[worst]) < 0:
            worst = i
    D.pivot(worst, D.nonbasic.index(D.x0))
    D.run()
    if D.z0.is_zero():
        values = {v: ctx.zero() for v in range(2 * dim)}
        for var, val in zip(D.basic, D.beta):
            if var < 2 * dim:
                values[var] = val
        x = [values[i] - values[i + dim] for i in range(dim)]
        cert = LPCertificate("feasible", witness=x)
    else:
        slack_dual = {}
        for j, var in enumerate(D.nonbasic):
            if var > D.x0:
                slack_dual[var - D.x0 - 1] = -D.cost[j]
        y = [ctx.zero() for _ in norm]
        for k, (idx, s) in enumerate(origin):
            yk = slack_dual.get(k)
            if yk is not None:
                y[idx] = y[idx] + yk * s
        cert = LPCertificate("infeasible", multipliers=y)
    if not verify_certificate(rows, cert, ctx):
        raise ArithmeticError("simplex produced a certificate that does not verify")
    return cert
