import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from rank2polygons.errors import UsageError
from rank2polygons.exactreal import field_new
from rank2polygons.lp import LPCertificate, Row, lp_feasible, verify_certificate


def scipy_feasible(rows):
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for r in rows:
        a = [float(c) for c in r.coeffs]
        if r.rel == "<=":
            A_ub.append(a); b_ub.append(float(r.rhs))
        elif r.rel == ">=":
            A_ub.append([-x for x in a]); b_ub.append(-float(r.rhs))
        else:
            A_eq.append(a); b_eq.append(float(r.rhs))
    n = len(rows[0].coeffs)
    res = linprog(np.zeros(n), A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None,
                  b_eq=b_eq or None, bounds=[(None, None)] * n, method="highs")
    return res.status == 0


def test_trivial_systems():
    assert lp_feasible([Row((1, 1), "<=", 1)]).feasible
    cert = lp_feasible([Row((1,), ">=", 1), Row((1,), "<=", 0)])
    assert not cert.feasible
    assert cert.multipliers is not None


def test_equality_and_free_variables():
    rows = [Row((1, 1), "=", 3), Row((1, -1), "=", -5)]
    cert = lp_feasible(rows)
    assert cert.feasible and cert.witness == [-1, 4]


def test_field_coefficients():
    ctx = field_new(5)
    g = ctx.generator()
    # x >= g, x <= g^2 - 1 = g is tight; x <= g - 1/1000 is infeasible
    assert lp_feasible([Row((ctx.one(),), ">=", g), Row((ctx.one(),), "<=", g * g - 1)], ctx).feasible
    cert = lp_feasible([Row((ctx.one(),), ">=", g), Row((ctx.one(),), "<=", g - Fraction(1, 1000))], ctx)
    assert not cert.feasible and verify_certificate(
        [Row((ctx.one(),), ">=", g), Row((ctx.one(),), "<=", g - Fraction(1, 1000))], cert, ctx)


def test_bad_relation_and_shapes():
    with pytest.raises(UsageError):
        Row((1,), "<", 0)
    with pytest.raises(UsageError):
        lp_feasible([Row((1,), "<=", 0), Row((1, 2), "<=", 0)])
    with pytest.raises(UsageError):
        lp_feasible([])


def test_tampered_certificates_fail():
    rows = [Row((1,), ">=", 1), Row((1,), "<=", 0)]
    cert = lp_feasible(rows)
    bad = LPCertificate("infeasible", multipliers=[-y for y in cert.multipliers])
    assert not verify_certificate(rows, bad)
    assert not verify_certificate(rows, LPCertificate("feasible", witness=[Fraction(1, 2)]))


def test_certificate_json_roundtrip():
    ctx = field_new(3)
    rows = [Row((1, 2), ">=", 1), Row((1, 2), "<=", 0)]
    cert = lp_feasible(rows, ctx)
    again = LPCertificate.from_json(ctx, cert.to_json())
    assert again.multipliers == cert.multipliers and verify_certificate(rows, again, ctx)


@given(seed=st.integers(0, 10**6))
def test_random_systems_agree_with_highs(seed):
    rng = random.Random(seed)
    nvar = rng.randint(1, 4)
    rows = []
    for _ in range(rng.randint(1, 6)):
        rows.append(Row(tuple(rng.randint(-4, 4) for _ in range(nvar)),
                        rng.choice(["<=", ">=", "="]), rng.randint(-5, 5)))
    cert = lp_feasible(rows)
    assert verify_certificate(rows, cert)
    assert cert.feasible == scipy_feasible(rows)


def test_degenerate_cycling_example():
    # Beale-type degenerate data; Bland's rule must terminate
    rows = [
        Row((Fraction(1, 4), -60, Fraction(-1, 25), 9), "<=", 0),
        Row((Fraction(1, 2), -90, Fraction(-1, 50), 3), "<=", 0),
        Row((0, 0, 1, 0), "<=", 1),
        Row((-1, 0, 0, 0), "<=", 0),
        Row((0, -1, 0, 0), "<=", 0),
        Row((0, 0, -1, 0), "<=", 0),
        Row((0, 0, 0, -1), "<=", 0),
        Row((Fraction(3, 4), -150, Fraction(1, 50), -6), ">=", 1),
    ]
    cert = lp_feasible(rows)
    assert verify_certificate(rows, cert)
    assert cert.feasible == scipy_feasible(rows)
