import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from rank2polygons.cone import (
    MAX_RAY_DIM,
    ConeRow,
    ConeSystem,
    build_cone,
    cone_from_rays,
    extreme_rays,
    fm_eliminate,
    irredundancy_rows,
    irredundant,
    member,
)
from rank2polygons.errors import ResourceError, UsageError
from rank2polygons.exactreal import field_new, sign
from rank2polygons.functionals import DeltaVector, Functional, InequalitySystem, enumerate_Bn
from rank2polygons.lp import Row, lp_feasible, verify_certificate


@pytest.fixture(scope="module")
def cone3():
    return build_cone(enumerate_Bn(3, 3))


def test_layout(cone3):
    assert cone3.dim == 6 and len(cone3.rows) == 12 + 6
    assert [r.kind for r in cone3.rows[-6:]] == ["chamber"] * 6
    assert cone3.variables == ("a1", "b1", "a2", "b2", "a3", "b3")


def test_member_examples(cone3):
    eq = [DeltaVector.of(3, 1, 1)] * 3
    assert member(cone3, eq).status == "interior"
    assert member(cone3, [DeltaVector.of(3, 0, 0)] * 3).status == "boundary"
    one = member(cone3, [DeltaVector.of(3, 1, 0), DeltaVector.of(3, 0, 0), DeltaVector.of(3, 0, 0)])
    assert one.status == "outside" and one.violated
    # flat coordinates are accepted as well
    assert member(cone3, [1, 1, 1, 1, 1, 1]).status == "interior"
    with pytest.raises(UsageError):
        member(cone3, [1, 1])


def scipy_irredundant(cone, L):
    rows = irredundancy_rows(cone, L)
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for r in rows:
        a = [float(c) for c in r.coeffs]
        if r.rel == "<=":
            A_ub.append(a); b_ub.append(float(r.rhs))
        elif r.rel == ">=":
            A_ub.append([-x for x in a]); b_ub.append(-float(r.rhs))
        else:
            A_eq.append(a); b_eq.append(float(r.rhs))
    res = linprog(np.zeros(cone.dim), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * cone.dim, method="highs")
    return res.status == 0


@pytest.mark.parametrize("m", [3, 4, 5])
def test_irredundancy_matches_highs(m):
    cone = build_cone(enumerate_Bn(m, 3))
    for L in cone_functionals(cone):
        ok, cert = irredundant(cone, L)
        assert ok == scipy_irredundant(cone, L) == True
        assert verify_certificate(irredundancy_rows(cone, L), cert, cone.ctx)


def cone_functionals(cone):
    return [r.functional for r in cone.functional_rows()]


def test_dominated_row_is_redundant():
    B = enumerate_Bn(3, 3)
    sys = B.with_rows([(4, 4, 4)])
    cone = build_cone(sys)
    ok, cert = irredundant(cone, Functional(3, (4, 4, 4)))
    assert not ok and cert.multipliers is not None
    assert not scipy_irredundant(cone, Functional(3, (4, 4, 4)))


def test_single_row_cone():
    sys = InequalitySystem(3, 3, (Functional(3, (0, 4, 4)),), "custom")
    cone = build_cone(sys)
    assert irredundant(cone, sys.functionals[0])[0]
    # a row positive on the open chamber product has an empty zero set there
    sys2 = InequalitySystem(3, 3, (Functional(3, (0, 0, 0)),), "custom")
    assert not irredundant(build_cone(sys2), sys2.functionals[0])[0]


def test_unknown_row_rejected(cone3):
    with pytest.raises(UsageError):
        cone3.row_for(Functional(3, (0, 0, 0)))


def test_fm_projection_is_quadrant(cone3):
    P = fm_eliminate(cone3, [0, 1])
    got = sorted(tuple(float(c) for c in r.coeffs) for r in P.rows)
    assert got == [(-1.0, 0.0), (0.0, -1.0)]
    assert P.variables == ("a1", "b1")


def test_fm_rejects_bad_keep(cone3):
    with pytest.raises(UsageError):
        fm_eliminate(cone3, [])
    with pytest.raises(UsageError):
        fm_eliminate(cone3, [9])


def _lift_feasible(cone, keep, x):
    """Does x extend to a point of the cone (exact LP)?"""
    ctx = cone.ctx
    rows = [Row(r.coeffs, "<=", 0) for r in cone.rows]
    for pos, v in zip(keep, x):
        rows.append(Row(tuple(ctx.one() if j == pos else ctx.zero() for j in range(cone.dim)), "=", v))
    return lp_feasible(rows, ctx).feasible


def test_fm_projection_matches_lp_lift(cone3):
    keep = [0, 1, 2, 3]
    P = fm_eliminate(cone3, keep)
    rng = random.Random(3)
    for _ in range(60):
        x = [Fraction(rng.randint(-3, 8), rng.randint(1, 3)) for _ in keep]
        in_proj = member(P, x).status != "outside"
        assert in_proj == _lift_feasible(cone3, keep, x)


def test_extreme_rays_m3(cone3):
    rays = extreme_rays(cone3)
    assert len(rays) == 8
    for r in rays:
        mem = member(cone3, list(r))
        assert mem.status == "boundary"
        # extremality: tight rows have rank dim - 1
        tight = [[float(c) for c in row.coeffs] for row in cone3.rows if sign(row.value(r)) == 0]
        assert np.linalg.matrix_rank(np.array(tight)) == cone3.dim - 1


def test_extreme_rays_n2():
    cone = build_cone(enumerate_Bn(3, 2))
    rays = {tuple(float(c) for c in r) for r in extreme_rays(cone)}
    assert rays == {(1.0, 0.0, 0.0, 1.0), (0.0, 1.0, 1.0, 0.0)}


def test_rays_with_lineality():
    ctx = field_new(3)
    # the half plane x <= 0 in R^2: lineality along y
    cone = ConeSystem(ctx, 2, (ConeRow("x<=0", (ctx.one(), ctx.zero()), "derived"),), ("x", "y"))
    rays = {tuple(float(c) for c in r) for r in extreme_rays(cone)}
    assert rays == {(-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)}


def test_ray_dimension_guard():
    cone = build_cone(enumerate_Bn(3, 5))
    assert cone.dim > MAX_RAY_DIM
    with pytest.raises(ResourceError):
        extreme_rays(cone)


def test_v_representation_round_trip(cone3):
    H = cone_from_rays(cone3.ctx, extreme_rays(cone3))
    rng = random.Random(11)
    for _ in range(150):
        x = [Fraction(rng.randint(-2, 6), rng.randint(1, 3)) for _ in range(6)]
        assert (member(H, x).status == "outside") == (member(cone3, x).status == "outside")


@pytest.mark.parametrize("m", [5, 8])
def test_irredundant_exotic(m):
    cone = build_cone(enumerate_Bn(m, 3))
    assert all(irredundant(cone, L)[0] for L in cone_functionals(cone))
