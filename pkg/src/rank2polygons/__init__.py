"""Exact side-length cones of polygons in rank-2 Euclidean buildings."""

from .cone import build_cone, extreme_rays, fm_eliminate, irredundant, member
from .coxeter import WeylElement, apartment, chamber_element, reflection, rotation
from .errors import DomainError, ResourceError, UsageError
from .exactreal import CycloReal, FieldContext, field_new, sign
from .functionals import (
    DeltaVector,
    Functional,
    InequalitySystem,
    dominating_functional,
    enumerate_Bn,
    enumerate_Bn_weak,
    eval_l,
    is_in_B,
)
from .lp import Row, lp_feasible, verify_certificate
from .oracles import apartment_sample, check_triples, facet_witness, hermitian_sample
from .polygonlab import ApartmentPolygon, BilliardPath, sigma, straighten

__version__ = "0.1.0"
