"""Outer j-radii of polytopes: smallest enclosing j-cylinders."""

from .certify import (
    Certificate,
    CertKind,
    certify_solution,
    verify_identity_odd,
    verify_k1_factorization,
    verify_objective_identity,
    verify_vandermonde,
)
from .cylinder import (
    Cylinder,
    TouchCase,
    TouchReport,
    case_b_recursion,
    cylinder_radius,
    facet_parallelism_check,
    touching_set,
)
from .errors import RadiiError
from .geometry import Ball, Frame, Polytope, min_enclosing_ball, orthonormalize
from .grassmann import SearchConfig, SearchResult, local_refine, minimize_rj
from .simplex import Formula, RadiiAnswer, RadiiQuery, closed_form, regular_simplex, standard_embedding
from .sympoly import SymSolution, solve_full, solve_triple

__all__ = [
    "Ball",
    "Certificate",
    "CertKind",
    "Cylinder",
    "Formula",
    "Frame",
    "Polytope",
    "RadiiAnswer",
    "RadiiError",
    "RadiiQuery",
    "SearchConfig",
    "SearchResult",
    "SymSolution",
    "TouchCase",
    "TouchReport",
    "case_b_recursion",
    "certify_solution",
    "closed_form",
    "cylinder_radius",
    "facet_parallelism_check",
    "local_refine",
    "min_enclosing_ball",
    "minimize_rj",
    "orthonormalize",
    "regular_simplex",
    "solve_full",
    "solve_triple",
    "standard_embedding",
    "touching_set",
    "verify_identity_odd",
    "verify_k1_factorization",
    "verify_objective_identity",
    "verify_vandermonde",
]
