"""Quasi-positive curvature certificates for biquotients of SO(8) and U(n+1)."""

from .actions import BiquotientSpec, PreconditionError, eschenburg_free, qp_hypothesis, s1_g2_free
from .cayley import Octonion, g2_basis
from .charclasses import GradedPoly, p1_integral_m13, p1_mod_p
from .metrics import DeformedMetric, flat_residual
from .search import min_residual_search
from .verifier import PointCertificate, verify_eschenburg, verify_m13, verify_n11

__version__ = "0.1.0"

__all__ = [
    "BiquotientSpec",
    "DeformedMetric",
    "GradedPoly",
    "Octonion",
    "PointCertificate",
    "PreconditionError",
    "eschenburg_free",
    "flat_residual",
    "g2_basis",
    "min_residual_search",
    "p1_integral_m13",
    "p1_mod_p",
    "qp_hypothesis",
    "s1_g2_free",
    "verify_eschenburg",
    "verify_m13",
    "verify_n11",
]
