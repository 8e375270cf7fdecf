"""Overloaded low-density spreading codes from finite projective planes."""
from .galois import FieldCtx, GfElem, field_new
from .lds import LdsMatrix, build_lds, verify_fixture
from .metrics import correlation_report, shannon_limit
from .projective import incidence_matrix, quadric_vector

__all__ = [
    "FieldCtx",
    "GfElem",
    "LdsMatrix",
    "build_lds",
    "correlation_report",
    "field_new",
    "incidence_matrix",
    "quadric_vector",
    "shannon_limit",
    "verify_fixture",
]
