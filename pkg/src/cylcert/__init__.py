"""Exact checking of cylinder certificates on degree-1 du Val del Pezzo surfaces."""

from .certificate import Certificate, Erratum, FibrationClaim
from .certio import load_certificate, parse_certificate, serialize_certificate
from .fibration import STAGES, VerificationReport, verify_certificate
from .lattice import Curve, CurveConfig, DivisorExpr, class_compare, express_in_span, gram_rank, pair, support_of
from .params import AffineExpr, Constraint, ParamDomain, entails, feasible, fm_eliminate

__version__ = "0.1.0"

__all__ = [
    "AffineExpr",
    "Certificate",
    "Constraint",
    "Curve",
    "CurveConfig",
    "DivisorExpr",
    "Erratum",
    "FibrationClaim",
    "ParamDomain",
    "STAGES",
    "VerificationReport",
    "class_compare",
    "entails",
    "express_in_span",
    "feasible",
    "fm_eliminate",
    "gram_rank",
    "load_certificate",
    "pair",
    "parse_certificate",
    "serialize_certificate",
    "support_of",
    "verify_certificate",
]
