"""Exact Picard-group relations for moduli of r-spin curves."""

from .divisors import BasisContext, DivisorClass
from .errors import CertificationFailure, InvariantViolation, SpinPicError, UsageError
from .picard import genus1_chow, presented_open_picard, torsion_certificate
from .relations import bis_relation, corollary_table, derive_main_via_deligne, main_relation

__all__ = [
    "BasisContext",
    "DivisorClass",
    "SpinPicError",
    "UsageError",
    "CertificationFailure",
    "InvariantViolation",
    "main_relation",
    "bis_relation",
    "derive_main_via_deligne",
    "corollary_table",
    "presented_open_picard",
    "torsion_certificate",
    "genus1_chow",
]
