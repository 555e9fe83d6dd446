"""polyauto: exact polynomial automorphism algebra with machine-checkable
normal-closure certificates.

The algebra core (fields, poly, autos) is self-contained; certificates are
verified by polyauto.certificates with no dependency on the construction
engines (slin, cotame, lnd).
"""

from .autos import (Endo, FactoredAuto, classify, comm, compose, conj,
                    elementary, invert_endo, jacobian_det, make_basic,
                    translation, vector_degree)
from .certificates import (Certificate, parse_certificate,
                           serialize_certificate, verify_certificate)
from .fields import Field, FieldElement, field_arith
from .poly import Polynomial, poly_arith

__version__ = "0.1.0"

__all__ = [
    "Field", "FieldElement", "field_arith", "Polynomial", "poly_arith",
    "Endo", "FactoredAuto", "classify", "comm", "compose", "conj",
    "elementary", "invert_endo", "jacobian_det", "make_basic", "translation",
    "vector_degree", "Certificate", "verify_certificate",
    "serialize_certificate", "parse_certificate", "__version__",
]
