"""Exact certificates for order relations in preordered polynomial semirings."""
from .certificates import (
    Asymptotic,
    BoundContext,
    Catalytic,
    Closure,
    Ideal,
    InvalidCertificate,
    RateWitness,
    Strassen,
    UnivariateCoeffPoly,
    verify,
)
from .poly import (
    ParseError,
    Polynomial,
    coeffwise_geq,
    embezzlement_identity,
    evaluate,
    homogenize,
    multiply,
    parse,
)
from .semiring import SemiringInstance, is_member, leq, universal_element

__version__ = "0.1.0"
