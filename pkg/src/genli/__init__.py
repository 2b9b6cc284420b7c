"""Generalized Li coefficients k(n, a) of the Riemann xi-function.

Modules: ``precision`` (zeta, Gamma, xi, log xi, xi'/xi with error bounds),
``zeros`` (zero tables), ``li`` (zero sums, Taylor coefficients, identities),
``littlewood`` (rectangle contour checks), ``multiset`` (Bombieri-Lagarias
sums on finite multisets) and ``cli``.
"""
from .errors import (
    BoundaryZeroError,
    CatalogError,
    DomainError,
    GenliError,
    MultisetError,
    PoleError,
    PrecisionError,
)
from .precision import PrecisionContext, gamma, log_xi, xi, xi_logderiv, zeta
from .zeros import ZeroCatalog, ingest

__version__ = "0.1.0"

__all__ = [
    "BoundaryZeroError",
    "CatalogError",
    "DomainError",
    "GenliError",
    "MultisetError",
    "PoleError",
    "PrecisionContext",
    "PrecisionError",
    "ZeroCatalog",
    "gamma",
    "ingest",
    "log_xi",
    "xi",
    "xi_logderiv",
    "zeta",
]
