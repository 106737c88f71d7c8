"""Exact computer algebra for quantum K rings of partial flag varieties.

Submodules:

* ``polycore``       exact Laurent polynomials and (1-Q)-localized fractions
* ``presentations``  Toda-type and Whitney presentations, Toda polynomials
* ``schubert``       Weyl combinatorics, divided differences, representatives
* ``quotient``       Groebner bases, normal forms, quantum products
* ``todaham``        finite-difference Toda Hamiltonians
* ``cli``            command line front end and verification runner
"""

from . import errors
from .polycore import LaurentPoly, QLocalized, VarRegistry, elem_sym, registry, substitute, y_coefficients

__all__ = [
    "errors",
    "LaurentPoly",
    "QLocalized",
    "VarRegistry",
    "elem_sym",
    "registry",
    "substitute",
    "y_coefficients",
]

__version__ = "0.1.0"
