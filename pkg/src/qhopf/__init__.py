"""Exact computational toolkit for finite-dimensional quasi-Hopf algebras.

Constructs bosonizations of quantum linear spaces, their twists, crossed
products and comodule algebras, and verifies every defining axiom by exact
arithmetic over cyclotomic fields.
"""

from .cyclotomic import CycNum, canonicalize, cyclotomic_polynomial, euler_phi, invert, root_of_unity

__all__ = [
    "CycNum",
    "canonicalize",
    "cyclotomic_polynomial",
    "euler_phi",
    "invert",
    "root_of_unity",
]
