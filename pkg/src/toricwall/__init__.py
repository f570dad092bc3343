"""Crepant toric wall-crossing computations.

Chambers and anticone systems of torus characters, extended stacky fans,
fixed-point restriction tables, the two hypergeometric series attached to a
chamber and the exact transform between them, contour-integral continuation
across a wall with connection coefficients, and the induced transform on
localized equivariant K-theory with its Chern-character compatibility.
"""

__version__ = "0.1.0"
