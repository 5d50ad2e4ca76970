"""Multivariate Chebyshev (minimax) polynomial approximation on finite domains.

Submodules:
    poly       polynomial bases, coefficient vectors, evaluation
    lp         dense two-phase simplex (float and exact-rational)
    domain     finite point sets: grids, disks, file import/export
    minimax    the minimax fit, deviation sets, relative-interior solutions
    certify    optimality certificates and solution-set dimension theory
    construct  bump functions realizing prescribed deviation sets
    funcexpr   small expression language for target functions
    gallery    built-in instances with golden expected values
    cli        command-line front end
"""

from . import poly, lp, domain, minimax, certify, construct, funcexpr, gallery

__version__ = "0.1.0"
