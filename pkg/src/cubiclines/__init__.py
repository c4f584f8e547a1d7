"""Exact lattice model of the 27 lines on a smooth cubic surface.

The package computes, for any incidence-preserving group action on the
27 line classes, the fixed part of the rank-7 divisor lattice, the
subgroup generated by orbit sums of lines, and the resulting quotient
invariants, together with the conic-fibration combinatorics attached to
a fixed line.  A FastAPI service and a thin CLI expose the checks as
reproducible JSON reports.
"""

__version__ = "0.1.0"
