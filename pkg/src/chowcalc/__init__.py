"""Exact computation of codimension-one cohomological Chow groups.

Modules, bottom up:

* :mod:`chowcalc.abelian`: Smith normal form, finitely generated and
  diagonalizable groups.
* :mod:`chowcalc.complexes`: cochain complexes, cones, double complexes.
* :mod:`chowcalc.spectral`: E1/E2 pages and two-row abutments.
* :mod:`chowcalc.dualcomplex`: dual complexes of normal crossing divisors.
* :mod:`chowcalc.calculator`: ``CHC^1`` of divisors, varieties and surfaces.
* :mod:`chowcalc.cli`: the ``chowcalc run`` command.
"""

from .abelian import DiagGroup, FgAbGroup, PresentedGroup, cokernel, kernel_basis, snf
from .calculator import (
    HypothesisFailed,
    MixedGroup,
    PicData,
    ResolutionData,
    chc1_divisor,
    chc1_smooth_2resolution,
    chc1_surface,
    chc1_variety,
)
from .complexes import CochainComplex, DoubleComplex, cohomology, total_complex
from .dualcomplex import Stratum, build_dual_complex, gamma_cohomology

__version__ = "0.1.0"

__all__ = [
    "CochainComplex",
    "DiagGroup",
    "DoubleComplex",
    "FgAbGroup",
    "HypothesisFailed",
    "MixedGroup",
    "PicData",
    "PresentedGroup",
    "ResolutionData",
    "Stratum",
    "build_dual_complex",
    "chc1_divisor",
    "chc1_smooth_2resolution",
    "chc1_surface",
    "chc1_variety",
    "cohomology",
    "cokernel",
    "gamma_cohomology",
    "kernel_basis",
    "snf",
    "total_complex",
]
