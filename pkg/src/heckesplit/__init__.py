"""Hecke characteristic polynomials of cusp form spaces and their mod-p splitting.

The package computes exact characteristic polynomials of Hecke operators
acting on cuspidal modular symbols for Gamma0(N) with an optional
quadratic character, reduces them modulo primes, factors the reductions
over F_p, and scans levels, weights and primes for spaces where every
Hecke polynomial splits into linear factors.
"""

from .dimformulas import QuadChar, SpaceLabel, bound_M, dim_cusp_forms, sturm_bound, weight_step
from .exactlinalg import IntPoly, RatMatrix, charpoly, kernel, restrict, rref
from .ffpoly import (
    Factorization,
    FpPoly,
    count_split_polys,
    factor,
    is_irreducible,
    is_totally_split,
    poly_divrem,
    poly_gcd,
    powmod,
    split_probability,
    squarefree_decomposition,
)
from .modsym import ModularSymbolSpace, build_space, charpoly_hecke, hecke_matrix
from .qexp import miller_charpoly
from .scan import (
    CellResult,
    CharpolyCache,
    LevelVerdict,
    ScanReport,
    build_table,
    charpoly_mod_p,
    detect_period,
    incremental_factors,
    scan_level,
)

__version__ = "0.1.0"

__all__ = [
    "CellResult",
    "CharpolyCache",
    "Factorization",
    "FpPoly",
    "IntPoly",
    "LevelVerdict",
    "ModularSymbolSpace",
    "QuadChar",
    "RatMatrix",
    "ScanReport",
    "SpaceLabel",
    "bound_M",
    "build_space",
    "build_table",
    "charpoly",
    "charpoly_hecke",
    "charpoly_mod_p",
    "count_split_polys",
    "detect_period",
    "dim_cusp_forms",
    "factor",
    "hecke_matrix",
    "incremental_factors",
    "is_irreducible",
    "is_totally_split",
    "kernel",
    "miller_charpoly",
    "poly_divrem",
    "poly_gcd",
    "powmod",
    "restrict",
    "rref",
    "scan_level",
    "split_probability",
    "squarefree_decomposition",
    "sturm_bound",
    "weight_step",
]
