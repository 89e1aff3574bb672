"""Numerical integration of strict Lie 2-algebras to Lie 2-groups.

Bigons ``(a, b, z)`` over a strict Lie 2-algebra are mapped to arrows of
the integrated crossed module of matrix groups, and back.
"""

__version__ = "0.1.0"

from .algebra import (
    LieAlgCrossedModule,
    LieAlgebra,
    StrictLie2Algebra,
    TwoTermComplex,
    check_alg_crossed_module,
    check_strict_2algebra,
    crossed_module_to_2algebra,
    derivation_crossed_module,
    end_complex,
    jacobi_residual,
    semidirect,
    twoalgebra_to_crossed_module,
)
from .catalog import builtin_algebra, builtin_crossed_module
from .groups import GrpCrossedModule, MatrixRealization, develop, path_class_equal
from .morita import psi, roundtrip, solve_delta_b, varpi, zeta
from .morphisms import LinfMorphism, extension_to_morphism, morphism_residuals
from .paths import BigonData, CubeData, Cutoff, SampledPath, bigon_residual

__all__ = [
    "LieAlgebra", "LieAlgCrossedModule", "StrictLie2Algebra", "TwoTermComplex",
    "check_alg_crossed_module", "check_strict_2algebra", "crossed_module_to_2algebra",
    "derivation_crossed_module", "end_complex", "jacobi_residual", "semidirect",
    "twoalgebra_to_crossed_module", "builtin_algebra", "builtin_crossed_module",
    "GrpCrossedModule", "MatrixRealization", "develop", "path_class_equal",
    "psi", "roundtrip", "solve_delta_b", "varpi", "zeta",
    "LinfMorphism", "extension_to_morphism", "morphism_residuals",
    "BigonData", "CubeData", "Cutoff", "SampledPath", "bigon_residual",
]
