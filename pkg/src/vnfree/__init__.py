"""Exact calculator for free products of hyperfinite tracial von Neumann algebras."""

from vnfree.algebra import (
    INF,
    AbelianTensorHyperfinite,
    Algebra,
    DiffuseAbelianTensorMatrix,
    DiffuseUnspecified,
    FreeGroupFactor,
    HyperfiniteII1,
    MatrixFactor,
    dim,
    direct_sum,
    iso_eq,
    make_algebra,
    single,
)
from vnfree.engine import (
    AtomProvenance,
    FreeProductResult,
    Justification,
    free_product,
    free_product_fold,
    solve_factor_param,
)
from vnfree.fdim import fdim, lumpiness, product_is_factor
from vnfree.dsl import evaluate, parse, render, run

__all__ = [
    "INF", "AbelianTensorHyperfinite", "Algebra", "DiffuseAbelianTensorMatrix",
    "DiffuseUnspecified", "FreeGroupFactor", "HyperfiniteII1", "MatrixFactor", "dim",
    "direct_sum", "iso_eq", "make_algebra", "single", "AtomProvenance", "FreeProductResult",
    "Justification", "free_product", "free_product_fold", "solve_factor_param", "fdim",
    "lumpiness", "product_is_factor", "evaluate", "parse", "render", "run",
]
