"""Free dimension, lumpiness and the factoriality criterion."""

from __future__ import annotations

from fractions import Fraction

from vnfree.algebra import (
    INF,
    Algebra,
    ExtParam,
    FreeGroupFactor,
    MatrixFactor,
    dim,
    is_inf,
)
from vnfree.errors import HypothesisViolation


def density(kind) -> ExtParam:
    """Per-summand contribution ``d`` in ``fdim = 1 + sum w^2 (d - 1)``."""
    if isinstance(kind, MatrixFactor):
        return 1 - Fraction(1, kind.n * kind.n)
    if isinstance(kind, FreeGroupFactor):
        return kind.param
    return Fraction(1)


def fdim(a: Algebra) -> ExtParam:
    """Free dimension of an algebra in the closed class.

    Uses ``1 + sum_i w_i^2 (d_i - 1)``, which equals the usual
    ``sum w_i^2 d_i + sum_{i != j} w_i w_j`` because the weights sum to one.
    Diffuse summands have ``d = 1`` and so contribute nothing.
    """
    total = Fraction(1)
    for weight, kind in a:
        if isinstance(kind, MatrixFactor):
            total -= weight * weight / (kind.n * kind.n)
        elif isinstance(kind, FreeGroupFactor):
            if is_inf(kind.param):
                return INF
            total += weight * weight * (kind.param - 1)
    return total


def lumpiness(a: Algebra) -> Fraction:
    """Largest ``weight / n^2`` over matrix summands, or 0 without any."""
    return max((w / (n * n) for _, w, n in a.matrix_summands()), default=Fraction(0))


def check_factor_provisos(a: Algebra, b: Algebra) -> None:
    da, db = dim(a), dim(b)
    if da < 2 or db < 2 or da + db < 5:
        raise HypothesisViolation(
            "factoriality criterion needs dim(A), dim(B) >= 2 and dim(A) + dim(B) >= 5"
        )


def product_is_factor(a: Algebra, b: Algebra) -> bool:
    """Whether ``A * B`` is a factor: ``lumpiness(A) + lumpiness(B) <= 1``.

    Two two-dimensional inputs never give a factor (the product always has
    an ``L(Z) (x) M_2`` summand), so that case answers ``False``.  A
    one-dimensional input raises :class:`HypothesisViolation`.
    """
    if dim(a) == 2 and dim(b) == 2:
        return False
    check_factor_provisos(a, b)
    return lumpiness(a) + lumpiness(b) <= 1
