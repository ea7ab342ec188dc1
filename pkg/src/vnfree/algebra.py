"""Exact data model for finite tracial von Neumann algebras in the closed class.

An :class:`Algebra` is its central decomposition: a finite list of
``(weight, kind)`` pairs whose weights are positive rationals summing to one.
Instances are always canonical, so structural equality *is* isomorphism
testing.  Free-group parameters are compared formally; the package does not
try to decide whether distinct interpolated free group factors coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from vnfree.errors import EmptyAlgebra, RangeError, WeightSumError

#: Positive infinity for free-group parameters and free dimensions.
INF = math.inf

#: A rational number or ``INF``.
ExtParam = Union[Fraction, float]


def as_ext(value) -> ExtParam:
    """Coerce ints, strings and Fractions to an exact ExtParam.

    ``"inf"`` and ``math.inf`` map to :data:`INF`; any other float is refused
    so that inexact values never leak into the arithmetic.
    """
    if isinstance(value, float):
        if value == INF:
            return INF
        raise RangeError(f"inexact float {value!r} is not allowed; use a Fraction")
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
        return INF
    return Fraction(value)


def is_inf(value: ExtParam) -> bool:
    return isinstance(value, float) and value == INF


def format_number(value: ExtParam) -> str:
    if is_inf(value):
        return "inf"
    return str(Fraction(value))


# -- summand kinds -----------------------------------------------------------


@dataclass(frozen=True)
class MatrixFactor:
    """``M_n`` with its normalised trace; ``n == 1`` is the scalars."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise RangeError(f"matrix size must be a positive integer, got {self.n!r}")


@dataclass(frozen=True)
class FreeGroupFactor:
    """Interpolated free group factor ``L(F_param)``.

    ``param == 1`` is accepted here but rewritten to the diffuse abelian
    algebra by :func:`make_algebra`.
    """

    param: ExtParam

    def __post_init__(self):
        p = as_ext(self.param)
        if p < 1:
            raise RangeError(f"free group parameter must be >= 1, got {format_number(p)}")
        object.__setattr__(self, "param", p)


@dataclass(frozen=True)
class DiffuseAbelianTensorMatrix:
    """``L(Z) (x) M_k``; ``k == 1`` is the diffuse abelian algebra ``L(Z)``."""

    k: int = 1

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise RangeError(f"matrix size must be a positive integer, got {self.k!r}")


@dataclass(frozen=True)
class HyperfiniteII1:
    """The hyperfinite II_1 factor ``R``."""


@dataclass(frozen=True)
class AbelianTensorHyperfinite:
    """``L(Z) (x) R``."""


@dataclass(frozen=True)
class DiffuseUnspecified:
    """A diffuse hyperfinite summand whose finer structure is not tracked.

    Used for ``L(G)`` with ``G`` infinite amenable, where only diffuseness is
    known.
    """


SummandKind = Union[
    MatrixFactor,
    FreeGroupFactor,
    DiffuseAbelianTensorMatrix,
    HyperfiniteII1,
    AbelianTensorHyperfinite,
    DiffuseUnspecified,
]

DIFFUSE_KINDS = (DiffuseAbelianTensorMatrix, HyperfiniteII1, AbelianTensorHyperfinite,
                 DiffuseUnspecified)

SCALARS = MatrixFactor(1)
LZ = DiffuseAbelianTensorMatrix(1)


def is_diffuse(kind: SummandKind) -> bool:
    return isinstance(kind, DIFFUSE_KINDS)


def kind_token(kind: SummandKind) -> str:
    """Expression-language token for a single summand kind."""
    if isinstance(kind, MatrixFactor):
        return "C" if kind.n == 1 else f"M{kind.n}"
    if isinstance(kind, FreeGroupFactor):
        return f"LF({format_number(kind.param)})"
    if isinstance(kind, DiffuseAbelianTensorMatrix):
        return "LZ" if kind.k == 1 else f"LZxM{kind.k}"
    if isinstance(kind, HyperfiniteII1):
        return "R"
    if isinstance(kind, AbelianTensorHyperfinite):
        return "LZxR"
    if isinstance(kind, DiffuseUnspecified):
        # every infinite amenable group algebra maps to this kind
        return "LG(Z)"
    raise TypeError(f"not a summand kind: {kind!r}")


def _sort_key(entry: tuple[Fraction, SummandKind]):
    weight, kind = entry
    if isinstance(kind, MatrixFactor):
        return (0, kind.n, weight)
    if isinstance(kind, FreeGroupFactor):
        return (1, kind.param, weight)
    if isinstance(kind, DiffuseAbelianTensorMatrix):
        return (2, kind.k, weight)
    if isinstance(kind, HyperfiniteII1):
        return (3, 0, weight)
    if isinstance(kind, AbelianTensorHyperfinite):
        return (4, 0, weight)
    return (5, 0, weight)


# -- algebras ----------------------------------------------------------------


@dataclass(frozen=True)
class Algebra:
    """Canonical central decomposition.  Build with :func:`make_algebra`."""

    summands: tuple[tuple[Fraction, SummandKind], ...]

    def __iter__(self):
        return iter(self.summands)

    def __len__(self):
        return len(self.summands)

    def __str__(self):
        return format_sum(self.summands)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for w, _ in self.summands)

    @property
    def kinds(self) -> tuple[SummandKind, ...]:
        return tuple(k for _, k in self.summands)

    def matrix_summands(self) -> list[tuple[int, Fraction, int]]:
        """``(index, weight, n)`` for every matrix summand, in canonical order."""
        return [(i, w, k.n) for i, (w, k) in enumerate(self.summands)
                if isinstance(k, MatrixFactor)]

    def is_scalars(self) -> bool:
        return self.summands == ((Fraction(1), SCALARS),)

    def is_two_atom_abelian(self) -> bool:
        return len(self.summands) == 2 and all(k == SCALARS for _, k in self.summands)


def format_sum(entries: Iterable[tuple[Fraction, SummandKind]]) -> str:
    """Render entries as ``(w)X (+) (w)Y``; weight 1 is left implicit."""
    parts = []
    for weight, kind in entries:
        token = kind_token(kind)
        if weight == 1:
            parts.append(token)
        else:
            if "x" in token:
                token = f"[{token}]"
            parts.append(f"({weight}){token}")
    return " (+) ".join(parts)


def make_algebra(raw: Sequence[tuple[object, SummandKind]]) -> Algebra:
    """Validate and canonicalise a list of ``(weight, kind)`` pairs.

    Zero weights are dropped, ``L(F_1)`` becomes ``L(Z)`` and entries are
    sorted; equal entries are kept separate.
    """
    entries = []
    total = Fraction(0)
    for weight, kind in raw:
        w = Fraction(weight)
        if w < 0:
            raise RangeError(f"negative weight {w}")
        total += w
        if w == 0:
            continue
        if isinstance(kind, FreeGroupFactor) and kind.param == 1:
            kind = LZ
        entries.append((w, kind))
    if not entries:
        raise EmptyAlgebra("an algebra needs at least one summand of positive weight")
    if total != 1:
        raise WeightSumError(f"weights sum to {total}, not 1")
    entries.sort(key=_sort_key)
    return Algebra(tuple(entries))


def single(kind: SummandKind) -> Algebra:
    """The algebra consisting of one summand of full weight."""
    return make_algebra([(1, kind)])


def iso_eq(a: Algebra, b: Algebra) -> bool:
    """Trace-preserving isomorphism within the closed class.

    Free-group parameters are compared as numbers.
    """
    return a.summands == b.summands


def dim(a: Algebra) -> int | float:
    """Linear dimension; ``INF`` as soon as a non-matrix summand is present."""
    total = 0
    for _, kind in a:
        if not isinstance(kind, MatrixFactor):
            return INF
        total += kind.n * kind.n
    return total


def direct_sum(parts: Sequence[tuple[object, Algebra]]) -> Algebra:
    """Flatten ``(outer_weight, algebra)`` pairs into one canonical algebra."""
    if not parts:
        raise EmptyAlgebra("direct sum of nothing")
    outer = [Fraction(w) for w, _ in parts]
    if any(w < 0 for w in outer):
        raise RangeError("negative weight in direct sum")
    if sum(outer) != 1:
        raise WeightSumError(f"outer weights sum to {sum(outer)}, not 1")
    flat = [(w * inner_w, kind) for w, (_, alg) in zip(outer, parts)
            for inner_w, kind in alg]
    return make_algebra(flat)
