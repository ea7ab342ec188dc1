"""Free products of algebras in the closed class.

Three branches, tried in order:

* one side is the scalars, so the product is the other side;
* both sides are two-atom abelian (the two-projections case), giving atoms
  plus a diffuse ``L(Z) (x) M_2`` part;
* everything else: atoms from pairs of matrix summands whose densities
  ``alpha/n^2 + beta/m^2`` exceed one, and an interpolated free group factor
  on the remaining weight whose parameter is fixed by additivity of free
  dimension.

The general branch is one formula, but the theorems behind it are stated for
narrower input classes.  Each result carries a label naming the class that
covers it; inputs outside all of them are labelled ``Extrapolated`` and can be
refused with ``strict=True``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from vnfree.algebra import (
    INF,
    LZ,
    SCALARS,
    Algebra,
    DiffuseAbelianTensorMatrix,
    ExtParam,
    FreeGroupFactor,
    MatrixFactor,
    SummandKind,
    dim,
    is_inf,
    make_algebra,
)
from vnfree.errors import (
    ExtrapolationRejected,
    HypothesisViolation,
    InternalInvariantViolation,
    RangeError,
)
from vnfree.fdim import fdim

LABELS = ("Thm1.1", "Thm2.3", "Thm3.6", "Prop2.4", "Prop3.5", "Thm4.6", "Rem1.8",
          "Extrapolated", "Trivial")


@dataclass(frozen=True)
class AtomProvenance:
    left_index: int
    right_index: int
    size: int


@dataclass(frozen=True)
class Justification:
    label: str
    note: str = ""

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown justification label {self.label!r}")


@dataclass(frozen=True)
class FreeProductResult:
    algebra: Algebra
    factor_param: Optional[ExtParam]
    atoms: tuple[tuple[Fraction, AtomProvenance], ...]
    justification: Justification
    #: one justification per free product performed, in order
    trace: tuple[Justification, ...] = field(default=())
    #: summand order following the derivation: ``(weight, kind, source)``
    layout: tuple[tuple[Fraction, SummandKind, Optional[tuple[int, int]]], ...] = field(
        default=(), repr=False, compare=False)

    def __post_init__(self):
        if not self.trace:
            object.__setattr__(self, "trace", (self.justification,))
        if not self.layout:
            object.__setattr__(self, "layout",
                               tuple((w, k, None) for w, k in self.algebra))


def atom_weight(alpha: Fraction, n: int, beta: Fraction, m: int) -> tuple[Fraction, int]:
    """Weight and size of the atom under ``p_i ^ q_j`` (weight 0 if none)."""
    size = max(n, m)
    excess = alpha / (n * n) + beta / (m * m) - 1
    if excess <= 0:
        return Fraction(0), size
    return size * size * excess, size


def pair_atoms(a: Algebra, b: Algebra) -> list[tuple[Fraction, AtomProvenance]]:
    atoms = []
    for i, alpha, n in a.matrix_summands():
        for j, beta, m in b.matrix_summands():
            weight, size = atom_weight(alpha, n, beta, m)
            if weight > 0:
                atoms.append((weight, AtomProvenance(i, j, size)))
    return atoms


def solve_factor_param(target: ExtParam, gamma: Fraction,
                       atoms: Sequence[tuple[Fraction, AtomProvenance]]) -> ExtParam:
    """Parameter ``s`` making ``L(F_s)_gamma (+) atoms`` have free dimension ``target``."""
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise RangeError(f"factor weight must be positive, got {gamma}")
    if is_inf(target):
        return INF
    atom_mass = sum((w * w / (p.size * p.size) for w, p in atoms), Fraction(0))
    s = 1 + (target - 1 + atom_mass) / (gamma * gamma)
    if s <= 1:
        raise InternalInvariantViolation(f"solved free group parameter {s} is not > 1")
    return s


# -- justification -----------------------------------------------------------

_LZ_ALGEBRA = make_algebra([(1, LZ)])


def _all_scalar(a: Algebra) -> bool:
    return all(k == SCALARS for k in a.kinds)


def _all_matrix(a: Algebra) -> bool:
    return all(isinstance(k, MatrixFactor) for k in a.kinds)


def _has_fgf(a: Algebra) -> bool:
    return any(isinstance(k, FreeGroupFactor) for k in a.kinds)


def _free_part_plus(a: Algebra, allow) -> bool:
    """At most one ``L(F_r)`` summand (``r >= 1``), every other summand passing ``allow``."""
    free = 0
    for kind in a.kinds:
        if isinstance(kind, FreeGroupFactor) or kind == LZ:
            free += 1
        elif not allow(kind):
            return False
    return free <= 1


def _prop35_pair(left: Algebra, right: Algebra) -> bool:
    return (_has_fgf(left)
            and _free_part_plus(left, lambda k: isinstance(k, MatrixFactor))
            and len(right) == 1 and isinstance(right.kinds[0], MatrixFactor)
            and right.kinds[0].n >= 2)


def classify(a: Algebra, b: Algebra) -> str:
    """Label of the narrowest stated result covering the general branch for ``(a, b)``."""
    if _all_scalar(a) and _all_scalar(b):
        return "Thm2.3"
    if _all_matrix(a) and _all_matrix(b):
        return "Thm3.6"
    if ((_has_fgf(a) or _has_fgf(b))
            and _free_part_plus(a, lambda k: k == SCALARS)
            and _free_part_plus(b, lambda k: k == SCALARS)):
        return "Prop2.4"
    if _prop35_pair(a, b) or _prop35_pair(b, a):
        return "Prop3.5"
    if not _has_fgf(a) and not _has_fgf(b):
        return "Thm4.6"
    # L(F_r) * X follows from L(Z) * X whenever the latter is covered
    for free, other in ((a, b), (b, a)):
        if (len(free) == 1 and isinstance(free.kinds[0], FreeGroupFactor)
                and classify(_LZ_ALGEBRA, other) != "Extrapolated"):
            return "Rem1.8"
    return "Extrapolated"


# -- branches ----------------------------------------------------------------


def _two_projections(a: Algebra, b: Algebra) -> FreeProductResult:
    atoms = []
    for i, alpha, _ in a.matrix_summands():
        for j, beta, _ in b.matrix_summands():
            weight = max(alpha + beta - 1, Fraction(0))
            if weight > 0:
                atoms.append((weight, AtomProvenance(i, j, 1)))
    diffuse = 1 - sum(w for w, _ in atoms)
    if diffuse <= 0:
        raise InternalInvariantViolation("two-projections branch left no diffuse part")
    kind = DiffuseAbelianTensorMatrix(2)
    algebra = make_algebra([(diffuse, kind)] + [(w, SCALARS) for w, _ in atoms])
    # displayed as: first atom, diffuse part, remaining atoms
    cells = [(w, SCALARS, (p.left_index, p.right_index)) for w, p in atoms]
    layout = tuple(cells[:1] + [(diffuse, kind, None)] + cells[1:])
    return FreeProductResult(algebra, None, tuple(atoms), Justification("Thm1.1"),
                             layout=layout)


def free_product(a: Algebra, b: Algebra, strict: bool = False) -> FreeProductResult:
    """Isomorphism class of the free product ``a * b``."""
    if a.is_scalars() or b.is_scalars():
        other = b if a.is_scalars() else a
        return FreeProductResult(other, None, (), Justification("Trivial", "free product with C"))

    da, db = dim(a), dim(b)
    if a.is_two_atom_abelian() and b.is_two_atom_abelian():
        return _two_projections(a, b)
    if da + db < 5:
        # only C+C has dimension 2, so this is unreachable
        raise HypothesisViolation(f"dimensions {da} + {db} < 5 outside the two-projections case")

    label = classify(a, b)
    if strict and label == "Extrapolated":
        raise ExtrapolationRejected(
            f"no stated result covers {a} * {b}; rerun without strict to extrapolate")

    atoms = pair_atoms(a, b)
    for _, prov in atoms:
        n = a.kinds[prov.left_index].n
        m = b.kinds[prov.right_index].n
        if n != 1 and m != 1:
            raise InternalInvariantViolation(f"atom from M{n} and M{m}")
    gamma = 1 - sum((w for w, _ in atoms), Fraction(0))
    if gamma <= 0:
        raise InternalInvariantViolation(f"atoms exhaust the trace (remaining weight {gamma})")
    s = solve_factor_param(fdim(a) + fdim(b), gamma, atoms)

    factor = FreeGroupFactor(s)
    algebra = make_algebra([(gamma, factor)] + [(w, MatrixFactor(p.size)) for w, p in atoms])
    layout = ((gamma, factor, None),) + tuple(
        (w, MatrixFactor(p.size), (p.left_index, p.right_index)) for w, p in atoms)
    return FreeProductResult(algebra, s, tuple(atoms), Justification(label), layout=layout)


def free_product_fold(items: Sequence[Algebra], strict: bool = False) -> FreeProductResult:
    """Left fold ``((A1 * A2) * A3) * ...`` keeping every step's justification."""
    if len(items) < 2:
        raise RangeError("a fold needs at least two algebras")
    result = free_product(items[0], items[1], strict)
    trace = list(result.trace)
    for item in items[2:]:
        result = free_product(result.algebra, item, strict)
        trace.extend(result.trace)
    return FreeProductResult(result.algebra, result.factor_param, result.atoms,
                             result.justification, tuple(trace), result.layout)
