"""Group von Neumann algebras of finite and infinite amenable groups.

A finite group enters only through the dimensions of its irreducible
representations; ``L(G)`` is then ``(+) M_{d}`` with weights ``d^2/|G|``.
An infinite amenable group gives a diffuse hyperfinite algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional

from vnfree.algebra import (
    INF,
    Algebra,
    DiffuseUnspecified,
    ExtParam,
    MatrixFactor,
    is_inf,
    make_algebra,
    single,
)
from vnfree.errors import HypothesisViolation, ParseError, TableValidationError, UnknownGroup


@dataclass(frozen=True)
class GroupDescriptor:
    name: str
    order: int | float
    irrep_dims: tuple[int, ...] = ()
    amenable: bool = True

    def __post_init__(self):
        object.__setattr__(self, "irrep_dims", tuple(self.irrep_dims))
        if is_inf(self.order):
            if self.irrep_dims:
                raise TableValidationError(f"{self.name}: infinite group cannot list irreps")
            return
        if not isinstance(self.order, int) or self.order < 1:
            raise TableValidationError(f"{self.name}: order must be a positive integer or inf")
        if not self.irrep_dims or any(d < 1 for d in self.irrep_dims):
            raise TableValidationError(f"{self.name}: irrep dimensions must be positive")
        total = sum(d * d for d in self.irrep_dims)
        if total != self.order:
            raise TableValidationError(
                f"{self.name}: sum of squared irrep dimensions is {total}, not {self.order}")

    @property
    def is_finite(self) -> bool:
        return not is_inf(self.order)


_BUILTIN = {
    "S3": (6, (1, 1, 2)),
    "D4": (8, (1, 1, 1, 1, 2)),
    "Q8": (8, (1, 1, 1, 1, 2)),
    "A4": (12, (1, 1, 1, 3)),
    "S4": (24, (1, 1, 2, 3, 3)),
}

_CYCLIC = re.compile(r"Z_?(\d+)")


def builtin_group(name: str) -> GroupDescriptor:
    """Look up ``Z``, ``Z<n>`` / ``Z_<n>`` (n >= 2), S3, D4, Q8, A4 or S4."""
    if name == "Z":
        return GroupDescriptor("Z", INF)
    match = _CYCLIC.fullmatch(name)
    if match:
        n = int(match.group(1))
        if n >= 2:
            return GroupDescriptor(name, n, (1,) * n)
    if name in _BUILTIN:
        order, dims = _BUILTIN[name]
        return GroupDescriptor(name, order, dims)
    raise UnknownGroup(f"unknown group {name!r}")


def resolve_group(name: str, extra: Optional[Mapping[str, GroupDescriptor]] = None):
    if extra and name in extra:
        return extra[name]
    return builtin_group(name)


def group_algebra(g: GroupDescriptor) -> Algebra:
    if not g.is_finite:
        return single(DiffuseUnspecified())
    return make_algebra([(Fraction(d * d, g.order), MatrixFactor(d)) for d in g.irrep_dims])


def group_product_param(g: GroupDescriptor, h: GroupDescriptor) -> ExtParam:
    """``s`` with ``L(G * H) = L(F_s)``, namely ``2 - 1/|G| - 1/|H|``."""
    if g.order < 2 or h.order < 2 or g.order + h.order < 5:
        raise HypothesisViolation("needs |G|, |H| >= 2 and |G| + |H| >= 5")

    def inverse(order):
        return Fraction(0) if is_inf(order) else Fraction(1, order)

    return 2 - inverse(g.order) - inverse(h.order)


def parse_group_table(text: str, source: str = "<table>") -> list[GroupDescriptor]:
    """Parse ``NAME ORDER d1,d2,...`` lines; ``ORDER`` may be ``inf`` (dims omitted)."""
    groups = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) not in (2, 3):
            raise ParseError(f"{source}: expected 'NAME ORDER dims'", lineno, 1)
        name, order_text = fields[0], fields[1]
        if order_text.lower() == "inf":
            if len(fields) == 3:
                raise ParseError(f"{source}: infinite group takes no dimensions", lineno,
                                 raw.index(fields[2]) + 1)
            groups.append(GroupDescriptor(name, INF))
            continue
        if len(fields) != 3:
            raise ParseError(f"{source}: missing irrep dimensions", lineno, len(raw) + 1)
        try:
            order = int(order_text)
            dims = tuple(int(d) for d in fields[2].split(","))
        except ValueError:
            raise ParseError(f"{source}: malformed number", lineno, 1) from None
        groups.append(GroupDescriptor(name, order, dims))
    return groups


def load_group_table(path) -> list[GroupDescriptor]:
    return parse_group_table(Path(path).read_text(encoding="utf-8"), str(path))
