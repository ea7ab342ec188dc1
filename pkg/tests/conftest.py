from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import strategies as st

from vnfree.algebra import (
    LZ,
    SCALARS,
    AbelianTensorHyperfinite,
    DiffuseAbelianTensorMatrix,
    FreeGroupFactor,
    HyperfiniteII1,
    MatrixFactor,
    make_algebra,
)


def fdim_double_sum(entries):
    """Free dimension as ``sum w^2 d + sum_{i != j} w_i w_j``, entry by entry.

    Independent of the engine's closed form; used as a test oracle.
    """
    weights = [Fraction(w) for w, _ in entries]
    total = sum((a * b for a, b in permutations(weights, 2)), Fraction(0))
    for w, kind in entries:
        if isinstance(kind, MatrixFactor):
            total += w * w * (1 - Fraction(1, kind.n ** 2))
        elif isinstance(kind, FreeGroupFactor):
            total += w * w * kind.param
        else:
            total += w * w
    return total


lf_params = st.builds(lambda q, k: Fraction(q + k, q),
                      st.integers(1, 6), st.integers(1, 18))

kinds = st.one_of(
    st.just(SCALARS),
    st.integers(2, 4).map(MatrixFactor),
    st.just(LZ),
    lf_params.map(FreeGroupFactor),
)

all_kinds = st.one_of(
    kinds,
    st.integers(2, 3).map(DiffuseAbelianTensorMatrix),
    st.just(HyperfiniteII1()),
    st.just(AbelianTensorHyperfinite()),
)


@st.composite
def algebras(draw, kind_strategy=kinds, max_summands=4):
    parts = draw(st.lists(st.integers(1, 6), min_size=1, max_size=max_summands))
    total = sum(parts)
    ks = [draw(kind_strategy) for _ in parts]
    return make_algebra([(Fraction(p, total), k) for p, k in zip(parts, ks)])


@pytest.fixture
def two_atom():
    def build(alpha):
        alpha = Fraction(alpha)
        return make_algebra([(alpha, SCALARS), (1 - alpha, SCALARS)])
    return build


#: ``criterion N: PASS|FAIL`` lines from the acceptance tests, echoed in the summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
