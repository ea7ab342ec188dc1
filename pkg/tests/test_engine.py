from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import algebras, fdim_double_sum, lf_params
from vnfree.algebra import (
    INF,
    LZ,
    SCALARS,
    DiffuseAbelianTensorMatrix,
    FreeGroupFactor,
    HyperfiniteII1,
    MatrixFactor,
    dim,
    iso_eq,
    make_algebra,
    single,
)
from vnfree.closed_forms import cf_prop32, cf_times_matrix
from vnfree.engine import (
    AtomProvenance,
    classify,
    free_product,
    free_product_fold,
    solve_factor_param,
)
from vnfree.errors import (
    ExtrapolationRejected,
    InternalInvariantViolation,
    RangeError,
)
from vnfree.fdim import fdim, lumpiness


def two_atom(alpha):
    alpha = F(alpha)
    return make_algebra([(alpha, SCALARS), (1 - alpha, SCALARS)])


def lf(s, weight=1, rest=()):
    return make_algebra([(weight, FreeGroupFactor(s))] + list(rest))


def test_trivial_branch():
    m2 = single(MatrixFactor(2))
    for res in (free_product(single(SCALARS), m2), free_product(m2, single(SCALARS))):
        assert res.algebra == m2
        assert res.justification.label == "Trivial"
        assert res.factor_param is None


def test_two_projections_golden():
    res = free_product(two_atom(F(3, 5)), two_atom(F(1, 2)))
    assert res.justification.label == "Thm1.1"
    assert res.algebra == make_algebra([(F(1, 10), SCALARS), (F(1, 10), SCALARS),
                                        (F(4, 5), DiffuseAbelianTensorMatrix(2))])
    assert res.factor_param is None
    # atoms come from the larger atom of the first input
    assert sorted((p.left_index, p.right_index) for _, p in res.atoms) == [(1, 0), (1, 1)]


def test_two_projections_balanced():
    res = free_product(two_atom(F(1, 2)), two_atom(F(1, 2)))
    assert res.algebra == single(DiffuseAbelianTensorMatrix(2))
    assert res.atoms == ()


@pytest.mark.parametrize("alpha, beta", [(F(3, 5), F(1, 2)), (F(9, 10), F(2, 3)),
                                         (F(1, 2), F(1, 3)), (F(3, 4), F(3, 4))])
def test_two_projections_matches_closed_form(alpha, beta):
    # the closed form needs alpha >= max(beta, 1 - beta); normalise by swapping atoms
    a, b = max(alpha, 1 - alpha), max(beta, 1 - beta)
    big, small = max(a, b), min(a, b)
    expected = make_algebra([(big + small - 1, SCALARS), (2 * (1 - big),
                             DiffuseAbelianTensorMatrix(2)), (big - small, SCALARS)])
    assert free_product(two_atom(alpha), two_atom(beta)).algebra == expected


@pytest.mark.parametrize("a, b, expected, label", [
    (lf(2), lf(3), lf(5), "Prop2.4"),
    (two_atom(F(1, 2)), make_algebra([(F(1, 3), SCALARS)] * 3), lf(F(7, 6)), "Thm2.3"),
    (single(MatrixFactor(2)), single(MatrixFactor(2)), lf(F(3, 2)), "Thm3.6"),
    (two_atom(F(2, 3)), single(MatrixFactor(2)), lf(F(43, 36)), "Thm3.6"),
    (two_atom(F(4, 5)), single(MatrixFactor(2)),
     lf(F(9, 8), F(4, 5), [(F(1, 5), MatrixFactor(2))]), "Thm3.6"),
    (two_atom(F(9, 10)), single(MatrixFactor(3)),
     lf(F(88, 81), F(9, 10), [(F(1, 10), MatrixFactor(3))]), "Thm3.6"),
    (single(LZ), make_algebra([(F(1, 2), LZ), (F(1, 2), SCALARS)]), lf(F(7, 4)), "Thm4.6"),
])
def test_general_branch_examples(a, b, expected, label):
    res = free_product(a, b)
    assert res.algebra == expected
    assert res.justification.label == label


def test_m2_m2_agrees_with_closed_form():
    assert free_product(single(MatrixFactor(2)), single(MatrixFactor(2))).algebra == \
        cf_times_matrix(0, 1, [(1, 2)], 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_second_branch_parameter_for_several_n(n):
    inv = F(1, n * n)
    alpha = 1 - inv / 2
    res = free_product(two_atom(alpha), single(MatrixFactor(n)))
    assert res.factor_param == 1 + inv - 2 * inv * inv
    assert res.algebra == cf_prop32(alpha, n)


def test_atom_provenance():
    res = free_product(two_atom(F(4, 5)), single(MatrixFactor(2)))
    ((weight, prov),) = res.atoms
    assert weight == F(1, 5)
    assert prov == AtomProvenance(1, 0, 2)


def test_infinite_parameter():
    res = free_product(lf(INF), single(MatrixFactor(2)))
    assert res.algebra == lf(INF)
    res = free_product(lf(INF), two_atom(F(9, 10)))
    assert res.factor_param == INF


@pytest.mark.parametrize("a, b, label", [
    (lf(2, F(1, 2), [(F(1, 2), SCALARS)]), two_atom(F(1, 3)), "Prop2.4"),
    (lf(2, F(1, 2), [(F(1, 2), MatrixFactor(3))]), single(MatrixFactor(2)), "Prop3.5"),
    (single(MatrixFactor(2)), lf(2, F(1, 2), [(F(1, 2), MatrixFactor(3))]), "Prop3.5"),
    (single(HyperfiniteII1()), two_atom(F(1, 3)), "Thm4.6"),
    (lf(3), single(HyperfiniteII1()), "Rem1.8"),
    (lf(2, F(1, 2), [(F(1, 4), MatrixFactor(2)), (F(1, 4), LZ)]), two_atom(F(1, 2)),
     "Extrapolated"),
])
def test_justification_labels(a, b, label):
    assert classify(a, b) == label
    assert free_product(a, b).justification.label == label


def test_strict_mode_rejects_extrapolation():
    a = lf(2, F(1, 2), [(F(1, 4), MatrixFactor(2)), (F(1, 4), LZ)])
    b = two_atom(F(1, 2))
    with pytest.raises(ExtrapolationRejected):
        free_product(a, b, strict=True)
    free_product(a, b, strict=False)


def test_solve_factor_param_examples():
    assert solve_factor_param(F(3, 2), F(1), []) == F(3, 2)
    atom = [(F(1, 2), AtomProvenance(0, 0, 1))]
    assert solve_factor_param(F(7, 8), F(1, 2), atom) == F(3, 2)
    atom = [(F(1, 10), AtomProvenance(1, 0, 3))]
    assert solve_factor_param(F(481, 450), F(9, 10), atom) == F(88, 81)
    assert solve_factor_param(INF, F(1, 2), []) == INF


def test_solve_factor_param_errors():
    with pytest.raises(InternalInvariantViolation):
        solve_factor_param(F(1), F(1), [])
    with pytest.raises(RangeError):
        solve_factor_param(F(2), F(0), [])


def test_fold():
    lz = single(LZ)
    res = free_product_fold([lz, lz])
    assert res.algebra == lf(2)
    assert free_product_fold([lz, lz, lz]).algebra == lf(3)
    z2 = two_atom(F(1, 2))
    res = free_product_fold([z2, z2, z2])
    assert res.algebra == lf(F(3, 2))
    assert [j.label for j in res.trace] == ["Thm1.1", "Thm4.6"]
    with pytest.raises(RangeError):
        free_product_fold([lz])


def test_fold_parameter_grows():
    z2 = two_atom(F(1, 2))
    params = [free_product_fold([z2] * k).factor_param for k in range(3, 12)]
    assert params == [F(k, 2) for k in range(3, 12)]


# -- properties --------------------------------------------------------------


@settings(max_examples=300)
@given(algebras(), algebras())
def test_fdim_additive(a, b):
    out = free_product(a, b).algebra
    assert fdim(out) == fdim(a) + fdim(b)
    assert fdim_double_sum(out.summands) == fdim_double_sum(a.summands) + \
        fdim_double_sum(b.summands)


@settings(max_examples=300)
@given(algebras(), algebras())
def test_commutative(a, b):
    assert iso_eq(free_product(a, b).algebra, free_product(b, a).algebra)


@settings(max_examples=200)
@given(algebras(), algebras(), algebras())
def test_associative(a, b, c):
    ab_c = free_product(free_product(a, b).algebra, c).algebra
    a_bc = free_product(a, free_product(b, c).algebra).algebra
    assert iso_eq(ab_c, a_bc)


@settings(max_examples=300)
@given(algebras(), algebras())
def test_result_invariants(a, b):
    res = free_product(a, b)
    assert sum(res.algebra.weights) == 1
    assert all(w > 0 for w, _ in res.atoms)
    n_a = len(a.matrix_summands())
    n_b = len(b.matrix_summands())
    assert len(res.atoms) <= n_a * n_b
    for _, prov in res.atoms:
        assert a.kinds[prov.left_index].n == 1 or b.kinds[prov.right_index].n == 1
        assert prov.size == max(a.kinds[prov.left_index].n, b.kinds[prov.right_index].n)
    if res.factor_param is not None:
        assert res.factor_param > 1


@settings(max_examples=300)
@given(algebras(), algebras())
def test_factor_iff_not_lumpy(a, b):
    assume(dim(a) >= 2 and dim(b) >= 2 and dim(a) + dim(b) >= 5)
    out = free_product(a, b).algebra
    has_matrix = any(isinstance(k, MatrixFactor) for k in out.kinds)
    assert has_matrix == (lumpiness(a) + lumpiness(b) > 1)


@given(algebras(), lf_params)
def test_free_group_shift(a, r):
    assume(not a.is_scalars())
    base = free_product(single(LZ), a).algebra
    assume(len(base) == 1 and isinstance(base.kinds[0], FreeGroupFactor))
    s = base.kinds[0].param - 1
    assert free_product(lf(r), a).algebra == lf(r + s)


@given(st.integers(1, 11).map(lambda k: F(k, 12)))
def test_lz_with_partially_diffuse_algebra(delta):
    # L(Z) * (L(Z)_delta + C_{1-delta}) = L(F(1 + delta^2 + 2 delta (1 - delta)))
    t = 1 + delta ** 2 + 2 * delta * (1 - delta)
    b = make_algebra([(delta, LZ), (1 - delta, SCALARS)])
    assert free_product(single(LZ), b).algebra == lf(t)


@given(st.integers(1, 19).map(lambda k: F(k, 20)))
def test_every_parameter_below_two_is_reached(delta):
    # for 1 < t < 2, L(F_t) = L(Z) * (L(Z)_delta + C) with delta^2 + 2 delta (1 - delta) = t - 1
    t = 1 + 2 * delta - delta ** 2
    assert 1 < t < 2
    b = make_algebra([(delta, LZ), (1 - delta, SCALARS)])
    assert free_product(single(LZ), b).algebra == lf(t)
