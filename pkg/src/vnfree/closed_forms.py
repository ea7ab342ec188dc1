"""Special-case formulas for free products, written out case by case.

These deliberately avoid :mod:`vnfree.engine` and :mod:`vnfree.fdim`: free
dimensions here are computed with the double-sum form
``sum w_i^2 d_i + sum_{i != j} w_i w_j`` rather than the engine's
``1 + sum w^2 (d - 1)``, so the two routes can check each other.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Sequence

from vnfree.algebra import (
    INF,
    SCALARS,
    Algebra,
    ExtParam,
    FreeGroupFactor,
    MatrixFactor,
    as_ext,
    is_inf,
    make_algebra,
    single,
)
from vnfree.errors import RangeError, WeightSumError


def _scaled(x: ExtParam, w: Fraction) -> ExtParam:
    # inf * 0 is 0 here: a zero-weight summand is absent
    return Fraction(0) if w == 0 else x * w


def _cross(weights: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in permutations(weights, 2)), Fraction(0))


def _unit(name: str, x) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise RangeError(f"{name} must lie in [0, 1], got {x}")
    return x


def _param(name: str, x, lower=1) -> ExtParam:
    x = as_ext(x)
    if x < lower:
        raise RangeError(f"{name} must be >= {lower}, got {x}")
    return x


def cf_fgf_add(r, rp) -> ExtParam:
    """``L(F_r) * L(F_r') = L(F_{r + r'})``."""
    r, rp = as_ext(r), as_ext(rp)
    if r <= 1 or rp <= 1:
        raise RangeError("free group parameters must be > 1")
    return r + rp


def cf_compress(r, gamma) -> ExtParam:
    """Parameter of the compression (``gamma < 1``) or amplification of ``L(F_r)``."""
    r = _param("r", r)
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise RangeError(f"compression factor must be positive, got {gamma}")
    if is_inf(r):
        return INF
    return 1 + (r - 1) / (gamma * gamma)


def cf_prop17(r, s, gamma, delta) -> Algebra:
    """``(L(F_r)_gamma (+) C) * (L(F_s)_delta (+) C)``; ``gamma == 1`` drops the first ``C``."""
    r, s = _param("r", r), _param("s", s)
    gamma, delta = _unit("gamma", gamma), _unit("delta", delta)
    if gamma == 1:
        t = r + _scaled(s, delta * delta) + 2 * delta * (1 - delta)
        return single(FreeGroupFactor(t))
    if gamma + delta >= 1:
        t = (_scaled(r, gamma * gamma) + 2 * gamma * (1 - gamma)
             + _scaled(s, delta * delta) + 2 * delta * (1 - delta))
        return single(FreeGroupFactor(t))
    total = gamma + delta
    if total == 0:
        return single(SCALARS)
    t = (_scaled(r, gamma * gamma) + _scaled(s, delta * delta) + 4 * gamma * delta) / (total * total)
    return make_algebra([(total, FreeGroupFactor(t)), (1 - total, SCALARS)])


def cf_lemma22(alpha0, r, atoms: Sequence, beta) -> Algebra:
    """``(L(F_r)_alpha0 (+) C_alpha1 (+) ... ) * (C_beta (+) C_{1-beta})``.

    ``atoms`` must be non-increasing and ``1/2 <= beta <= 1``.
    """
    alpha0 = Fraction(alpha0)
    r = _param("r", r)
    atoms = [Fraction(a) for a in atoms]
    beta = Fraction(beta)
    if alpha0 <= 0 or any(a <= 0 for a in atoms):
        raise RangeError("weights must be positive")
    if any(x < y for x, y in zip(atoms, atoms[1:])):
        raise RangeError("atoms must be listed in non-increasing order")
    if alpha0 + sum(atoms) != 1:
        raise WeightSumError(f"weights sum to {alpha0 + sum(atoms)}, not 1")
    if not Fraction(1, 2) <= beta <= 1:
        raise RangeError(f"beta must lie in [1/2, 1], got {beta}")

    if not atoms or beta >= atoms[0]:
        out = [max(beta + a - 1, Fraction(0)) for a in atoms]
    else:
        out = [atoms[0] + beta - 1, atoms[0] - beta]
    out = [w for w in out if w > 0]
    gamma0 = 1 - sum(out)

    fdim_a = _scaled(r, alpha0 * alpha0) + _cross([alpha0] + atoms)
    target = fdim_a + 2 * beta * (1 - beta)
    if is_inf(target):
        s = INF
    else:
        s = (target - _cross([gamma0] + out)) / (gamma0 * gamma0)
    return make_algebra([(gamma0, FreeGroupFactor(s))] + [(w, SCALARS) for w in out])


def cf_prop32(alpha, n: int) -> Algebra:
    """``(C_alpha (+) C_{1-alpha}) * M_n`` for ``1/2 <= alpha < 1``, ``n >= 2``."""
    alpha = Fraction(alpha)
    if not Fraction(1, 2) <= alpha < 1:
        raise RangeError(f"alpha must lie in [1/2, 1), got {alpha}")
    if n < 2:
        raise RangeError(f"n must be >= 2, got {n}")
    inv = Fraction(1, n * n)
    if alpha <= 1 - inv:
        return single(FreeGroupFactor(1 - inv + 2 * alpha * (1 - alpha)))
    # the printed atom weight has an unclosed parenthesis; n^2 (alpha + n^-2 - 1)
    # is the reading that conserves weight
    return make_algebra([
        (n * n * (alpha + inv - 1), MatrixFactor(n)),
        (n * n * (1 - alpha), FreeGroupFactor(1 + inv - 2 * inv * inv)),
    ])


def cf_times_matrix(alpha0, r, matrices: Sequence, m: int) -> Algebra:
    """``(L(F_r)_alpha0 (+) M_{n_1} (+) ... ) * M_m``.

    ``matrices`` is a sequence of ``(weight, n)`` pairs.
    """
    alpha0 = Fraction(alpha0)
    r = _param("r", r)
    mats = [(Fraction(w), int(n)) for w, n in matrices]
    if alpha0 < 0 or any(w <= 0 or n < 1 for w, n in mats):
        raise RangeError("weights must be non-negative and sizes positive")
    if alpha0 + sum(w for w, _ in mats) != 1:
        raise WeightSumError("weights do not sum to 1")
    if m < 2:
        raise RangeError(f"m must be >= 2, got {m}")

    inv_m = Fraction(1, m * m)
    fdim_a = (_scaled(r, alpha0 * alpha0)
              + sum((w * w * (1 - Fraction(1, n * n)) for w, n in mats), Fraction(0))
              + _cross([alpha0] + [w for w, _ in mats]))
    target = fdim_a + 1 - inv_m

    scalars = [w for w, n in mats if n == 1]
    alpha_k = max(scalars, default=None)
    if alpha_k is None or alpha_k <= 1 - inv_m:
        return single(FreeGroupFactor(target))

    atom = m * m * alpha_k - m * m + 1
    gamma0 = 1 - atom
    if gamma0 == 0:
        return single(MatrixFactor(m))
    if is_inf(target):
        s = INF
    else:
        s = (target - atom * atom * (1 - inv_m) - 2 * gamma0 * atom) / (gamma0 * gamma0)
    return make_algebra([(gamma0, FreeGroupFactor(s)), (atom, MatrixFactor(m))])
