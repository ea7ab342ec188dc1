"""Randomised property checks behind ``vnfree verify``.

Every suite draws from its own :class:`random.Random` seeded with
``"<seed>:<suite>"`` so adding or reordering suites never changes another
suite's cases.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from vnfree import engine
from vnfree.algebra import (
    LZ,
    SCALARS,
    Algebra,
    FreeGroupFactor,
    MatrixFactor,
    dim,
    iso_eq,
    make_algebra,
    single,
)
from vnfree.closed_forms import (
    cf_compress,
    cf_fgf_add,
    cf_lemma22,
    cf_prop17,
    cf_prop32,
    cf_times_matrix,
)
from vnfree.errors import ExtrapolationRejected, HypothesisViolation, VnfreeError
from vnfree.fdim import fdim, lumpiness


@dataclass
class VerifyConfig:
    seed: int = 1
    cases: int = 1000
    max_summands: int = 4
    max_matrix_size: int = 4
    weight_denominator_bound: int = 12
    strict: bool = False

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.cases < 0:
            raise ValueError("cases must be non-negative")
        for name in ("max_summands", "max_matrix_size", "weight_denominator_bound"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.max_matrix_size < 2:
            # M_n with n >= 2 must be drawable
            self.max_matrix_size = 2


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    failed: int = 0
    discarded: int = 0
    regenerated: int = 0
    counterexample: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def fail(self, example: str) -> None:
        self.failed += 1
        if self.counterexample is None:
            self.counterexample = example

    def line(self) -> str:
        return (f"{self.name:<20} passed={self.passed} failed={self.failed} "
                f"discarded={self.discarded} regenerated={self.regenerated}")


def _paren(a: Algebra) -> str:
    return f"({a})"


class Sampler:
    """Random algebras and closed-form arguments within the configured bounds."""

    def __init__(self, config: VerifyConfig, stream: str):
        self.cfg = config
        self.rng = random.Random(f"{config.seed}:{stream}")

    def composition(self, parts: int, denominator: Optional[int] = None) -> list[Fraction]:
        """``parts`` positive rationals summing to 1 with a shared bounded denominator."""
        bound = max(parts, self.cfg.weight_denominator_bound)
        d = denominator or self.rng.randint(parts, bound)
        cuts = sorted(self.rng.sample(range(1, d), parts - 1))
        edges = [0] + cuts + [d]
        return [Fraction(b - a, d) for a, b in zip(edges, edges[1:])]

    def unit(self, low=Fraction(0), high=Fraction(1)) -> Fraction:
        """Rational in ``[low, high]`` with denominator at most the bound."""
        q = self.rng.randint(1, self.cfg.weight_denominator_bound)
        lo, hi = -(-low.numerator * q // low.denominator), high.numerator * q // high.denominator
        if lo > hi:
            return low
        return Fraction(self.rng.randint(lo, hi), q)

    def lf_param(self) -> Fraction:
        q = self.rng.randint(1, 6)
        return Fraction(self.rng.randint(q + 1, 4 * q), q)

    def param_at_least_one(self) -> Fraction:
        return Fraction(1) if self.rng.random() < 1 / 3 else self.lf_param()

    def matrix_size(self) -> int:
        return self.rng.randint(2, self.cfg.max_matrix_size)

    def kind(self):
        pick = self.rng.randrange(4)
        if pick == 0:
            return SCALARS
        if pick == 1:
            return MatrixFactor(self.matrix_size())
        if pick == 2:
            return LZ
        return FreeGroupFactor(self.lf_param())

    def algebra(self) -> Algebra:
        n = self.rng.randint(1, self.cfg.max_summands)
        return make_algebra(list(zip(self.composition(n), (self.kind() for _ in range(n)))))


def _product(a: Algebra, b: Algebra, cfg: VerifyConfig) -> Algebra:
    return engine.free_product(a, b, cfg.strict).algebra


def _pairs(sampler: Sampler, report: SuiteReport, count: int,
           accept: Callable[[Algebra, Algebra], bool] = lambda a, b: True):
    """Yield ``count`` pairs, regenerating those the engine or ``accept`` refuses."""
    produced = 0
    while produced < count:
        a, b = sampler.algebra(), sampler.algebra()
        if not accept(a, b):
            report.regenerated += 1
            continue
        if sampler.cfg.strict:
            try:
                engine.free_product(a, b, strict=True)
            except ExtrapolationRejected:
                report.regenerated += 1
                continue
        produced += 1
        yield a, b


def _guard(report: SuiteReport, example: str, check: Callable[[], bool]) -> None:
    try:
        ok = check()
    except VnfreeError as exc:
        report.fail(f"{example}  [{type(exc).__name__}: {exc}]")
        return
    if ok:
        report.passed += 1
    else:
        report.fail(example)


# -- suites ------------------------------------------------------------------


def suite_additivity(cfg: VerifyConfig, count: int) -> SuiteReport:
    report = SuiteReport("fdim_additivity")
    sampler = Sampler(cfg, report.name)
    for a, b in _pairs(sampler, report, count):
        _guard(report, f"{_paren(a)} * {_paren(b)}",
               lambda: fdim(_product(a, b, cfg)) == fdim(a) + fdim(b))
    return report


def suite_commutativity(cfg: VerifyConfig, count: int) -> SuiteReport:
    report = SuiteReport("commutativity")
    sampler = Sampler(cfg, report.name)
    for a, b in _pairs(sampler, report, count):
        _guard(report, f"{_paren(a)} * {_paren(b)}",
               lambda: iso_eq(_product(a, b, cfg), _product(b, a, cfg)))
    return report


def suite_associativity(cfg: VerifyConfig, count: int) -> SuiteReport:
    report = SuiteReport("associativity")
    sampler = Sampler(cfg, report.name)
    attempts = 0
    while report.passed + report.failed < count and attempts < 20 * count:
        attempts += 1
        a, b, c = sampler.algebra(), sampler.algebra(), sampler.algebra()
        example = f"{_paren(a)} * {_paren(b)} * {_paren(c)}"
        try:
            left = _product(_product(a, b, cfg), c, cfg)
            right = _product(a, _product(b, c, cfg), cfg)
        except (HypothesisViolation, ExtrapolationRejected):
            report.discarded += 1
            continue
        except VnfreeError as exc:
            report.fail(f"{example}  [{type(exc).__name__}: {exc}]")
            continue
        if iso_eq(left, right):
            report.passed += 1
        else:
            report.fail(f"{example}  [(AB)C = {left}, A(BC) = {right}]")
    return report


def suite_factoriality(cfg: VerifyConfig, count: int) -> SuiteReport:
    report = SuiteReport("factoriality")
    sampler = Sampler(cfg, report.name)

    def provisos(a, b):
        return dim(a) >= 2 and dim(b) >= 2 and dim(a) + dim(b) >= 5

    def check(a, b):
        out = _product(a, b, cfg)
        has_matrix = any(isinstance(k, MatrixFactor) for k in out.kinds)
        return has_matrix == (lumpiness(a) + lumpiness(b) > 1)

    for a, b in _pairs(sampler, report, count, provisos):
        _guard(report, f"{_paren(a)} * {_paren(b)}", lambda: check(a, b))
    return report


def suite_free_group_shift(cfg: VerifyConfig, count: int, samples: int = 3) -> SuiteReport:
    """If ``L(Z) * A = L(F_{1+s})`` then ``L(F_r) * A = L(F_{r+s})``."""
    report = SuiteReport("free_group_shift")
    sampler = Sampler(cfg, report.name)
    lz = single(LZ)
    done = 0
    while done < count:
        a = sampler.algebra()
        try:
            base = _product(lz, a, cfg)
        except ExtrapolationRejected:
            report.regenerated += 1
            continue
        if len(base) != 1 or not isinstance(base.kinds[0], FreeGroupFactor):
            report.regenerated += 1
            continue
        done += 1
        s = base.kinds[0].param - 1
        for _ in range(samples):
            r = sampler.lf_param()
            _guard(report, f"LF({r}) * {_paren(a)}",
                   lambda: iso_eq(_product(single(FreeGroupFactor(r)), a, cfg),
                                  single(FreeGroupFactor(r + s))))
    return report


def suite_compress(cfg: VerifyConfig, count: int) -> SuiteReport:
    """Compression semigroup law and its compatibility with parameter addition."""
    report = SuiteReport("compress_laws")
    sampler = Sampler(cfg, report.name)
    for _ in range(count):
        r = sampler.param_at_least_one()
        gamma = sampler.unit(Fraction(1, 12), Fraction(3))
        delta = sampler.unit(Fraction(1, 12), Fraction(3))
        rp = sampler.lf_param()
        _guard(report, f"compress(compress(LF({r}), {gamma}), {delta})",
               lambda: cf_compress(cf_compress(r, gamma), delta) == cf_compress(r, gamma * delta))
        if r > 1:
            _guard(report, f"compress(LF({r}) * LF({rp}), {gamma})",
                   lambda: cf_compress(cf_fgf_add(r, rp), gamma)
                   == 1 + (r + rp - 1) / (gamma * gamma))
    return report


# -- closed-form oracle suites -----------------------------------------------


def _with_free(weight, param, rest):
    return make_algebra([(weight, FreeGroupFactor(param))] + rest)


def sample_prop17(s: Sampler):
    r, t = s.param_at_least_one(), s.param_at_least_one()
    gamma = Fraction(1) if s.rng.random() < 0.25 else s.unit()
    delta = 1 - gamma if s.rng.random() < 0.25 else s.unit()
    a = _with_free(gamma, r, [(1 - gamma, SCALARS)])
    b = _with_free(delta, t, [(1 - delta, SCALARS)])
    return (r, t, gamma, delta), a, b


def sample_lemma22(s: Sampler):
    r = s.param_at_least_one()
    if s.rng.random() < 1 / 3:
        # force alpha_1 >= 1/2 so that beta = alpha_1 is admissible
        d = s.rng.randint(2, max(2, s.cfg.weight_denominator_bound))
        a1 = Fraction(s.rng.randint(-(-d // 2), d - 1), d)
        others = s.rng.randint(0, s.cfg.max_summands - 1)
        rest = [x * (1 - a1) for x in s.composition(others + 1)]
        alpha0, atoms = rest[0], sorted([a1] + rest[1:], reverse=True)
        beta = atoms[0]
    else:
        n = s.rng.randint(0, s.cfg.max_summands)
        parts = s.composition(n + 1)
        alpha0, atoms = parts[0], sorted(parts[1:], reverse=True)
        beta = s.unit(Fraction(1, 2), Fraction(1))
    a = _with_free(alpha0, r, [(w, SCALARS) for w in atoms])
    b = make_algebra([(beta, SCALARS), (1 - beta, SCALARS)])
    return (alpha0, r, atoms, beta), a, b


def sample_prop32(s: Sampler):
    n = s.matrix_size()
    if s.rng.random() < 0.25:
        alpha = 1 - Fraction(1, n * n)
    else:
        q = s.rng.randint(2, max(2, s.cfg.weight_denominator_bound))
        alpha = Fraction(s.rng.randint(-(-q // 2), q - 1), q)
    a = make_algebra([(alpha, SCALARS), (1 - alpha, SCALARS)])
    return (alpha, n), a, single(MatrixFactor(n))


def sample_times_matrix(s: Sampler):
    r = s.param_at_least_one()
    m = s.matrix_size()
    k = s.rng.randint(1, s.cfg.max_summands)
    sizes = [s.rng.randint(1, s.cfg.max_matrix_size) for _ in range(k)]
    with_free = s.rng.random() < 2 / 3
    if s.rng.random() < 0.25:
        # boundary: the largest scalar weight is exactly 1 - 1/m^2
        with_free = with_free or k == 1
        sizes[0] = 1
        rest = [x / (m * m) for x in s.composition(k - 1 + with_free)]
        weights = [1 - Fraction(1, m * m)] + rest
    else:
        weights = s.composition(k + with_free)
    alpha0 = weights.pop() if with_free else Fraction(0)
    mats = list(zip(weights, sizes))
    a = _with_free(alpha0, r, [(w, MatrixFactor(n)) for w, n in mats])
    return (alpha0, r, mats, m), a, single(MatrixFactor(m))


ORACLES = {
    "oracle_prop17": (cf_prop17, sample_prop17),
    "oracle_lemma22": (cf_lemma22, sample_lemma22),
    "oracle_prop32": (cf_prop32, sample_prop32),
    "oracle_times_matrix": (cf_times_matrix, sample_times_matrix),
}


def suite_oracle(cfg: VerifyConfig, count: int, name: str) -> SuiteReport:
    formula, sample = ORACLES[name]
    report = SuiteReport(name)
    sampler = Sampler(cfg, name)
    for _ in range(count):
        args, a, b = sample(sampler)
        try:
            expected = formula(*args)
            got = _product(a, b, cfg)
        except ExtrapolationRejected:
            report.regenerated += 1
            continue
        except VnfreeError as exc:
            report.fail(f"{_paren(a)} * {_paren(b)}  [{type(exc).__name__}: {exc}]")
            continue
        if iso_eq(expected, got):
            report.passed += 1
        else:
            report.fail(f"{_paren(a)} * {_paren(b)}  [closed form {expected}, engine {got}]")
    return report


# -- driver ------------------------------------------------------------------


def run_verify(cfg: VerifyConfig) -> list[SuiteReport]:
    n = cfg.cases
    reports = [
        suite_additivity(cfg, n),
        suite_commutativity(cfg, n),
        suite_associativity(cfg, n),
    ]
    reports += [suite_oracle(cfg, n, name) for name in ORACLES]
    reports += [
        suite_factoriality(cfg, n),
        suite_free_group_shift(cfg, n),
        suite_compress(cfg, n),
    ]
    return reports


def format_report(cfg: VerifyConfig, reports: list[SuiteReport]) -> str:
    lines = [f"seed={cfg.seed} cases={cfg.cases} strict={str(cfg.strict).lower()}"]
    if cfg.cases == 0:
        lines.append("warning: 0 cases requested; every suite passes vacuously")
    for report in reports:
        lines.append(report.line())
        if report.counterexample:
            lines.append(f"  counterexample: {report.counterexample}")
    total = sum(r.discarded for r in reports if r.name == "associativity")
    tried = sum(r.discarded + r.passed + r.failed for r in reports if r.name == "associativity")
    if tried:
        lines.append(f"associativity discard rate: {Fraction(total, tried)}")
    lines.append("PASS" if all(r.ok for r in reports) else "FAIL")
    return "\n".join(lines)
