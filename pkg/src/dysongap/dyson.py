"""Generalized Dyson lemma on P^1 x P^1, checked exactly.

With both curves of genus 0 the intersection numbers of a divisor of class
O(d1, d2) are ``D.D = 2 d1 d2``, ``D.F1 = d2`` and ``D.F2 = d1``, so both
sides of the inequality are computable from polynomial data.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .index import IndexValue, Weight, _weight, v_of, weighted_index
from .poly import BiPoly, DivisorData, X, Y, _rat, analyze_divisor


class HypothesisError(ValueError):
    """A standing hypothesis of the inequality is not met by the input."""


@dataclass(frozen=True)
class PointConfig:
    points: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple((_rat(p), _rat(q)) for p, q in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def m1(self) -> int:
        return len({p for p, _ in self.points})

    @property
    def m2(self) -> int:
        return len({q for _, q in self.points})

    def __iter__(self):
        return iter(self.points)


def _config(cfg) -> PointConfig:
    return cfg if isinstance(cfg, PointConfig) else PointConfig(tuple(cfg))


@dataclass(frozen=True)
class DysonReport:
    indices: tuple[IndexValue, ...]
    lhs: Fraction
    rhs: Fraction
    term_main: Fraction
    term_error: Fraction
    holds: bool
    mode: str = "thm51"


def _rhs(D: DivisorData, cfg: PointConfig, w: Weight) -> tuple[Fraction, Fraction]:
    denom = 2 * w.b1 * w.b2
    main = Fraction(D.self_intersection) / denom
    # genus 0: 2g1 - 2 + m1 = m1 - 2
    err = D.e_of_D * Fraction(D.dot_F1) / denom * max(cfg.m1 - 2, 0)
    return main, err


def _check_effective(D: DivisorData):
    if D.poly.is_zero:
        raise HypothesisError("D must be a nonzero effective divisor")
    if D.d1 < D.poly.deg_x or D.d2 < D.poly.deg_y:
        raise HypothesisError("designated bidegree below actual bidegree")


def dyson_report(D: DivisorData, cfg, w) -> DysonReport:
    """Both sides of ``sum V(I_k) <= D.D/(2 b1 b2) + e(D) D.F1/(2 b1 b2) max(m1 - 2, 0)``."""
    cfg, w = _config(cfg), _weight(w)
    _check_effective(D)
    if cfg.m1 != cfg.m or cfg.m2 != cfg.m:
        raise HypothesisError("hypothesis m1=m2=m violated")
    if w.b1 > D.dot_F2 or w.b2 > D.dot_F1:
        raise HypothesisError(
            f"weight ({w.b1}, {w.b2}) exceeds (D.F2, D.F1) = ({D.dot_F2}, {D.dot_F1})"
        )
    indices = tuple(weighted_index(D.poly, Q, w) for Q in cfg)
    lhs = sum((v_of(I.value) for I in indices), Fraction(0))
    main, err = _rhs(D, cfg, w)
    return DysonReport(indices, lhs, main + err, main, err, lhs <= main + err, "thm51")


def dyson2_report(D: DivisorData, cfg, w) -> DysonReport:
    """The fiber-free form: ``sum I_k**2 / 2`` against the same right-hand side."""
    cfg, w = _config(cfg), _weight(w)
    _check_effective(D)
    if D.has_fibers:
        raise HypothesisError("fiber in D")
    indices = tuple(weighted_index(D.poly, Q, w) for Q in cfg)
    lhs = sum((I.value**2 / 2 for I in indices), Fraction(0))
    main, err = _rhs(D, cfg, w)
    return DysonReport(indices, lhs, main + err, main, err, lhs <= main + err, "thm52")


@dataclass(frozen=True)
class StripResult:
    stripped: DivisorData
    shifts: tuple[tuple[int, int], ...]
    index_full: tuple[Fraction, ...]
    index_reassembled: tuple[Fraction, ...]  # I'_k + x_k/b1 + y_k/b2

    @property
    def verified(self) -> bool:
        return self.index_full == self.index_reassembled


def strip_fibers(D: DivisorData, cfg, w) -> StripResult:
    """Remove every fiber component and check ``I_k = I'_k + x_k/b1 + y_k/b2``.

    ``x_k`` (``y_k``) is the multiplicity in ``D`` of the fiber through
    ``Q_k`` of the first (second) projection.
    """
    cfg, w = _config(cfg), _weight(w)
    _check_effective(D)
    if cfg.m1 != cfg.m or cfg.m2 != cfg.m:
        raise HypothesisError("hypothesis m1=m2=m violated")
    core = BiPoly.const(1)
    for c in D.components:
        if not c.is_fiber:
            core = core * c.factor**c.multiplicity
    stripped = analyze_divisor(core, core.bidegree)
    shifts, full, again = [], [], []
    for p, q in cfg:
        xk, yk = D.fiber_multiplicity_x(p), D.fiber_multiplicity_y(q)
        shifts.append((xk, yk))
        full.append(weighted_index(D.poly, (p, q), w).value)
        again.append(weighted_index(core, (p, q), w).value + xk / w.b1 + yk / w.b2)
    return StripResult(stripped, tuple(shifts), tuple(full), tuple(again))


# ---------------------------------------------------------------------------
# seeded random corpus


@dataclass(frozen=True)
class CorpusCase:
    index: int
    divisor: DivisorData
    config: PointConfig
    weight: Weight


@dataclass
class CaseOutcome:
    index: int
    holds: bool
    lhs: Fraction
    rhs: Fraction
    has_fibers: bool
    strip_verified: bool | None = None
    reduced_holds: bool | None = None


@dataclass
class CorpusSummary:
    seed: int
    n_cases: int
    n_holds: int
    n_fiber_cases: int
    n_strip_verified: int
    n_reduction_consistent: int
    failures: list[int] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return self.n_holds == self.n_cases


def _small_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-6, 6), rng.choice((1, 1, 1, 2, 3)))


def _mixed_factor(rng: random.Random, budget: tuple[int, int], through) -> BiPoly | None:
    bx, by = budget
    if bx < 1 or by < 1:
        return None
    a, b = rng.randint(1, min(bx, 2)), rng.randint(1, min(by, 2))
    h = BiPoly()
    for i in range(a + 1):
        for j in range(b + 1):
            if rng.random() < 0.6 or (i, j) in ((a, 0), (0, b)):
                h = h + BiPoly.const(rng.randint(-3, 3)) * X**i * Y**j
    if through is not None:
        h = h - h(*through)
    if h.deg_x < 1 or h.deg_y < 1:
        return None
    return h


def make_case(seed: int, i: int, max_bidegree: tuple[int, int]) -> CorpusCase:
    """Deterministically generate case ``i`` of the corpus for ``seed``."""
    rng = random.Random(f"dyson-corpus:{seed}:{i}")
    D1, D2 = max_bidegree
    m = rng.randint(1, 4)
    xs = sorted(rng.sample(range(-6, 7), m))
    ys = sorted(rng.sample(range(-6, 7), m))
    rng.shuffle(ys)
    den = rng.choice((1, 1, 2))
    pts = tuple((Fraction(p, den), Fraction(q, den)) for p, q in zip(xs, ys))

    f = BiPoly.const(rng.choice((1, 2, -3)))
    used = [0, 0]
    for _ in range(rng.randint(1, 5)):
        budget = (D1 - used[0], D2 - used[1])
        kind = rng.random()
        k = rng.choice((1, 1, 1, 2, 2, 3))
        through = rng.choice(pts)
        if kind < 0.25 and budget[0] >= k:
            g = X - (through[0] if rng.random() < 0.8 else _small_rational(rng))
        elif kind < 0.45 and budget[1] >= k:
            g = Y - (through[1] if rng.random() < 0.8 else _small_rational(rng))
        else:
            g = _mixed_factor(rng, (budget[0] // k, budget[1] // k),
                              through if rng.random() < 0.85 else None)
            if g is None:
                continue
        if g.deg_x * k > budget[0] or g.deg_y * k > budget[1]:
            continue
        f = f * g**k
        used = [f.deg_x, f.deg_y]
    d1 = max(f.deg_x, 1) + rng.randint(0, max(0, D1 - max(f.deg_x, 1)))
    d2 = max(f.deg_y, 1) + rng.randint(0, max(0, D2 - max(f.deg_y, 1)))
    if rng.random() < 0.6:
        d1, d2 = max(f.deg_x, 1), max(f.deg_y, 1)
    D = analyze_divisor(f, (d1, d2))
    q1, q2 = rng.choice((1, 2, 3, 4, 6)), rng.choice((1, 2, 3, 4, 6))
    w = Weight(Fraction(rng.randint(1, q1 * d1), q1), Fraction(rng.randint(1, q2 * d2), q2))
    return CorpusCase(i, D, PointConfig(pts), w)


def run_case(case: CorpusCase) -> CaseOutcome:
    rep = dyson_report(case.divisor, case.config, case.weight)
    out = CaseOutcome(case.index, rep.holds, rep.lhs, rep.rhs, case.divisor.has_fibers)
    if out.has_fibers:
        st = strip_fibers(case.divisor, case.config, case.weight)
        out.strip_verified = st.verified
        out.reduced_holds = dyson2_report(st.stripped, case.config, case.weight).holds
    return out


def _run_chunk(args) -> list[CaseOutcome]:
    seed, idxs, max_bidegree = args
    return [run_case(make_case(seed, i, max_bidegree)) for i in idxs]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("DYSON_GAP_THREADS", "1")))
    except ValueError:
        return 1


def random_dyson_corpus(seed: int, n_cases: int, max_bidegree=(4, 4), workers: int | None = None):
    """Run the inequality on ``n_cases`` seeded random admissible cases.

    Returns ``(summary, outcomes)``; outcomes are ordered by case index, so the
    result does not depend on ``workers``.
    """
    workers = workers or _workers()
    idxs = list(range(n_cases))
    if workers > 1 and n_cases > 1:
        chunks = [(seed, idxs[k::workers], tuple(max_bidegree)) for k in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            outcomes = [o for part in ex.map(_run_chunk, chunks) for o in part]
        outcomes.sort(key=lambda o: o.index)
    else:
        outcomes = _run_chunk((seed, idxs, tuple(max_bidegree)))
    fiber = [o for o in outcomes if o.has_fibers]
    summary = CorpusSummary(
        seed=seed,
        n_cases=n_cases,
        n_holds=sum(o.holds for o in outcomes),
        n_fiber_cases=len(fiber),
        n_strip_verified=sum(bool(o.strip_verified) for o in fiber),
        n_reduction_consistent=sum(bool(o.strip_verified and o.reduced_holds and o.holds) for o in fiber),
        failures=[o.index for o in outcomes if not o.holds],
    )
    return summary, outcomes
