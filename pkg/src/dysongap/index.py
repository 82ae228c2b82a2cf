"""Weighted vanishing index, multiplicity, the area function V and the Cauchy check."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .poly import BiPoly, PolyError, _rat, poly_shift

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Weight:
    b1: Fraction
    b2: Fraction

    def __post_init__(self):
        b1, b2 = _rat(self.b1), _rat(self.b2)
        if b1 <= 0 or b2 <= 0:
            raise PolyError(f"weights must be positive, got ({b1}, {b2})")
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "b2", b2)

    def level(self, i1: int, i2: int) -> Fraction:
        return i1 / self.b1 + i2 / self.b2

    def __iter__(self):
        return iter((self.b1, self.b2))


@dataclass(frozen=True)
class IndexValue:
    value: Fraction
    attaining_exponent: tuple[int, int]


def _point(P) -> Point:
    p, q = P
    return _rat(p), _rat(q)


def _weight(w) -> Weight:
    return w if isinstance(w, Weight) else Weight(*w)


def weighted_index(f: BiPoly, P, w) -> IndexValue:
    """Minimum of ``i1/b1 + i2/b2`` over nonzero Taylor coefficients of ``f`` at ``P``.

    Ties are broken by the lexicographically smallest exponent.
    """
    if f.is_zero:
        raise PolyError("index of zero is +inf")
    w = _weight(w)
    g = poly_shift(f, *_point(P))
    best = min(g.terms, key=lambda e: (w.level(*e), e))
    return IndexValue(w.level(*best), best)


def multiplicity(f: BiPoly, P) -> int:
    """Order of vanishing of ``f`` at ``P`` (index at weight (1, 1))."""
    v = weighted_index(f, P, Weight(1, 1)).value
    assert v.denominator == 1
    return int(v)


def v_of(a) -> Fraction:
    """Area of ``{0 <= s, t <= 1, s + t <= a}``."""
    a = _rat(a)
    if a < 0:
        raise ValueError(f"V is defined for a >= 0, got {a}")
    if a <= 1:
        return a * a / 2
    if a <= 2:
        return 1 - (2 - a) ** 2 / 2
    return Fraction(1)


@dataclass
class CauchyReport:
    s_upper: Fraction
    checks: list[dict]
    holds: bool
    diagnostics: dict = field(default_factory=dict)


def cauchy_bound_report(f: BiPoly, P, r1, r2, grid: int = 64) -> CauchyReport:
    """Check ``|a_{i1,i2}| <= r1**-i1 * r2**-i2 * S`` for every Taylor coefficient.

    ``S`` is the sum of ``|a| r1**i1 r2**i2``, which bounds ``|f|`` from above
    on the closed polydisc of radii ``(r1, r2)`` about ``P``.  A sampled sup on
    the boundary torus is reported under ``diagnostics`` only.
    """
    if f.is_zero:
        raise PolyError("zero polynomial")
    r1, r2 = _rat(r1), _rat(r2)
    if r1 <= 0 or r2 <= 0:
        raise ValueError("radii must be positive")
    g = poly_shift(f, *_point(P))
    s_upper = sum((abs(c) * r1**i * r2**j for (i, j), c in g.terms.items()), Fraction(0))
    checks = []
    for (i, j), c in sorted(g.terms.items()):
        bound = s_upper / (r1**i * r2**j)
        checks.append({"exponent": (i, j), "abs_coeff": abs(c), "bound": bound, "ok": abs(c) <= bound})

    theta = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    z1 = float(r1) * np.exp(1j * theta)[:, None]
    z2 = float(r2) * np.exp(1j * theta)[None, :]
    vals = np.zeros((grid, grid), dtype=complex)
    for (i, j), c in g.terms.items():
        vals += float(c) * z1**i * z2**j
    sampled = float(np.abs(vals).max())
    diag = {"sampled_torus_sup": sampled, "grid": grid, "ratio_sampled_to_bound": sampled / float(s_upper)}
    return CauchyReport(s_upper, checks, all(c["ok"] for c in checks), diag)
