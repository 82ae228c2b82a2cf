"""Small integer polynomials with prescribed weighted index (a desk-scale Siegel lemma).

The small-section step of the arithmetic argument has no direct polynomial
counterpart; what is built here is the classical engine that plays its role:
the vanishing conditions are linear in the coefficients, and an
underdetermined integer system has a nonzero solution of height at most
``(N A)**(M / (N - M))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm

from .dyson import PointConfig, _config
from .index import Weight, _weight, weighted_index
from .linalg import (
    independent_rows,
    integer_kernel,
    iroot_floor,
    shortest_sup,
    size_reduce,
    sup_norm,
)
from .poly import BiPoly, _rat


class SiegelError(ValueError):
    pass


@dataclass(frozen=True)
class SiegelProblem:
    bidegree: tuple[int, int]
    points: PointConfig
    weight: Weight
    tau: Fraction

    def __post_init__(self):
        d1, d2 = self.bidegree
        if d1 < 0 or d2 < 0:
            raise SiegelError("bidegree must be nonnegative")
        object.__setattr__(self, "bidegree", (int(d1), int(d2)))
        object.__setattr__(self, "points", _config(self.points))
        object.__setattr__(self, "weight", _weight(self.weight))
        tau = _rat(self.tau)
        if not 0 < tau <= 2:
            raise SiegelError(f"target index must lie in (0, 2], got {tau}")
        object.__setattr__(self, "tau", tau)

    @property
    def monomials(self) -> list[tuple[int, int]]:
        d1, d2 = self.bidegree
        return [(a, b) for a in range(d1 + 1) for b in range(d2 + 1)]


@dataclass(frozen=True)
class ConstraintSystem:
    monomials: list[tuple[int, int]]
    labels: list[tuple[int, tuple[int, int]]]  # (point index, exponent)
    rows: list[list[Fraction]]

    @property
    def n_unknowns(self) -> int:
        return len(self.monomials)

    @property
    def n_constraints(self) -> int:
        return len(self.rows)

    def integer_rows(self) -> list[list[int]]:
        """Each row multiplied by the lcm of its denominators."""
        out = []
        for row in self.rows:
            den = lcm(*(c.denominator for c in row))
            out.append([int(c * den) for c in row])
        return out


def constrained_exponents(prob: SiegelProblem) -> list[tuple[int, int]]:
    d1, d2 = prob.bidegree
    w = prob.weight
    return [(i, j) for i in range(d1 + 1) for j in range(d2 + 1) if w.level(i, j) < prob.tau]


def vanishing_conditions(prob: SiegelProblem) -> ConstraintSystem:
    """One row per point and exponent of weighted level below ``tau``.

    Row ``(k, (i1, i2))`` expresses the Taylor coefficient at ``Q_k`` of the
    candidate in terms of its monomial coefficients:
    ``sum_{a,b} c_ab C(a,i1) p**(a-i1) C(b,i2) q**(b-i2)``.
    """
    monos = prob.monomials
    exps = constrained_exponents(prob)
    labels, rows = [], []
    for k, (p, q) in enumerate(prob.points):
        for i1, i2 in exps:
            row = []
            for a, b in monos:
                if a < i1 or b < i2:
                    row.append(Fraction(0))
                else:
                    row.append(Fraction(comb(a, i1) * comb(b, i2)) * p ** (a - i1) * q ** (b - i2))
            labels.append((k, (i1, i2)))
            rows.append(row)
    return ConstraintSystem(monos, labels, rows)


@dataclass
class SiegelSolution:
    poly: BiPoly
    height: int
    n_unknowns: int
    n_constraints: int
    rank: int
    coeff_bound: int  # A: largest cleared constraint coefficient
    pigeonhole_bound: int | None
    dependent_rows: list[tuple[int, tuple[int, int]]] = field(default_factory=list)


def pigeonhole_bound(n: int, rank: int, a: int) -> int:
    """``floor((n a)**(rank / (n - rank)))`` computed exactly."""
    if rank >= n:
        raise SiegelError("no nonzero solution guaranteed")
    return iroot_floor(n * a, rank, n - rank)


def siegel_solve(prob: SiegelProblem) -> SiegelSolution:
    """Nonzero integer polynomial meeting the index conditions, height certified.

    Independent rows are selected by fraction-free elimination, an integer
    kernel basis is computed and size-reduced, and the basis (or pairwise
    sum/difference) vector of least height is returned.
    """
    system = vanishing_conditions(prob)
    n = system.n_unknowns
    irows = system.integer_rows()
    keep, drop = independent_rows(irows)
    r = len(keep)
    if r >= n:
        raise SiegelError(f"no nonzero solution guaranteed (rank {r} >= {n} unknowns)")
    kept = [irows[i] for i in keep]
    a = max((abs(v) for row in kept for v in row), default=1)
    bound = pigeonhole_bound(n, r, a)
    kernel = size_reduce(integer_kernel(kept, n))
    vec = shortest_sup(kernel)
    poly = BiPoly({m: c for m, c in zip(system.monomials, vec) if c})
    return SiegelSolution(
        poly=poly,
        height=sup_norm(vec),
        n_unknowns=n,
        n_constraints=system.n_constraints,
        rank=r,
        coeff_bound=a,
        pigeonhole_bound=bound,
        dependent_rows=[system.labels[i] for i in drop],
    )


def verify_solution(prob: SiegelProblem, sol: SiegelSolution) -> bool:
    """Recheck a solution through the index module, independent of the constraint matrix."""
    f = sol.poly
    if f.is_zero or not f.is_integral():
        return False
    d1, d2 = prob.bidegree
    if f.deg_x > d1 or f.deg_y > d2:
        return False
    for Q in prob.points:
        if weighted_index(f, Q, prob.weight).value < prob.tau:
            return False
    if sol.pigeonhole_bound is not None and f.height() > sol.pigeonhole_bound:
        return False
    return True
