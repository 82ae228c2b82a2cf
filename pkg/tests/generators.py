"""Seeded random inputs shared by the module tests and the acceptance suite."""
from __future__ import annotations

import random
from fractions import Fraction

from dysongap.siegel import SiegelError, SiegelProblem, siegel_solve


def random_siegel_problem(rng: random.Random) -> SiegelProblem:
    d1, d2 = rng.randint(1, 5), rng.randint(1, 5)
    m = rng.randint(1, 3)
    pts = set()
    while len(pts) < m:
        pts.add((Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3))),
                 Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3)))))
    w = (Fraction(rng.randint(1, 4 * d1), 4), Fraction(rng.randint(1, 4 * d2), 4))
    tau = Fraction(rng.randint(1, 16), 8)
    return SiegelProblem((d1, d2), tuple(sorted(pts)), w, tau)


def feasible_siegel_problems(seed: int, n: int, min_slack: int = 2):
    """``n`` problems with at least ``min_slack`` free unknowns, with their solutions."""
    rng = random.Random(f"siegel:{seed}")
    out = []
    while len(out) < n:
        prob = random_siegel_problem(rng)
        try:
            sol = siegel_solve(prob)
        except SiegelError:
            continue
        if sol.n_unknowns - sol.rank >= min_slack:
            out.append((prob, sol))
    return out
