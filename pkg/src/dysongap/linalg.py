"""Exact integer linear algebra: fraction-free elimination, integer kernels, size reduction."""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def _prim_row(row: list[int]) -> list[int]:
    g = gcd(*row)
    return [v // g for v in row] if g > 1 else row


def independent_rows(rows: list[list[int]]) -> tuple[list[int], list[int]]:
    """Split row indices into a maximal independent prefix-greedy set and the rest.

    Rows are scanned in order and reduced fraction-free against the pivots
    found so far (each step ``r <- p[c] r - r[c] p`` followed by division by
    the row content), so every intermediate stays integral.
    """
    pivots: list[tuple[int, list[int]]] = []
    keep, drop = [], []
    for idx, row in enumerate(rows):
        r = list(row)
        for c, p in pivots:
            if r[c]:
                a, b = p[c], r[c]
                r = _prim_row([a * u - b * v for u, v in zip(r, p)])
        lead = next((c for c, v in enumerate(r) if v), None)
        if lead is None:
            drop.append(idx)
        else:
            pivots.append((lead, r))
            keep.append(idx)
    return keep, drop


def rank(rows: list[list[int]]) -> int:
    return len(independent_rows(rows)[0])


def integer_kernel(rows: list[list[int]], n: int) -> list[list[int]]:
    """A Z-basis of ``{v in Z^n : A v = 0}`` for linearly independent integer rows.

    Unimodular column operations bring ``A U`` to lower echelon form; the
    columns of ``U`` beyond the rank span the integer kernel.
    """
    m = len(rows)
    cols = [[rows[i][j] for i in range(m)] for j in range(n)]
    ucols = [[int(i == j) for i in range(n)] for j in range(n)]
    k = 0
    for i in range(m):
        while True:
            live = [j for j in range(k, n) if cols[j][i]]
            if not live:
                raise ValueError("rows are not linearly independent")
            if len(live) == 1:
                break
            piv = min(live, key=lambda j: (abs(cols[j][i]), j))
            pv = cols[piv][i]
            for j in live:
                if j == piv:
                    continue
                q = round(Fraction(cols[j][i], pv))
                cols[j] = [a - q * b for a, b in zip(cols[j], cols[piv])]
                ucols[j] = [a - q * b for a, b in zip(ucols[j], ucols[piv])]
        j = live[0]
        cols[k], cols[j] = cols[j], cols[k]
        ucols[k], ucols[j] = ucols[j], ucols[k]
        k += 1
    return [ucols[j] for j in range(k, n)]


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def size_reduce(basis: list[list[int]], max_passes: int | None = None) -> list[list[int]]:
    """Iterated pairwise reduction ``b_i <- b_i - round(<b_i,b_j>/<b_j,b_j>) b_j``.

    A step is taken only when it strictly shortens ``b_i``, so the total
    squared length decreases and the loop ends; ``max_passes`` defaults to
    ``n**2``.  The lattice spanned is unchanged.
    """
    basis = [list(b) for b in basis]
    n = len(basis)
    if max_passes is None:
        max_passes = max(1, n * n)
    norms = [_dot(b, b) for b in basis]
    for _ in range(max_passes):
        changed = False
        order = sorted(range(n), key=lambda i: norms[i])
        for i in order:
            for j in order:
                if i == j or not norms[j]:
                    continue
                mu = round(Fraction(_dot(basis[i], basis[j]), norms[j]))
                if not mu:
                    continue
                cand = [a - mu * b for a, b in zip(basis[i], basis[j])]
                nc = _dot(cand, cand)
                if nc < norms[i]:
                    basis[i], norms[i] = cand, nc
                    changed = True
        if not changed:
            break
    order = sorted(range(n), key=lambda i: (norms[i], basis[i]))
    return [basis[i] for i in order]


def sup_norm(v) -> int:
    return max((abs(a) for a in v), default=0)


def shortest_sup(basis: list[list[int]]) -> list[int]:
    """Smallest sup-norm vector among basis vectors and their pairwise sums and differences."""
    best = min(basis, key=lambda v: (sup_norm(v), _dot(v, v)))
    key = (sup_norm(best), _dot(best, best))
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            for s in (1, -1):
                v = [a + s * b for a, b in zip(basis[i], basis[j])]
                if any(v):
                    kv = (sup_norm(v), _dot(v, v))
                    if kv < key:
                        best, key = v, kv
    return best


def iroot_floor(base: int, num: int, den: int) -> int:
    """Largest integer ``B >= 0`` with ``B**den <= base**num`` (exact)."""
    if den <= 0 or base < 0 or num < 0:
        raise ValueError("bad arguments")
    target = base**num
    if target == 0:
        return 0
    lo, hi = 0, 1
    while hi**den <= target:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**den <= target:
            lo = mid
        else:
            hi = mid
    return lo
