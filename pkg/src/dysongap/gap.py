"""Mordell-Weil lattice geometry and the explicit constants of the gap principle.

Vectors live in ``R^r`` with an inner product given by a positive definite
rational Gram matrix.  Norms ``|P|`` are irrational in general, so every
verdict compares squares with the sign tracked separately.  Floating point
only appears in values labelled as diagnostics.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .index import v_of
from .poly import _rat

LAMBDA = Fraction(1, 3 * 48**2)

# cos 20 and cos 40 are the roots in (1/2, 1) of 8c^3 - 6c - 1 and 8c^3 - 6c + 1
COS20_BRACKET = (Fraction(9396, 10000), Fraction(9397, 10000))
COS40_BRACKET = (Fraction(766, 1000), Fraction(7661, 10000))
COS2_20_LOWER = COS20_BRACKET[0] ** 2
COS2_20_UPPER = COS20_BRACKET[1] ** 2


def certify_cos_bracket(lo: Fraction, hi: Fraction, shift: int) -> bool:
    """True if ``8c^3 - 6c + shift`` changes sign from ``lo`` to ``hi`` with ``1/2 < lo``.

    The cubic is increasing on ``c > 1/2``, so the bracketed root is unique.
    """
    f = lambda c: 8 * c**3 - 6 * c + shift  # noqa: E731
    return Fraction(1, 2) < lo < hi and f(lo) < 0 < f(hi)


class LatticeError(ValueError):
    pass


Vector = Sequence[Fraction]


def _leading_minors(gram) -> list[Fraction]:
    n = len(gram)
    a = [list(row) for row in gram]
    minors, det = [], Fraction(1)
    for k in range(n):
        piv = a[k][k]
        det *= piv
        minors.append(det)
        if piv == 0:
            break
        for i in range(k + 1, n):
            f = a[i][k] / piv
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return minors


@dataclass(frozen=True)
class MWLattice:
    """A Gram matrix with named points given by their coordinates."""

    gram: tuple[tuple[Fraction, ...], ...]
    point_labels: tuple[str, ...] = ()
    coords: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        g = tuple(tuple(_rat(v) for v in row) for row in self.gram)
        r = len(g)
        if r == 0 or any(len(row) != r for row in g):
            raise LatticeError("Gram matrix must be square and nonempty")
        if any(g[i][j] != g[j][i] for i in range(r) for j in range(i)):
            raise LatticeError("Gram matrix must be symmetric")
        minors = _leading_minors(g)
        if len(minors) < r or any(m <= 0 for m in minors):
            raise LatticeError("Gram matrix is not positive definite")
        coords = tuple(tuple(_rat(v) for v in c) for c in self.coords)
        if len(coords) != len(self.point_labels):
            raise LatticeError("one coordinate vector per label")
        if any(len(c) != r for c in coords):
            raise LatticeError(f"coordinates must have length {r}")
        if len(set(self.point_labels)) != len(self.point_labels):
            raise LatticeError("duplicate point label")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "point_labels", tuple(self.point_labels))

    @classmethod
    def euclidean(cls, r: int, points: dict | None = None) -> "MWLattice":
        gram = [[int(i == j) for j in range(r)] for i in range(r)]
        points = points or {}
        return cls(gram, tuple(points), tuple(points.values()))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def points(self) -> dict[str, tuple[Fraction, ...]]:
        return dict(zip(self.point_labels, self.coords))

    def vec(self, P) -> tuple[Fraction, ...]:
        if isinstance(P, str):
            try:
                return self.coords[self.point_labels.index(P)]
            except ValueError:
                raise LatticeError(f"unknown point {P!r}") from None
        v = tuple(_rat(c) for c in P)
        if len(v) != self.rank:
            raise LatticeError(f"vector must have length {self.rank}")
        return v


def pairing(L: MWLattice, P, Q) -> Fraction:
    u, v = L.vec(P), L.vec(Q)
    return sum((u[i] * L.gram[i][j] * v[j] for i in range(L.rank) for j in range(L.rank)
                if u[i] and v[j]), Fraction(0))


def norm_sq(L: MWLattice, P) -> Fraction:
    return pairing(L, P, P)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def cos_sq_signed(L: MWLattice, P, Q) -> tuple[int, Fraction]:
    """Sign of ``<P,Q>`` and ``<P,Q>**2 / (|P|**2 |Q|**2)``."""
    nP, nQ = norm_sq(L, P), norm_sq(L, Q)
    if nP == 0 or nQ == 0:
        raise LatticeError("cosine of a zero vector")
    pq = pairing(L, P, Q)
    return _sign(pq), pq * pq / (nP * nQ)


def vojta_predicate(L: MWLattice, P, Q) -> bool:
    """``<P,Q> <= (3/4)|P||Q|``, decided exactly."""
    s, c2 = cos_sq_signed(L, P, Q)
    return s <= 0 or c2 <= Fraction(9, 16)


def _cos_exceeds(inner: Fraction, nu: Fraction, nv: Fraction, t: Fraction) -> bool:
    # inner / sqrt(nu nv) > t
    if t >= 0:
        return inner > 0 and inner * inner > t * t * nu * nv
    return inner >= 0 or inner * inner < t * t * nu * nv


# ---------------------------------------------------------------------------
# cone covering


@dataclass
class ConeCover:
    cos_sq: Fraction
    centers: list[int]  # indices into the input directions
    assignment: list[int]  # position in ``centers`` for each direction
    certificates: list[Fraction]  # cos^2 between each direction and its center

    def members(self, slot: int) -> list[int]:
        return [i for i, a in enumerate(self.assignment) if a == slot]


def cone_cover(directions: Sequence[Vector], cos_sq: Fraction = COS2_20_UPPER,
               lattice: MWLattice | None = None) -> ConeCover:
    """Greedy cover of the directions by open cones ``{cos^2 > cos_sq, <u, c> > 0}``.

    Each direction joins the first existing center whose cone contains it,
    otherwise it becomes a new center.  With ``cos_sq`` at or above
    ``cos^2(theta)`` every membership certifies an angle below ``theta``.
    """
    cos_sq = _rat(cos_sq)
    if not 0 < cos_sq < 1:
        raise LatticeError("cos_sq must lie in (0, 1)")
    dirs = [tuple(_rat(c) for c in d) for d in directions]
    if lattice is None and dirs:
        lattice = MWLattice.euclidean(len(dirs[0]))
    centers: list[int] = []
    assignment: list[int] = []
    certs: list[Fraction] = []
    for i, d in enumerate(dirs):
        nd = norm_sq(lattice, d)
        if nd == 0:
            raise LatticeError(f"direction {i} is zero")
        for slot, c in enumerate(centers):
            inner = pairing(lattice, d, dirs[c])
            nc = norm_sq(lattice, dirs[c])
            if inner > 0 and inner * inner > cos_sq * nd * nc:
                assignment.append(slot)
                certs.append(inner * inner / (nd * nc))
                break
        else:
            centers.append(i)
            assignment.append(len(centers) - 1)
            certs.append(Fraction(1))
    return ConeCover(cos_sq, centers, assignment, certs)


def check_cover(directions: Sequence[Vector], cover: ConeCover,
                lattice: MWLattice | None = None) -> dict:
    """Recheck every membership certificate and the doubled-angle bound for cone-mates.

    Two directions within angle ``a`` of one center are within ``2a`` of each
    other, so their cosine exceeds ``2 cos_sq - 1``.
    """
    dirs = [tuple(_rat(c) for c in d) for d in directions]
    if lattice is None and dirs:
        lattice = MWLattice.euclidean(len(dirs[0]))
    k = cover.cos_sq
    member_ok = []
    for i, d in enumerate(dirs):
        c = dirs[cover.centers[cover.assignment[i]]]
        inner = pairing(lattice, d, c)
        member_ok.append(inner > 0 and inner * inner > k * norm_sq(lattice, d) * norm_sq(lattice, c))
    pair_ok = True
    t = 2 * k - 1
    for slot in range(len(cover.centers)):
        mem = cover.members(slot)
        for a in range(len(mem)):
            for b in range(a + 1, len(mem)):
                u, v = dirs[mem[a]], dirs[mem[b]]
                if not _cos_exceeds(pairing(lattice, u, v), norm_sq(lattice, u), norm_sq(lattice, v), t):
                    pair_ok = False
    return {"members_ok": all(member_ok), "pairs_ok": pair_ok, "failed_members": [
        i for i, ok in enumerate(member_ok) if not ok]}


@dataclass
class ConeReport:
    center: str
    members: list[str]
    verdict: str  # "small-height", "bounded" or "violation"
    anchor: str | None = None
    violations: list[dict] = field(default_factory=list)


def finiteness_partition(L: MWLattice, points: Sequence[str] | None, A1, A2,
                         cos_sq: Fraction = COS2_20_UPPER) -> list[ConeReport]:
    """Partition points into cones and apply the height dichotomy cone by cone.

    In a cone whose points all have ``|P| <= A1`` the verdict is
    ``small-height``.  Otherwise the anchor ``P*`` is the point of least norm
    with ``|P*| > A1``; every ``P'`` with ``|P'| > A2 |P*|`` is reported with
    the exact evidence that the pair is closer than the 3/4 cosine allows.
    """
    A1, A2 = _rat(A1), _rat(A2)
    if A1 <= 0 or A2 <= 0:
        raise LatticeError("A1 and A2 must be positive")
    labels = list(L.point_labels if points is None else points)
    if not labels:
        return []
    vecs = [L.vec(p) for p in labels]
    cover = cone_cover(vecs, cos_sq, L)
    n2 = {p: norm_sq(L, p) for p in labels}
    out = []
    for slot, c in enumerate(cover.centers):
        mem = [labels[i] for i in cover.members(slot)]
        big = [p for p in mem if n2[p] > A1 * A1]
        if not big:
            out.append(ConeReport(labels[c], mem, "small-height"))
            continue
        anchor = min(big, key=lambda p: (n2[p], labels.index(p)))
        viol = []
        for p in mem:
            if n2[p] > A2 * A2 * n2[anchor]:
                s, c2 = cos_sq_signed(L, anchor, p)
                viol.append({"pair": (anchor, p), "sign": s, "cos_sq": c2,
                             "vojta_predicate": vojta_predicate(L, anchor, p)})
        out.append(ConeReport(labels[c], mem, "violation" if viol else "bounded", anchor, viol))
    return out


# ---------------------------------------------------------------------------
# Mumford's main term, the optimal deltas and the explicit chains


def optimal_deltas(g, lam, normsq1, normsq2) -> tuple[Fraction, Fraction]:
    """Squares of the minimising ``delta1, delta2`` under ``delta1 delta2 = g + lam``."""
    g, lam, n1, n2 = _rat(g), _rat(lam), _rat(normsq1), _rat(normsq2)
    if n1 <= 0 or n2 <= 0:
        raise ValueError("norms must be positive")
    d1sq, d2sq = (g + lam) * n2 / n1, (g + lam) * n1 / n2
    assert d1sq * d2sq == (g + lam) ** 2
    return d1sq, d2sq


def c_coefficient_sq(g, delta1, delta2) -> Fraction:
    """``c^2 = 2(delta1 delta2 - g) + g(2g - 1) delta2 / delta1``; needs ``delta1 delta2 > g``."""
    g, d1, d2 = _rat(g), _rat(delta1), _rat(delta2)
    if d1 <= 0 or d2 <= 0:
        raise ValueError("deltas must be positive")
    if d1 * d2 <= g:
        raise ValueError(f"need delta1*delta2 > g, got {d1 * d2} <= {g}")
    return 2 * (d1 * d2 - g) + g * (2 * g - 1) * d2 / d1


def mumford_rhs(g, delta1, delta2, normsq1, normsq2, pair, slack=0) -> Fraction:
    """Main term ``(delta1 |P1|^2 + delta2 |P2|^2)/g - 2<P1,P2>`` plus a caller-supplied slack."""
    g = _rat(g)
    if g < 2:
        raise ValueError("genus must be at least 2")
    return (_rat(delta1) * _rat(normsq1) + _rat(delta2) * _rat(normsq2)) / g \
        - 2 * _rat(pair) + _rat(slack)


def sqrt_bounds(q, bits: int = 80) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= sqrt(q) <= hi`` with ``hi - lo <= 2**-bits`` scaled by the denominator."""
    q = _rat(q)
    if q < 0:
        raise ValueError("negative")
    n, d = q.numerator, q.denominator
    s = 1 << bits
    r = isqrt(n * d * s * s)
    lo = Fraction(r, d * s)
    hi = lo if r * r == n * d * s * s else Fraction(r + 1, d * s)
    return lo, hi


@dataclass
class ChainReport:
    g: int
    lam: Fraction
    condition1_bound: Fraction  # (17/24)^2 g^2 - g
    condition1_holds: bool
    coefficient: Fraction  # 1/48^2 - 2 lam
    ratio_threshold: Fraction  # T2 on |P2|^2/|P1|^2
    norm_threshold_sq: Fraction  # T1^2, a threshold on |P1|^4
    guard_holds: bool  # 3/4 - 1/sqrt(g) >= 3/4 - sqrt(2)/2 > 1/24

    @property
    def holds(self) -> bool:
        return self.condition1_holds and self.guard_holds and self.coefficient > 0


def deduction_chain(g: int, c0=0, lam: Fraction = LAMBDA) -> ChainReport:
    """Thresholds that turn the precise inequality into the 3/4 cosine bound."""
    if int(g) != g or g < 2:
        raise ValueError("genus must be an integer >= 2")
    g, c0, lam = int(g), _rat(c0), _rat(lam)
    if c0 < 0:
        raise ValueError("c0 must be nonnegative")
    bound1 = Fraction(17**2, 24**2) * g * g - g
    coef = Fraction(1, 48**2) - 2 * lam
    t2 = g * (2 * g - 1) / coef if coef > 0 else None
    t1sq = 576 * (g + lam) * c0 * c0 / (lam * lam)
    # 1/sqrt(g) <= 1/sqrt(2) iff 1/g <= 1/2; sqrt(2)/2 < 17/24 iff 1/2 < 289/576
    guard = Fraction(1, g) <= Fraction(1, 2) and Fraction(1, 2) < Fraction(17**2, 24**2)
    return ChainReport(g, lam, bound1, lam <= bound1, coef, t2, t1sq, guard)


@dataclass
class AssembleReport:
    thresholds_met: bool
    conditions: tuple[bool, bool, bool]
    hypothesis_certified: bool
    pairing_sign: int
    conclusion_holds: bool  # <P1,P2> <= 0 or <P1,P2>^2 <= (9/16)|P1|^2|P2|^2
    diagnostics: dict = field(default_factory=dict)


def assemble_vojta(g: int, c0, normsq1, normsq2, pair, lam: Fraction = LAMBDA) -> AssembleReport:
    """Replay the final deduction on explicit data.

    The hypothesis is the consequence of the precise inequality at the optimal
    deltas:  ``<P1,P2> <= (sqrt(g+lam)/g + c)|P1||P2| + sqrt(g+lam) c0 |P2| / (2 lam |P1|)``
    with ``c^2 = 2 lam + g(2g-1)|P1|^2/|P2|^2``.  It is certified through
    rational lower bounds of the square roots.  Each of the three conditions is
    then checked on squares, and the conclusion is checked exactly.
    """
    ch = deduction_chain(g, c0, lam)
    g, lam, c0 = ch.g, ch.lam, _rat(c0)
    n1, n2, p = _rat(normsq1), _rat(normsq2), _rat(pair)
    if n1 <= 0 or n2 <= 0:
        raise ValueError("norms must be positive")
    thresholds = (ch.ratio_threshold is not None and n2 / n1 >= ch.ratio_threshold
                  and n1 * n1 >= ch.norm_threshold_sq)
    csq = 2 * lam + g * (2 * g - 1) * n1 / n2
    cond1 = (g + lam) / (g * g) <= Fraction(17, 24) ** 2
    cond2 = csq <= Fraction(1, 48**2)
    cond3 = 576 * (g + lam) * c0 * c0 <= lam * lam * n1 * n1
    sgl, _ = sqrt_bounds(g + lam)
    cl, _ = sqrt_bounds(csq)
    nl, _ = sqrt_bounds(n1 * n2)
    rl, _ = sqrt_bounds(n2 / n1)
    lower = (sgl / g + cl) * nl + sgl * c0 * rl / (2 * lam)
    certified = p <= lower
    conclusion = p <= 0 or p * p <= Fraction(9, 16) * n1 * n2
    return AssembleReport(thresholds, (cond1, cond2, cond3), certified, _sign(p), conclusion,
                          {"hypothesis_lower_bound": float(lower), "c_sq": float(csq)})


# ---------------------------------------------------------------------------
# index bound chain


@dataclass
class Step:
    name: str
    holds: bool
    lhs: Fraction
    rhs: Fraction
    relation: str


@dataclass
class BoundIndexReport:
    index: Fraction
    dyson_bound: Fraction
    c_sq: Fraction
    steps: list[Step]

    @property
    def hypothesis_holds(self) -> bool:
        return self.steps[0].holds

    @property
    def holds(self) -> bool:
        return all(s.holds for s in self.steps)

    def step(self, name: str) -> Step:
        return next(s for s in self.steps if s.name == name)


class PreconditionError(ValueError):
    pass


def bound_index_check(g, delta1, delta2, d, e1: int, e2: int, normsq1, normsq2) -> BoundIndexReport:
    """Walk the implications from the Dyson bound on ``V(I)`` to the two exponent bounds.

    ``I = e1/(delta1 d) + e2/(delta2 d)``.  Every step is decided exactly on
    squares.  Step ``dyson_bound`` is the input hypothesis; the remaining steps
    must follow from it under the admissibility constraints.
    """
    g, d1, d2, d = _rat(g), _rat(delta1), _rat(delta2), _rat(d)
    n1, n2 = _rat(normsq1), _rat(normsq2)
    if g < 2 or g.denominator != 1:
        raise PreconditionError("genus must be an integer >= 2")
    if d <= 0:
        raise PreconditionError("d must be positive")
    if not (isinstance(e1, int) and isinstance(e2, int)) or e1 < 0 or e2 < 0:
        raise PreconditionError("exponents must be nonnegative integers")
    if n1 <= 0 or n2 <= 0:
        raise PreconditionError("norms must be positive")
    if d1 <= 0 or d2 <= 0:
        raise PreconditionError("deltas must be positive")
    if d1 * d1 * n1 < g * n2:
        raise PreconditionError("delta1 >= delta1_circ violated")
    if d2 * d2 * n2 < g * n1:
        raise PreconditionError("delta2 >= delta2_circ violated")
    if not d1 > 2 * g * d2:
        raise PreconditionError("delta1 > 2 g delta2 violated")
    prod = d1 * d2
    if not g < prod < g + Fraction(1, 4):
        raise PreconditionError("g < delta1 delta2 < g + 1/4 violated")

    I = e1 / (d1 * d) + e2 / (d2 * d)
    B = (prod - g) / prod + (2 * g - 1) * d2 / (2 * d1)
    csq = c_coefficient_sq(g, d1, d2)
    vI = v_of(I)
    w = e1 * d2 + e2 * d1
    s = e1 * n1 + e2 * n2
    steps = [
        Step("dyson_bound", vI <= B, vI, B, "V(I) <= B"),
        Step("bound_below_half", B < Fraction(1, 2), B, Fraction(1, 2), "B < 1/2"),
        Step("quadratic_regime", I < 1 and vI == I * I / 2 and I * I <= 2 * B,
             I * I, 2 * B, "I < 1, V(I) = I^2/2, I^2 <= 2B"),
        Step("index_vs_c", g * I * I < csq, g * I * I, csq, "g I^2 < c^2"),
        Step("weighted_sum", g * w * w < csq * prod * prod * d * d, g * w * w,
             csq * prod * prod * d * d, "g (e1 delta2 + e2 delta1)^2 < c^2 (delta1 delta2 d)^2"),
        Step("exponent_sum", g * (e1 + e2) ** 2 < csq * d1 * d1 * d * d, g * (e1 + e2) ** 2,
             csq * d1 * d1 * d * d, "g (e1 + e2)^2 < c^2 (delta1 d)^2"),
        Step("circ_domination", g * s * s <= w * w * n1 * n2, g * s * s, w * w * n1 * n2,
             "e1 delta2_circ + e2 delta1_circ <= e1 delta2 + e2 delta1"),
        Step("height_weighted", g * g * s * s < prod * prod * csq * d * d * n1 * n2, g * g * s * s,
             prod * prod * csq * d * d * n1 * n2,
             "(e1|P1|^2 + e2|P2|^2)^2 < (delta1 delta2 c d)^2 |P1|^2 |P2|^2 / g^2"),
        Step("c_below_sqrt_g", csq < g, csq, g, "c^2 < g"),
    ]
    return BoundIndexReport(I, B, csq, steps)


def default_deltas(g: int, min_bidegree: tuple[int, int] = (0, 0)) -> tuple[Fraction, Fraction, int]:
    """Admissible ``(delta1, delta2, d)`` with integral ``delta_i d`` covering ``min_bidegree``.

    ``delta1 = 2g`` and ``delta2 = (8g + 1)/(16g)`` give ``delta1 delta2 = g + 1/8``
    and ``delta1 > 2 g delta2``.
    """
    g = int(g)
    d1, d2 = Fraction(2 * g), Fraction(8 * g + 1, 16 * g)
    k = 1
    while d1 * 16 * g * k < min_bidegree[0] or d2 * 16 * g * k < min_bidegree[1]:
        k += 1
    return d1, d2, 16 * g * k
