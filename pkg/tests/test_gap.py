import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dysongap import gap
from dysongap.gap import (
    COS2_20_UPPER,
    LAMBDA,
    LatticeError,
    MWLattice,
    PreconditionError,
    assemble_vojta,
    bound_index_check,
    c_coefficient_sq,
    check_cover,
    cone_cover,
    cos_sq_signed,
    deduction_chain,
    default_deltas,
    finiteness_partition,
    mumford_rhs,
    norm_sq,
    optimal_deltas,
    pairing,
    sqrt_bounds,
    vojta_predicate,
)

E2 = MWLattice.euclidean(2, {"a": (1, 0), "b": (0, 1), "c": (3, 4)})


def test_brackets_certified():
    assert gap.certify_cos_bracket(*gap.COS20_BRACKET, -1)
    assert gap.certify_cos_bracket(*gap.COS40_BRACKET, 1)
    # float sanity only
    assert gap.COS20_BRACKET[0] < math.cos(math.radians(20)) < gap.COS20_BRACKET[1]
    assert gap.COS40_BRACKET[0] < math.cos(math.radians(40)) < gap.COS40_BRACKET[1]


def test_cone_mates_fail_vojta_predicate():
    # two directions in one cone are closer than 40 degrees, so their cosine exceeds 3/4
    assert 2 * COS2_20_UPPER - 1 > Fraction(3, 4)
    assert gap.COS40_BRACKET[0] ** 2 > Fraction(9, 16)


def test_lattice_validation():
    with pytest.raises(LatticeError):
        MWLattice([[1, 2], [2, 1]])
    with pytest.raises(LatticeError):
        MWLattice([[1, 0], [1, 1]])
    with pytest.raises(LatticeError):
        MWLattice([[1, 0], [0, 1]], ("p",), ((1, 2, 3),))


def test_pairing_examples():
    assert cos_sq_signed(E2, "a", "b") == (0, 0)
    assert cos_sq_signed(E2, "c", "c") == (1, 1)
    L = MWLattice([[2, 1], [1, 2]])
    assert pairing(L, (1, 0), (0, 1)) == 1
    assert cos_sq_signed(L, (1, 0), (0, 1)) == (1, Fraction(1, 4))
    assert norm_sq(E2, "c") == 25
    with pytest.raises(LatticeError):
        cos_sq_signed(E2, (0, 0), "a")


def test_vojta_examples():
    assert vojta_predicate(E2, "a", "b")
    assert not vojta_predicate(E2, "c", "c")
    L = MWLattice([[16, 12], [12, 16]])
    assert cos_sq_signed(L, (1, 0), (0, 1)) == (1, Fraction(9, 16))
    assert vojta_predicate(L, (1, 0), (0, 1))
    assert vojta_predicate(E2, "a", (-1, 0))


vec = st.lists(st.integers(-9, 9), min_size=3, max_size=3).filter(any)


@settings(max_examples=100, deadline=None)
@given(vec, vec, st.fractions(min_value=Fraction(1, 10), max_value=50))
def test_vojta_scale_invariant(u, v, s):
    L = MWLattice([[3, 1, 0], [1, 2, 0], [0, 0, 5]])
    Ls = MWLattice([[s * x for x in row] for row in L.gram])
    assert vojta_predicate(L, u, v) == vojta_predicate(Ls, u, v)
    assert cos_sq_signed(L, u, v) == cos_sq_signed(Ls, u, v)


def _ring(k, scale=10**6):
    return [(Fraction(round(math.cos(2 * math.pi * i / k) * scale), scale),
             Fraction(round(math.sin(2 * math.pi * i / k) * scale), scale)) for i in range(k)]


def test_cover_nine_directions():
    cov = cone_cover(_ring(9))
    assert len(cov.centers) == 9


def test_cover_equal_directions():
    cov = cone_cover([(1, 2, 3)] * 5)
    assert cov.centers == [0] and cov.assignment == [0] * 5


def test_cover_random_certificates():
    for r in (2, 3, 4):
        rng = random.Random(r)
        dirs = []
        while len(dirs) < 100:
            v = [rng.randint(-10, 10) for _ in range(r)]
            if any(v):
                dirs.append(v)
        cov = cone_cover(dirs)
        chk = check_cover(dirs, cov)
        assert chk["members_ok"] and chk["pairs_ok"]
        for i, c in enumerate(cov.certificates):
            assert c > COS2_20_UPPER


def test_cover_rejects_zero():
    with pytest.raises(LatticeError):
        cone_cover([(0, 0)])


def test_partition_small_height():
    L = MWLattice.euclidean(2, {"p": (1, 0), "q": (0, 1)})
    rep = finiteness_partition(L, None, 2, 2)
    assert [r.verdict for r in rep] == ["small-height", "small-height"]


def test_partition_violation():
    L = MWLattice.euclidean(2, {"p": (10, 1), "q": (100, 11)})
    rep = finiteness_partition(L, None, 5, 2)
    assert len(rep) == 1 and rep[0].verdict == "violation" and rep[0].anchor == "p"
    v = rep[0].violations[0]
    assert v["pair"] == ("p", "q") and v["vojta_predicate"] is False


def test_partition_bounded_and_empty():
    L = MWLattice.euclidean(2, {"p": (10, 1), "q": (15, 2)})
    assert [r.verdict for r in finiteness_partition(L, None, 5, 2)] == ["bounded"]
    assert finiteness_partition(L, [], 5, 2) == []


def test_optimal_deltas():
    assert optimal_deltas(2, 0, 1, 4) == (8, Fraction(1, 2))
    assert optimal_deltas(3, LAMBDA, 5, 5) == (3 + LAMBDA, 3 + LAMBDA)
    rng = random.Random(0)
    for _ in range(50):
        g, n1, n2 = rng.randint(2, 6), Fraction(rng.randint(1, 99), 7), Fraction(rng.randint(1, 99), 3)
        a, b = optimal_deltas(g, LAMBDA, n1, n2)
        assert a * b == (g + LAMBDA) ** 2


def test_am_gm_optimality():
    # g + lam = 9/4 and |P2|^2/|P1|^2 = 4 make the optimum rational: delta1 = 3, delta2 = 3/4
    g, lam, n1, n2, p = 2, Fraction(1, 4), 1, 4, Fraction(1, 3)
    d1sq, d2sq = optimal_deltas(g, lam, n1, n2)
    assert (d1sq, d2sq) == (9, Fraction(9, 16))
    best = mumford_rhs(g, 3, Fraction(3, 4), n1, n2, p)
    for k in range(1, 400):
        d1 = Fraction(k, 40)
        assert mumford_rhs(g, d1, (g + lam) / d1, n1, n2, p) >= best


def test_c_squared():
    assert c_coefficient_sq(2, 4, Fraction(3, 4)) == Fraction(25, 8)
    with pytest.raises(ValueError):
        c_coefficient_sq(2, 4, Fraction(1, 2))


def test_mumford_examples():
    assert mumford_rhs(2, 2, 2, 1, 1, 0) == 2
    assert mumford_rhs(2, 2, 2, 1, 1, 1) == 0
    assert mumford_rhs(2, 4, 1, 1, 4, 1) == 2
    assert mumford_rhs(2, 4, 1, 1, 4, 1, slack=Fraction(1, 3)) == Fraction(7, 3)


def test_sqrt_bounds():
    for q in (2, Fraction(9, 4), Fraction(1, 7), 0):
        lo, hi = sqrt_bounds(q)
        assert lo * lo <= q <= hi * hi


def test_deduction_chain_genus_two():
    ch = deduction_chain(2)
    assert ch.lam == Fraction(1, 6912)
    assert ch.condition1_bound == Fraction(1, 144) and ch.condition1_holds
    assert ch.coefficient == Fraction(1, 6912)
    assert ch.ratio_threshold == 2 * 3 * 6912
    assert ch.norm_threshold_sq == 0 and ch.holds
    with pytest.raises(ValueError):
        deduction_chain(1)


def test_assemble_conclusion():
    g, c0 = 2, Fraction(1, 100)
    ch = deduction_chain(g, c0)
    n1 = Fraction(math.isqrt(int(ch.norm_threshold_sq)) + 1)
    n2 = n1 * ch.ratio_threshold * 2
    lo, _ = sqrt_bounds(n1 * n2)
    for p in (Fraction(7, 10) * lo, -lo / 2, Fraction(0)):
        rep = assemble_vojta(g, c0, n1, n2, p)
        assert rep.thresholds_met and all(rep.conditions) and rep.hypothesis_certified
        assert rep.conclusion_holds


def test_index_bound_examples():
    rep = bound_index_check(2, 4, Fraction(51, 100), 100, 0, 0, Fraction(51, 100), 4)
    assert rep.holds and rep.index == 0
    rep = bound_index_check(2, 4, Fraction(51, 100), 100, 30, 5, Fraction(51, 100), 4)
    assert rep.hypothesis_holds and rep.holds
    with pytest.raises(PreconditionError, match="g < delta1 delta2"):
        bound_index_check(2, 5, Fraction(1, 2), 100, 0, 0, 1, 10)


def test_index_bound_hypothesis_failure_is_not_an_error():
    rep = bound_index_check(2, 4, Fraction(51, 100), 10, 40, 5, Fraction(51, 100), 4)
    assert not rep.hypothesis_holds


def test_default_deltas_admissible():
    for g in (2, 3, 5):
        d1, d2, d = default_deltas(g, (8, 8))
        assert d1 > 2 * g * d2 and g < d1 * d2 < g + Fraction(1, 4)
        assert (d1 * d).denominator == 1 and (d2 * d).denominator == 1
        assert d1 * d >= 8 and d2 * d >= 8
