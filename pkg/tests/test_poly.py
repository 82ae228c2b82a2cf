import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dysongap.poly import (
    X,
    Y,
    BiPoly,
    PolyError,
    analyze_divisor,
    poly_gcd,
    poly_shift,
    reconstruct,
    squarefree_decompose,
)
from oracles import sympy_e_of_D, to_sympy

coef = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coef, max_size=6).map(BiPoly)
rats = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def test_zero_coefficients_dropped():
    f = BiPoly({(1, 0): 0, (0, 0): 3})
    assert dict(f.terms) == {(0, 0): Fraction(3)}
    assert BiPoly().is_zero and BiPoly().bidegree == (0, 0)


def test_degrees():
    f = X**3 * Y + Y**2
    assert f.bidegree == (3, 2)


def test_shift_examples():
    assert poly_shift(X**2, 0, 0) == X**2
    assert poly_shift(X - Y, 1, 1) == X - Y
    assert poly_shift(X * Y, 1, 2) == X * Y + 2 * X + Y + 2


@settings(max_examples=100, deadline=None)
@given(polys, rats, rats)
def test_shift_group_action(f, p, q):
    assert poly_shift(poly_shift(f, p, q), -p, -q) == f


@settings(max_examples=100, deadline=None)
@given(polys, rats, rats)
def test_shift_is_evaluation(f, p, q):
    assert poly_shift(f, p, q)(0, 0) == f(p, q)


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f - f).is_zero


def test_squarefree_examples():
    assert squarefree_decompose((X - Y) ** 2) == (1, [(X - Y, 2)])
    assert squarefree_decompose(X * (X - Y) ** 3) == (1, [(X, 1), (X - Y, 3)])
    assert squarefree_decompose(BiPoly.const(6)) == (6, [])


def test_squarefree_zero():
    with pytest.raises(PolyError, match="zero divisor"):
        squarefree_decompose(BiPoly())


def test_squarefree_mixed_contents():
    f = Fraction(-3, 2) * (X - 1) ** 2 * (Y + 2) ** 3 * (X * Y - 1)
    c, parts = squarefree_decompose(f)
    prod = BiPoly.const(c)
    for g, k in parts:
        prod = prod * g**k
    assert prod == f
    assert dict((k, g) for g, k in parts)[3] == Y + 2


def test_gcd():
    a = (X - Y) * (X + 1)
    b = (X - Y) * (Y - 2)
    assert poly_gcd(a, b) == X - Y


def test_analyze_examples():
    D = analyze_divisor(X - Y, (1, 1))
    assert D.e_of_D == 1 and D.self_intersection == 2
    assert len(D.components) == 1 and not D.components[0].is_fiber

    D = analyze_divisor((X - 3) * (X - Y), (2, 1))
    fibers = [c for c in D.components if c.is_fiber]
    assert [c.factor for c in fibers] == [X - 3] and fibers[0].is_fiber_of_p1
    assert D.e_of_D == 1

    D = analyze_divisor((X - Y) ** 2, (2, 2))
    assert D.e_of_D == 2 and D.self_intersection == 8
    assert (D.dot_F1, D.dot_F2) == (2, 2)


def test_analyze_bidegree_too_small():
    with pytest.raises(PolyError):
        analyze_divisor(X**2 * Y, (1, 1))


def test_designated_bidegree_padding():
    D = analyze_divisor(X - Y, (3, 5))
    assert D.designated_bidegree == (3, 5) and D.self_intersection == 30
    assert (D.dot_F1, D.dot_F2) == (5, 3)


def _random_factor(rng):
    kind = rng.random()
    c = Fraction(rng.randint(-4, 4), rng.choice((1, 2)))
    if kind < 0.25:
        return X - c
    if kind < 0.45:
        return Y - c
    g = BiPoly()
    for i in range(rng.randint(1, 2) + 1):
        for j in range(rng.randint(1, 2) + 1):
            if rng.random() < 0.6:
                g = g + rng.randint(-3, 3) * X**i * Y**j
    return g + X * Y + c


def _random_product(rng, cap=(6, 6)):
    f = BiPoly.const(Fraction(rng.randint(1, 7), rng.randint(1, 3)) * rng.choice((1, -1)))
    for _ in range(rng.randint(1, 4)):
        g = _random_factor(rng) ** rng.choice((1, 1, 2, 3))
        if (f * g).deg_x <= cap[0] and (f * g).deg_y <= cap[1] and not g.is_constant:
            f = f * g
    return f


def test_reconstruction_500():
    rng = random.Random(11)
    for _ in range(500):
        f = _random_product(rng)
        D = analyze_divisor(f)
        assert reconstruct(D) == f
        factors = [c.factor for c in D.components]
        for a in range(len(factors)):
            for b in range(a + 1, len(factors)):
                assert poly_gcd(factors[a], factors[b]).is_constant


def test_e_of_D_matches_factorization_oracle():
    rng = random.Random(5)
    for _ in range(60):
        f = _random_product(rng, (5, 5))
        assert analyze_divisor(f).e_of_D == sympy_e_of_D(dict(f.terms))


def test_squarefree_parts_are_squarefree():
    rng = random.Random(8)
    x, y = sympy.symbols("x y")
    for _ in range(40):
        _, parts = squarefree_decompose(_random_product(rng, (5, 5)))
        for g, _ in parts:
            _, facs = sympy.factor_list(to_sympy(dict(g.terms)), x, y)
            assert all(k == 1 for _, k in facs)


def test_e_of_product_monotone():
    f = (X - Y) ** 2 * (X - 1)
    g = (X * Y - 2) ** 3
    ef, eg = analyze_divisor(f).e_of_D, analyze_divisor(g).e_of_D
    assert analyze_divisor(f * g).e_of_D >= max(ef, eg)
