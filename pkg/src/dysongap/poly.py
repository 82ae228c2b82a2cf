"""Sparse bivariate polynomials over Q and divisor analysis on P^1 x P^1.

A :class:`BiPoly` stores a finite map ``(i1, i2) -> Fraction`` with no zero
coefficients.  ``x`` is the coordinate of the first factor, ``y`` of the
second.  Everything here is exact; no floating point is used.

Divisors are modelled by a polynomial together with a *designated* bidegree
``(d1, d2)``, which may exceed the actual degrees.  The surplus corresponds to
fibers at infinity, so the polynomial is read as a section of O(d1, d2).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, lcm
from types import MappingProxyType
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class PolyError(ValueError):
    """Raised for invalid polynomial input or an impossible operation."""


def _rat(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise PolyError(f"not an exact rational: {c!r}")


class BiPoly:
    """Immutable sparse polynomial in ``x, y`` with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        for key, c in (terms or {}).items():
            i, j = key
            if not (isinstance(i, int) and isinstance(j, int)) or i < 0 or j < 0:
                raise PolyError(f"bad exponent {key!r}")
            c = _rat(c)
            if c:
                clean[(i, j)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "BiPoly":
        # trusted constructor: exponents valid, coefficients nonzero Fractions
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls._raw({(1, 0): Fraction(1)})

    @classmethod
    def y(cls) -> "BiPoly":
        return cls._raw({(0, 1): Fraction(1)})

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[tuple[int, int], Scalar]]) -> "BiPoly":
        """Build from ``((i1, i2), c)`` pairs, summing repeated exponents."""
        acc: dict[tuple[int, int], Fraction] = {}
        for key, c in pairs:
            acc[key] = acc.get(key, Fraction(0)) + _rat(c)
        return cls(acc)

    # -- basic structure ---------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple[int, int], Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def deg_x(self) -> int:
        return max((i for i, _ in self._terms), default=0)

    @property
    def deg_y(self) -> int:
        return max((j for _, j in self._terms), default=0)

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.deg_x, self.deg_y)

    @property
    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def leading(self) -> tuple[tuple[int, int], Fraction]:
        """Leading exponent and coefficient in lex order (x before y)."""
        if not self._terms:
            raise PolyError("zero polynomial has no leading term")
        k = max(self._terms)
        return k, self._terms[k]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def height(self) -> int:
        """Max absolute coefficient; only meaningful for integer polynomials."""
        if not self.is_integral():
            raise PolyError("height is defined for integer polynomials only")
        return max((abs(c.numerator) for c in self._terms.values()), default=0)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "BiPoly":
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BiPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F, df = _to_int(self)
        G, dg = _to_int(other)
        return _from_int(_zmul(F, G), df * dg)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolyError("only nonnegative integer powers")
        result, base = BiPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "BiPoly":
        c = _rat(c)
        if not c:
            return BiPoly()
        return BiPoly._raw({k: v * c for k, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __call__(self, x: Scalar, y: Scalar) -> Fraction:
        x, y = _rat(x), _rat(y)
        return sum((c * x**i * y**j for (i, j), c in self._terms.items()), Fraction(0))

    def diff_x(self) -> "BiPoly":
        return BiPoly._raw({(i - 1, j): c * i for (i, j), c in self._terms.items() if i})

    def diff_y(self) -> "BiPoly":
        return BiPoly._raw({(i, j - 1): c * j for (i, j), c in self._terms.items() if j})

    def swap(self) -> "BiPoly":
        """Exchange the roles of ``x`` and ``y``."""
        return BiPoly._raw({(j, i): c for (i, j), c in self._terms.items()})

    def __repr__(self):
        return f"BiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j) in sorted(self._terms, reverse=True):
            c = self._terms[(i, j)]
            mono = "*".join(
                s for s in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
                ) if s
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}" if c.denominator == 1 else f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


X = BiPoly.x()
Y = BiPoly.y()


def _to_int(f: BiPoly) -> tuple[dict, int]:
    """Integer numerators over a common denominator: ``f = F / den``."""
    t = f._terms
    if not t:
        return {}, 1
    den = lcm(*(c.denominator for c in t.values()))
    return {k: c.numerator * (den // c.denominator) for k, c in t.items()}, den


def _from_int(t: dict, den: int = 1) -> BiPoly:
    if den == 1:
        return BiPoly._raw({k: Fraction(v) for k, v in t.items() if v})
    return BiPoly._raw({k: Fraction(v, den) for k, v in t.items() if v})


def poly_shift(f: BiPoly, p: Scalar, q: Scalar) -> BiPoly:
    """Return ``g`` with ``g(t1, t2) = f(t1 + p, t2 + q)``.

    The coefficients of ``g`` are the Taylor coefficients of ``f`` at
    ``(p, q)`` in the local coordinates ``t1 = x - p``, ``t2 = y - q``.
    """
    p, q = _rat(p), _rat(q)
    F, den = _to_int(f)
    if not F:
        return BiPoly()
    dx, dy = f.deg_x, f.deg_y
    pn, pd, qn, qd = p.numerator, p.denominator, q.numerator, q.denominator
    pnp = [pn**k for k in range(dx + 1)]
    pdp = [pd**k for k in range(dx + 1)]
    qnp = [qn**k for k in range(dy + 1)]
    qdp = [qd**k for k in range(dy + 1)]
    out: dict[tuple[int, int], int] = {}
    # scaled by pd**dx * qd**dy so that all arithmetic stays in Z
    for (a, b), c in F.items():
        xs = [comb(a, i) * pnp[a - i] * pdp[dx - a + i] for i in range(a + 1)]
        ys = [comb(b, j) * qnp[b - j] * qdp[dy - b + j] for j in range(b + 1)]
        for i, cx in enumerate(xs):
            if cx:
                cx *= c
                for j, cy in enumerate(ys):
                    if cy:
                        out[(i, j)] = out.get((i, j), 0) + cx * cy
    return _from_int(out, den * pdp[dx] * qdp[dy])


# ---------------------------------------------------------------------------
# integer polynomial core: dicts (i1, i2) -> int, exact and primitive-normalised

_ONE = {(0, 0): 1}


def _zmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i, j), c in a.items():
        for (k, l), d in b.items():
            key = (i + k, j + l)
            out[key] = out.get(key, 0) + c * d
    return {k: v for k, v in out.items() if v}


def _zsub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) - v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _zprim(a: dict) -> dict:
    if not a:
        return {}
    g = gcd(*a.values())
    if a[max(a)] < 0:
        g = -g
    return {k: v // g for k, v in a.items()}


def _zconst(a: dict) -> bool:
    return all(k == (0, 0) for k in a)


def _zdeg(a: dict, axis: int) -> int:
    return max((k[axis] for k in a), default=0)


def _zcoeffs(a: dict, axis: int) -> dict[int, dict]:
    out: dict[int, dict] = {}
    for k, c in a.items():
        rest = (0, k[1]) if axis == 0 else (k[0], 0)
        out.setdefault(k[axis], {})[rest] = c
    return out


def _zdiv(a: dict, b: dict) -> dict:
    """Exact quotient in Z[x, y]; ``b`` primitive (or the quotient integral)."""
    if not b:
        raise PolyError("division by zero polynomial")
    (bi, bj) = max(b)
    lb = b[(bi, bj)]
    rem = dict(a)
    quot = {}
    bitems = list(b.items())
    while rem:
        (ri, rj) = max(rem)
        if ri < bi or rj < bj:
            raise PolyError("inexact division")
        c, r = divmod(rem[(ri, rj)], lb)
        if r:
            raise PolyError("inexact division")
        k0, k1 = ri - bi, rj - bj
        quot[(k0, k1)] = c
        for (i, j), d in bitems:
            key = (i + k0, j + k1)
            v = rem.get(key, 0) - c * d
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return quot


def _zcont(a: dict, axis: int) -> dict:
    """Primitive gcd of the coefficients of ``a`` with respect to ``axis``."""
    g: dict = {}
    for coef in _zcoeffs(a, axis).values():
        g = _zgcd(g, coef, 1 - axis) if g else _zprim(coef)
        if _zconst(g):
            return dict(_ONE)
    return g


def _zpp(a: dict, axis: int) -> dict:
    return _zprim(_zdiv(a, _zcont(a, axis)))


def _zprem(a: dict, b: dict, axis: int) -> dict:
    db = _zdeg(b, axis)
    lb = _zcoeffs(b, axis)[db]
    r = a
    while r and _zdeg(r, axis) >= db:
        dr = _zdeg(r, axis)
        lr = _zcoeffs(r, axis)[dr]
        mono = {(dr - db, 0) if axis == 0 else (0, dr - db): 1}
        r = _zsub(_zmul(lb, r), _zmul(_zmul(lr, mono), b))
    return r


def _zgcd(a: dict, b: dict, axis: int = 0) -> dict:
    """Primitive gcd in Z[x, y] via a primitive PRS in the variable ``axis``."""
    if not a and not b:
        raise PolyError("gcd(0, 0) is undefined")
    if not a:
        return _zprim(b)
    if not b:
        return _zprim(a)
    if _zconst(a) or _zconst(b):
        return dict(_ONE)
    ca, cb = _zcont(a, axis), _zcont(b, axis)
    c = _zgcd(ca, cb, 1 - axis)
    a, b = _zprim(_zdiv(a, ca)), _zprim(_zdiv(b, cb))
    if _zdeg(a, axis) < _zdeg(b, axis):
        a, b = b, a
    while b:
        if _zdeg(b, axis) == 0:
            a = dict(_ONE)
            break
        r = _zprem(a, b, axis)
        a, b = b, (_zpp(r, axis) if r else {})
    return _zprim(_zmul(c, a))


def _zdiff(a: dict, axis: int) -> dict:
    if axis == 0:
        return {(i - 1, j): c * i for (i, j), c in a.items() if i}
    return {(i, j - 1): c * j for (i, j), c in a.items() if j}


def _zyun(a: dict, axis: int) -> list[tuple[dict, int]]:
    # a primitive with unit content along `axis`
    if _zdeg(a, axis) == 0:
        return []
    da = _zdiff(a, axis)
    b = _zgcd(a, da, axis)
    c = _zdiv(a, b)
    d = _zsub(_zdiv(da, b), _zdiff(c, axis))
    out = []
    k = 1
    while _zdeg(c, axis) > 0:
        ak = _zgcd(c, d, axis) if d else _zprim(c)
        c = _zdiv(c, ak)
        d = _zsub(_zdiv(d, ak), _zdiff(c, axis)) if d else {}
        if _zdeg(ak, axis) > 0:
            out.append((ak, k))
        k += 1
    return out


# ---------------------------------------------------------------------------
# exact division, gcd and squarefree structure for BiPoly


def primitive(f: BiPoly) -> tuple[Fraction, BiPoly]:
    """Split ``f = c * g`` with ``g`` integral, content 1, positive lex-leading coefficient."""
    if f.is_zero:
        raise PolyError("zero polynomial")
    F, den = _to_int(f)
    G = _zprim(F)
    k, v = next(iter(G.items()))
    return Fraction(F[k], v * den), _from_int(G)


def _normalize(f: BiPoly) -> BiPoly:
    return primitive(f)[1]


def divexact(f: BiPoly, g: BiPoly) -> BiPoly:
    """Exact quotient ``f / g``; raises :class:`PolyError` if ``g`` does not divide ``f``."""
    if g.is_zero:
        raise PolyError("division by zero polynomial")
    if f.is_zero:
        return BiPoly()
    F, df = _to_int(f)
    G, dg = _to_int(g)
    Gp = _zprim(G)
    k, v = next(iter(Gp.items()))
    scale = Fraction(dg * v, df * G[k])
    return _from_int(_zdiv(F, Gp)).scale(scale)


def coeffs_in_x(f: BiPoly) -> dict[int, BiPoly]:
    """Coefficients of ``f`` as a polynomial in ``x``; each is a polynomial in ``y``."""
    out: dict[int, dict] = {}
    for (i, j), c in f.terms.items():
        out.setdefault(i, {})[(0, j)] = c
    return {i: BiPoly._raw(t) for i, t in out.items()}


def content_x(f: BiPoly) -> BiPoly:
    """Gcd in Q[y] of the x-coefficients of ``f``, normalised primitive."""
    return _from_int(_zcont(_to_int(f)[0], 0))


def content_y(f: BiPoly) -> BiPoly:
    """Gcd in Q[x] of the y-coefficients of ``f``: its pure-x factor."""
    return _from_int(_zcont(_to_int(f)[0], 1))


def poly_gcd(f: BiPoly, g: BiPoly) -> BiPoly:
    """Greatest common divisor, normalised by :func:`primitive`.

    Contents along ``x`` are polynomials in ``y`` and are handled by the
    univariate case of the same routine; primitive parts by a primitive
    pseudo-remainder sequence in ``x``.
    """
    return _from_int(_zgcd(_to_int(f)[0], _to_int(g)[0], 0))


def squarefree_decompose(f: BiPoly) -> tuple[Fraction, list[tuple[BiPoly, int]]]:
    """Return ``(c, [(g_k, k), ...])`` with ``f = c * prod g_k**k``.

    The ``g_k`` are squarefree, pairwise coprime, integral primitive with
    positive lex-leading coefficient, and listed by increasing ``k``.
    """
    if f.is_zero:
        raise PolyError("zero divisor")
    F, den = _to_int(f)
    cy = _zcont(F, 0)
    parts: dict[int, dict] = {}
    # primitive part along x, then the content, a polynomial in y alone
    for g, k in _zyun(_zprim(_zdiv(F, cy)), 0) + _zyun(cy, 1):
        parts[k] = _zmul(parts.get(k, _ONE), g)
    factors = [(_zprim(g), k) for k, g in sorted(parts.items())]
    rest = F
    for g, k in factors:
        for _ in range(k):
            rest = _zdiv(rest, g)
    if not _zconst(rest):
        raise AssertionError("squarefree reconstruction left a nonconstant cofactor")
    return Fraction(rest[(0, 0)], den), [(_from_int(g), k) for g, k in factors]


# ---------------------------------------------------------------------------
# divisors on P^1 x P^1


@dataclass(frozen=True)
class Component:
    factor: BiPoly
    multiplicity: int
    is_fiber_of_p1: bool  # depends on x only: a union of fibers {x = c}
    is_fiber_of_p2: bool  # depends on y only: a union of fibers {y = c}

    @property
    def is_fiber(self) -> bool:
        return self.is_fiber_of_p1 or self.is_fiber_of_p2


@dataclass(frozen=True)
class DivisorData:
    """An effective divisor of class O(d1, d2) given by a polynomial section."""

    poly: BiPoly
    designated_bidegree: tuple[int, int]
    components: tuple[Component, ...]
    e_of_D: int
    constant: Fraction = Fraction(1)

    @property
    def d1(self) -> int:
        return self.designated_bidegree[0]

    @property
    def d2(self) -> int:
        return self.designated_bidegree[1]

    @property
    def self_intersection(self) -> int:
        return 2 * self.d1 * self.d2

    @property
    def dot_F1(self) -> int:
        """Intersection with a fiber of the first projection, ``{x = c}``."""
        return self.d2

    @property
    def dot_F2(self) -> int:
        """Intersection with a fiber of the second projection, ``{y = c}``."""
        return self.d1

    @property
    def has_fibers(self) -> bool:
        return any(c.is_fiber for c in self.components)

    def fiber_multiplicity_x(self, p: Scalar) -> int:
        """Multiplicity of the fiber ``{x = p}`` in the divisor."""
        return _fiber_mult(self.components, _rat(p), 0)

    def fiber_multiplicity_y(self, q: Scalar) -> int:
        """Multiplicity of the fiber ``{y = q}`` in the divisor."""
        return _fiber_mult(self.components, _rat(q), 1)


def _fiber_mult(components, a: Fraction, axis: int) -> int:
    total = 0
    for comp in components:
        if axis == 0 and comp.is_fiber_of_p1:
            g = poly_shift(comp.factor, a, 0)
            total += comp.multiplicity * min(i for i, _ in g.terms)
        elif axis == 1 and comp.is_fiber_of_p2:
            g = poly_shift(comp.factor, 0, a)
            total += comp.multiplicity * min(j for _, j in g.terms)
    return total


def analyze_divisor(f: BiPoly, designated_bidegree: tuple[int, int] | None = None) -> DivisorData:
    """Squarefree components of ``div(f)``, their fiber flags and ``e(D)``.

    Each squarefree part is split further into its pure-x factor (fibers of
    the first projection), pure-y factor (fibers of the second) and the
    remaining mixed factor.  ``e(D)`` is the largest multiplicity of a mixed
    factor, or 0.
    """
    if f.is_zero:
        raise PolyError("zero divisor")
    if designated_bidegree is None:
        designated_bidegree = f.bidegree
    d1, d2 = designated_bidegree
    if d1 < f.deg_x or d2 < f.deg_y:
        raise PolyError(
            f"designated bidegree {designated_bidegree} below actual bidegree {f.bidegree}"
        )
    const, parts = squarefree_decompose(f)
    comps = []
    for g, k in parts:
        xpart = content_y(g)
        ypart = content_x(g)
        mixed = divexact(divexact(g, xpart), ypart)
        if not xpart.is_constant:
            comps.append(Component(_normalize(xpart), k, True, False))
        if not ypart.is_constant:
            comps.append(Component(_normalize(ypart), k, False, True))
        if not mixed.is_constant:
            comps.append(Component(_normalize(mixed), k, False, False))
    e = max((c.multiplicity for c in comps if not c.is_fiber), default=0)
    rebuilt = BiPoly.const(1)
    for c in comps:
        rebuilt = rebuilt * c.factor**c.multiplicity
    const = divexact(f, rebuilt).coeff(0, 0)
    return DivisorData(f, (int(d1), int(d2)), tuple(comps), e, const)


def reconstruct(D: DivisorData) -> BiPoly:
    out = BiPoly.const(D.constant)
    for c in D.components:
        out = out * c.factor**c.multiplicity
    return out
