"""Exact arithmetic over Q and quadratic fields Q(sqrt d), plus dense polynomials.

Rationals are plain :class:`fractions.Fraction` values.  Elements of a
quadratic field are :class:`QuadExtElem`; ``UniPoly`` is a small dense
polynomial type that works over any coefficient ring supporting the usual
operators (Fraction, QuadExtElem, ``Fp`` residues, p-adic numbers).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

import sympy

Rational = Fraction


def Q(value, den=None) -> Fraction:
    """Coerce ints, strings like ``"8/5"`` and Fractions to Fraction."""
    if den is not None:
        return Fraction(value, den)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def height(q) -> int:
    """Naive height max(|num|, den); height(0) is 1."""
    q = Q(q)
    return max(abs(q.numerator), q.denominator)


def _int_sqrt(n: int) -> Optional[int]:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def is_square(q) -> Optional[Fraction]:
    """Return the nonnegative rational square root of ``q`` or None."""
    q = Q(q)
    a = _int_sqrt(q.numerator)
    if a is None:
        return None
    b = _int_sqrt(q.denominator)
    if b is None:
        return None
    return Fraction(a, b)


@lru_cache(maxsize=4096)
def _squarefree_int(n: int) -> int:
    sign = -1 if n < 0 else 1
    out = 1
    for prime, e in sympy.factorint(abs(n)).items():
        if e % 2:
            out *= prime
    return sign * out


def squarefree_part(q) -> int:
    """Squarefree integer d with q = d * s**2 for some rational s."""
    q = Q(q)
    if q == 0:
        raise ValueError("squarefree_part of zero is undefined")
    return _squarefree_int(q.numerator * q.denominator)


def is_squarefree(d: int) -> bool:
    return d != 0 and _squarefree_int(d) == d


class QuadExtElem:
    """Element a + b*sqrt(d) of Q(sqrt d) with d squarefree, d != 0, 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        d = int(d)
        if d == 1 or not is_squarefree(d):
            raise ValueError(f"d={d} is not a squarefree integer != 0, 1")
        self.a = Q(a)
        self.b = Q(b)
        self.d = d

    @classmethod
    def sqrt(cls, d: int) -> "QuadExtElem":
        return cls(0, 1, d)

    def _coerce(self, other) -> Optional["QuadExtElem"]:
        if isinstance(other, QuadExtElem):
            if other.d != self.d:
                raise ValueError(f"mixed fields Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExtElem(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExtElem(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExtElem(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExtElem(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def conjugate(self) -> "QuadExtElem":
        return QuadExtElem(self.a, -self.b, self.d)

    def inverse(self) -> "QuadExtElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic field")
        return QuadExtElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExtElem(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadExtElem):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"QuadExtElem({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.d})"

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "d": self.d}


def sqrt_in_field(value, d: Optional[int] = None):
    """Square root of ``value`` inside Q (d None) or Q(sqrt d); None if absent.

    A rational that is not a rational square may still be a square in
    Q(sqrt d): that happens exactly when value/d is a rational square.
    """
    if isinstance(value, QuadExtElem):
        d = value.d if d is None else d
        if value.d != d:
            raise ValueError("value lives in a different quadratic field")
        if value.b == 0:
            return sqrt_in_field(value.a, d)
        n = is_square(value.norm())
        if n is None:
            return None
        for c2 in ((value.a + n) / 2, (value.a - n) / 2):
            c = is_square(c2)
            if c is not None and c != 0:
                root = QuadExtElem(c, value.b / (2 * c), d)
                if root * root == value:
                    return root
        return None
    value = Q(value)
    r = is_square(value)
    if r is not None:
        return r if d is None else QuadExtElem(r, 0, d)
    if d is None or value == 0:
        return None
    s = is_square(value / d)
    if s is None:
        return None
    return QuadExtElem(0, s, d)


def as_field_elem(value, d: Optional[int]):
    """Lift a rational into Q(sqrt d) when d is given."""
    if d is None or isinstance(value, QuadExtElem):
        return value
    return QuadExtElem(value, 0, d)


def _is_zero(c) -> bool:
    return not c


def _inv(c):
    if isinstance(c, int):
        return Fraction(1, c)
    return c ** -1


class UniPoly:
    """Dense univariate polynomial, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "UniPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @classmethod
    def x(cls, one=1) -> "UniPoly":
        return cls([0 * one, one])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _wrap(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other])

    def __add__(self, other):
        o = self._wrap(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                t = a * b
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        return UniPoly(out)

    def __rmul__(self, other):
        return UniPoly(other * c for c in self.coeffs)

    def __pow__(self, n: int):
        result = UniPoly([self.lead() ** 0 if self.coeffs else 1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead_inv = _inv(other.lead())
        if len(rem) - 1 < dq:
            return UniPoly(), UniPoly(rem)
        quo = [0] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * lead_inv
            quo[k] = c
            if _is_zero(c):
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return UniPoly(quo), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(self._wrap(other))[0]

    def __mod__(self, other):
        return self.divmod(self._wrap(other))[1]

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def monic(self) -> "UniPoly":
        return self * _inv(self.lead())

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def map(self, fn) -> "UniPoly":
        return UniPoly(fn(c) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if _is_zero(c):
                continue
            mon = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            terms.append(f"({c})" + (f"*{mon}" if mon else ""))
        return " + ".join(terms)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over a field."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_xgcd(a: UniPoly, b: UniPoly):
    """Return (g, s, t) with g = s*a + t*b monic."""
    r0, r1 = a, b
    s0, s1 = UniPoly([1]), UniPoly()
    t0, t1 = UniPoly(), UniPoly([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = _inv(r0.lead())
    return r0 * inv, s0 * inv, t0 * inv


def rational_poly(coeffs: Sequence) -> UniPoly:
    return UniPoly(Q(c) for c in coeffs)


def clear_denominators(p: UniPoly) -> list[int]:
    """Primitive integer coefficient list proportional to ``p``."""
    cs = [Q(c) for c in p.coeffs]
    den = 1
    for c in cs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g else ints


def rational_roots(p: UniPoly) -> list[Fraction]:
    """All rational roots of ``p``, ascending, without multiplicity.

    Candidates a/b come from the rational root theorem applied to the
    primitive integer form with the x**k factor split off.
    """
    if p.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    ints = clear_denominators(p)
    roots = set()
    k = 0
    while ints[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
    ints = ints[k:]
    n = len(ints) - 1
    if n >= 1:
        lead = abs(ints[-1])
        # Cauchy: every root has |r| <= 1 + max|c_k| / |c_n|
        cauchy = 1 + Fraction(max(abs(c) for c in ints[:-1]), lead)
        for b in sympy.divisors(lead):
            bpow = [b**e for e in range(n + 1)]
            for a in sympy.divisors(abs(ints[0])):
                if a > cauchy * b or gcd(a, b) != 1:
                    continue
                for sa in (a, -a):
                    # homogeneous value b^n p(sa/b), exact in integers
                    v = ints[n]
                    for j in range(n - 1, -1, -1):
                        v = v * sa + ints[j] * bpow[n - j]
                    if v == 0:
                        roots.add(Fraction(sa, b))
    return sorted(roots)


def factor_rational(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Irreducible factorisation over Q as (monic factor, multiplicity) pairs."""
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(Q(c) for c in p.coeffs))
    _, factors = sympy.factor_list(expr, x)
    out = []
    for fac, mult in factors:
        cs = sympy.Poly(fac, x).all_coeffs()[::-1]
        poly = UniPoly(Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in cs)
        out.append((poly.monic(), int(mult)))
    return out
