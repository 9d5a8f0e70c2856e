"""Hyperelliptic curves y^2 = g(x) in weighted projective models.

Covers bounded-height point search, the degree-2 quotient H -> H_q and its
pullback, point counts over F_p and F_{p^2}, and Mumford/Cantor arithmetic
on Jacobians of odd-degree genus-2 models.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

import numpy as np
import sympy

from .arith import Q, UniPoly, is_square, poly_xgcd, rational_poly, rational_roots
from .finite import Fp, Fp2Table


class BadPrime(ValueError):
    pass


class MapDegenerates(ValueError):
    pass


class HyperCurve:
    """y^2 = g(x) with g squarefree over Q of degree 5..8.

    The smooth model lives in weighted projective space P(1, genus+1, 1):
    Y^2 = Z^(2*genus+2) g(X/Z).
    """

    def __init__(self, coeffs, name: str = ""):
        self.g = rational_poly(coeffs) if not isinstance(coeffs, UniPoly) else coeffs
        deg = self.g.degree
        if not 5 <= deg <= 8:
            raise ValueError(f"degree {deg} outside 5..8")
        if self.g.derivative().is_zero() or _poly_gcd_degree(self.g) > 0:
            raise ValueError("g is not squarefree")
        self.genus = (deg - 1) // 2
        self.name = name

    @property
    def degree(self) -> int:
        return self.g.degree

    @property
    def weights(self) -> tuple[int, int, int]:
        return (1, self.genus + 1, 1)

    @property
    def odd_degree(self) -> bool:
        return self.degree % 2 == 1

    def __repr__(self):
        return f"HyperCurve({self.name or self.g})"

    def __eq__(self, other):
        return isinstance(other, HyperCurve) and self.g == other.g

    def __hash__(self):
        return hash(self.g)

    @cached_property
    def integer_coeffs(self) -> list[int]:
        """Integer coefficients of c*g with c > 0 a square making them integral."""
        den = 1
        for c in self.g.coeffs:
            den = math.lcm(den, Q(c).denominator)
        return [int(Q(c) * den * den) for c in self.g.coeffs]

    @cached_property
    def _coeff_scale(self) -> int:
        den = 1
        for c in self.g.coeffs:
            den = math.lcm(den, Q(c).denominator)
        return den

    @cached_property
    def discriminant(self) -> int:
        x = sympy.Symbol("x")
        expr = sum(c * x**k for k, c in enumerate(self.integer_coeffs))
        return int(sympy.discriminant(expr, x))

    def is_good_prime(self, p: int) -> bool:
        return p > 2 and sympy.isprime(p) and self.discriminant % p != 0 and self.integer_coeffs[-1] % p != 0

    def contains(self, X, Y, Z) -> bool:
        X, Y, Z = Q(X), Q(Y), Q(Z)
        n = 2 * self.genus + 2
        rhs = sum(Q(c) * X**k * Z ** (n - k) for k, c in enumerate(self.g.coeffs))
        return Y * Y == rhs

    def infinite_points(self) -> list["WPPoint"]:
        if self.odd_degree:
            return [WPPoint(self, 1, 0, 0)]
        r = is_square(self.g.lead())
        if r is None:
            return []
        if r == 0:
            return [WPPoint(self, 1, 0, 0)]
        return [WPPoint(self, 1, -r, 0), WPPoint(self, 1, r, 0)]

    def point(self, x, y) -> "WPPoint":
        return WPPoint(self, x, y, 1)


def _poly_gcd_degree(g: UniPoly) -> int:
    from .arith import poly_gcd

    return poly_gcd(g, g.derivative()).degree


class WPPoint:
    """Point (X : Y : Z) of a weighted projective model, stored normalised.

    Normal form: Z = 1 for affine points, (1 : y : 0) at infinity.
    """

    __slots__ = ("curve", "X", "Y", "Z")

    def __init__(self, curve: HyperCurve, X, Y, Z, check: bool = True):
        X, Y, Z = Q(X), Q(Y), Q(Z)
        w = curve.genus + 1
        if Z != 0:
            X, Y, Z = X / Z, Y / Z**w, Fraction(1)
        elif X != 0:
            X, Y, Z = Fraction(1), Y / X**w, Fraction(0)
        else:
            raise ValueError("(0 : * : 0) is not a point of the weighted plane")
        self.curve, self.X, self.Y, self.Z = curve, X, Y, Z
        if check and not curve.contains(X, Y, Z):
            raise ValueError(f"({X} : {Y} : {Z}) is not on {curve}")

    @property
    def is_infinite(self) -> bool:
        return self.Z == 0

    @property
    def x(self) -> Fraction:
        return self.X

    @property
    def y(self) -> Fraction:
        return self.Y

    def key(self):
        return (self.Z, self.X, self.Y)

    def __eq__(self, other):
        return isinstance(other, WPPoint) and self.curve == other.curve and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def involution(self) -> "WPPoint":
        return WPPoint(self.curve, self.X, -self.Y, self.Z, check=False)

    def triple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.X, self.Y, self.Z)

    def __repr__(self):
        if self.is_infinite:
            return f"(1 : {self.Y} : 0)"
        return f"({self.X}, {self.Y})"

    def to_json(self) -> list[str]:
        return [str(self.X), str(self.Y), str(self.Z)]


def sort_points(points: Iterable[WPPoint]) -> list[WPPoint]:
    return sorted(set(points), key=lambda P: P.key())


# --- search -----------------------------------------------------------------

_FILTER_MODULI = (64, 63, 65, 11, 17, 19, 23, 29, 31, 37)


def _square_table(m: int) -> np.ndarray:
    t = np.zeros(m, dtype=bool)
    t[(np.arange(m) ** 2) % m] = True
    return t


_SQUARE_TABLES = {m: _square_table(m) for m in _FILTER_MODULI}


def _search_slice(coeffs: list[int], n: int, bound: int, residues: tuple[int, int]) -> list[tuple[int, int, int]]:
    """Affine solutions a/b with a = residues[0] mod residues[1]; returns (a, b, Y)."""
    r0, step = residues
    out = []
    a_all = np.arange(-bound, bound + 1, dtype=np.int64)
    a_all = a_all[(a_all - r0) % step == 0]
    deg = len(coeffs) - 1
    for b in range(1, bound + 1):
        a = a_all[np.gcd(a_all, b) == 1]
        if a.size == 0:
            continue
        keep = np.ones(a.size, dtype=bool)
        for m in _FILTER_MODULI:
            am = a % m
            bm = b % m
            acc = np.zeros(a.size, dtype=np.int64)
            # Horner in the homogeneous form sum c_k a^k b^(n-k)
            for k in range(deg, -1, -1):
                acc = (acc * am + (coeffs[k] % m) * pow(bm, n - k, m)) % m
            keep &= _SQUARE_TABLES[m][acc]
            if not keep.any():
                break
        for av in a[keep].tolist():
            val = 0
            for k in range(deg, -1, -1):
                val = val * av + coeffs[k] * b ** (n - k)
            if val < 0:
                continue
            r = math.isqrt(val)
            if r * r == val:
                out.append((av, b, r))
    return out


def search_points(curve: HyperCurve, height_bound: int, workers: int = 1) -> list[WPPoint]:
    """All points with height(x) <= bound, plus the points at infinity.

    x = a/b runs over lowest-terms fractions with max(|a|, b) <= bound.  Work
    is partitioned by the residue of a mod ``workers``; the merge is sorted so
    the output does not depend on the partition.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    n = 2 * curve.genus + 2
    coeffs = curve.integer_coeffs
    scale = curve._coeff_scale
    parts = [(r, workers) for r in range(workers)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_search_slice, [coeffs] * workers, [n] * workers, [height_bound] * workers, parts))
    else:
        chunks = [_search_slice(coeffs, n, height_bound, parts[0])]
    pts = []
    for chunk in chunks:
        for a, b, r in chunk:
            # (scale * Y)^2 = sum c_k a^k b^(n-k) with Y on the weighted model at Z = b
            Y = Fraction(r, scale)
            for y in {Y, -Y}:
                pts.append(WPPoint(curve, a, y, b))
    pts.extend(curve.infinite_points())
    return sort_points(pts)


# --- H, H_q and the quotient map ---------------------------------------------

# H: y^2 = (x^2 + x + 1)(x^6 + 3x^5 - 5x^3 + 3x + 1), genus 3
H_FACTORS = ([1, 1, 1], [1, 3, 0, -5, 0, 3, 1])
# H_q: y^2 = 4x^5 - 7x^4 - 2x^3 + 16x^2 + 8x + 1, genus 2
HQ_COEFFS = [1, 8, 16, -2, -7, 4]


def curve_H() -> HyperCurve:
    g = rational_poly(H_FACTORS[0]) * rational_poly(H_FACTORS[1])
    return HyperCurve(g, name="H")


def curve_Hq() -> HyperCurve:
    return HyperCurve(HQ_COEFFS, name="Hq")


def _listed_point(curve, X, Y, Z):
    return WPPoint(curve, Q(X), Q(Y), Q(Z))


def known_points_Hq() -> list[WPPoint]:
    C = curve_Hq()
    pts = [WPPoint(C, 1, 0, 0)]
    pts += [C.point(0, 1), C.point(0, -1), C.point(-1, 0), C.point(Fraction(-1, 4), 0), C.point(2, 9), C.point(2, -9)]
    return sort_points(pts)


def known_points_H() -> list[WPPoint]:
    """The twelve listed points, entered in the weighted triples as printed."""
    C = curve_H()
    raw = [
        (1, 1, 0), (1, -1, 0),
        ("2/3", "1/27", "-1/3"), ("2/3", "-1/27", "-1/3"),
        ("1/2", "1/16", "-1/2"), ("1/2", "-1/16", "-1/2"),
        (0, 1, -1), (0, -1, -1),
        (1, 3, 1), (1, -3, 1),
        ("1/3", "1/27", "-2/3"), ("1/3", "-1/27", "-2/3"),
    ]
    return sort_points(_listed_point(C, *t) for t in raw)


def quotient_map(P: WPPoint, target: Optional[HyperCurve] = None) -> WPPoint:
    """(X, Y, Z) -> (X Z^5, X^2 Y Z^12 - Y Z^14, -X^2 Z^4 - 2 X Z^5 - Z^6).

    The formula vanishes identically when Z = 0, so points at infinity raise
    MapDegenerates; see :func:`pullback_points` for how they are handled.
    """
    target = target or curve_Hq()
    X, Y, Z = P.triple()
    if Z == 0:
        raise MapDegenerates("the displayed formula vanishes at points with Z = 0")
    X1 = X * Z**5
    Y1 = X**2 * Y * Z**12 - Y * Z**14
    Z1 = -(X**2) * Z**4 - 2 * X * Z**5 - Z**6
    if X1 == 0 and Z1 == 0:
        raise MapDegenerates(f"image of {P} is (0 : * : 0)")
    return WPPoint(target, X1, Y1, Z1)


def _limit_at_infinity(P: WPPoint, target: HyperCurve) -> WPPoint:
    # chart x = 1/s: the image is (s : Y(1 - s^2) : -(1 + s)^2) after removing s^4
    return WPPoint(target, 0, P.Y, -1)


def pullback_points(Qpt: WPPoint, source: Optional[HyperCurve] = None) -> list[WPPoint]:
    """Rational preimages of Qpt under the quotient map.

    Finite preimages solve x_Q x^2 + (2 x_Q + 1) x + x_Q = 0; each rational root
    with g(x) a square is kept when its image is exactly Qpt.  The points at
    infinity of H come from direct search and are matched by the limit of the
    map in the chart x = 1/s.
    """
    H = source or curve_H()
    target = Qpt.curve
    out = []
    if Qpt.is_infinite:
        cands = [Fraction(-1)]
    else:
        xq = Qpt.X
        if xq == 0:
            cands = [Fraction(0)]
        else:
            cands = rational_roots(UniPoly([xq, 2 * xq + 1, xq]))
    for x in cands:
        r = is_square(H.g(x))
        if r is None:
            continue
        for y in {r, -r}:
            P = H.point(x, y)
            if quotient_map(P, target) == Qpt:
                out.append(P)
    for P in H.infinite_points():
        if _limit_at_infinity(P, target) == Qpt:
            out.append(P)
    return sort_points(out)


# --- counting over finite fields --------------------------------------------


def _check_good(curve: HyperCurve, p: int):
    if not curve.is_good_prime(p):
        raise BadPrime(f"{p} is not a prime of good reduction for {curve}")


def count_points_Fp(curve: HyperCurve, p: int) -> int:
    """|C(F_p)| on the smooth model, points at infinity included."""
    _check_good(curve, p)
    cs = [c % p for c in curve.integer_coeffs]
    total = 0
    for x in range(p):
        v = 0
        for c in reversed(cs):
            v = (v * x + c) % p
        total += 1 if v == 0 else (2 if pow(v, (p - 1) // 2, p) == 1 else 0)
    if curve.odd_degree:
        total += 1
    else:
        lead = cs[-1]
        total += 2 if pow(lead, (p - 1) // 2, p) == 1 else 0
    return total


def count_points_Fp2(curve: HyperCurve, p: int) -> int:
    """|C(F_{p^2})| by enumeration over a table-built F_{p^2}."""
    _check_good(curve, p)
    cs = [c % p for c in curve.integer_coeffs]
    F = Fp2Table(p)
    total = 0
    for a in range(p):
        for b in range(p):
            total += 1 + F.chi(F.eval_int_poly(cs, (a, b)))
    # leading coefficient lies in F_p, hence is a square in F_{p^2}
    total += 1 if curve.odd_degree else 2
    return total


def zeta_coefficients(curve: HyperCurve, p: int) -> tuple[int, int]:
    if curve.genus != 2:
        raise ValueError("zeta coefficients implemented for genus 2")
    n1 = count_points_Fp(curve, p)
    n2 = count_points_Fp2(curve, p)
    c1 = n1 - (p + 1)
    c2 = (n2 - (p * p + 1) + c1 * c1) // 2
    return c1, c2


def jacobian_order_Fp(curve: HyperCurve, p: int) -> int:
    """|J(F_p)| = L(1) with L(T) = 1 + c1 T + c2 T^2 + p c1 T^3 + p^2 T^4."""
    c1, c2 = zeta_coefficients(curve, p)
    return 1 + c1 + c2 + p * c1 + p * p


# --- Mumford representation and Cantor's algorithm ---------------------------


class MumfordDivisor:
    """Reduced divisor class (u, v) on y^2 = f(x), deg f = 5 (single point at infinity).

    ``u`` is monic of degree <= 2, deg v < deg u and u | v^2 - f.  The
    coefficients may come from any field type (Fraction, QuadExtElem, Fp, ...).
    """

    __slots__ = ("f", "u", "v")

    def __init__(self, f: UniPoly, u: UniPoly, v: UniPoly, check: bool = True):
        self.f, self.u, self.v = f, u, v
        if check:
            if u.is_zero() or not (u.lead() == 1):
                raise ValueError("u must be monic")
            if u.degree > 2 or (not v.is_zero() and v.degree >= u.degree):
                raise ValueError("(u, v) is not reduced")
            if not ((v * v - f) % u).is_zero():
                raise ValueError("u does not divide v^2 - f")

    @classmethod
    def identity(cls, f: UniPoly) -> "MumfordDivisor":
        one = f.lead() ** 0 if not isinstance(f.lead(), int) else 1
        return cls(f, UniPoly([one]), UniPoly(), check=False)

    @classmethod
    def from_point(cls, f: UniPoly, x, y) -> "MumfordDivisor":
        """Class of (x, y) - infinity."""
        one = f.lead() ** 0
        return cls(f, UniPoly([-x, one]), UniPoly([y]) if y else UniPoly())

    def is_identity(self) -> bool:
        return self.u.degree == 0

    def __eq__(self, other):
        return isinstance(other, MumfordDivisor) and self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __neg__(self):
        return MumfordDivisor(self.f, self.u, -self.v, check=False)

    def __add__(self, other: "MumfordDivisor") -> "MumfordDivisor":
        return cantor_add(self, other)

    def __sub__(self, other):
        return cantor_add(self, -other)

    def __mul__(self, n: int) -> "MumfordDivisor":
        if n < 0:
            return (-self) * (-n)
        result = MumfordDivisor.identity(self.f)
        base = self
        while n:
            if n & 1:
                result = cantor_add(result, base)
            n >>= 1
            if n:
                base = cantor_add(base, base)
        return result

    __rmul__ = __mul__

    def map(self, fn) -> "MumfordDivisor":
        return MumfordDivisor(self.f.map(fn), self.u.map(fn), self.v.map(fn), check=False)

    def reduce_mod(self, p: int) -> "MumfordDivisor":
        """Coefficientwise reduction; valid when all coefficients are p-integral."""
        fn = lambda c: Fp(c, p)  # noqa: E731
        return MumfordDivisor(self.f.map(fn), self.u.map(fn), self.v.map(fn))

    def __repr__(self):
        return f"MumfordDivisor(u={list(map(str, self.u.coeffs))}, v={list(map(str, self.v.coeffs))})"

    def to_json(self) -> dict:
        return {"u": [str(c) for c in self.u.coeffs], "v": [str(c) for c in self.v.coeffs]}


def cantor_add(D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    """Cantor composition followed by reduction to degree <= 2."""
    f = D1.f
    if not (D2.f == f):
        raise ValueError("divisors on different curves")
    u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
    d1, e1, e2 = poly_xgcd(u1, u2)
    d, c1, c2 = poly_xgcd(d1, v1 + v2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2) // (d * d)
    v = ((s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)) // d) % u
    while u.degree > 2:
        u = ((f - v * v) // u).monic()
        v = (-v) % u
    u = u.monic()
    return MumfordDivisor(f, u, v % u, check=False)


def curve_poly_mod(curve: HyperCurve, p: int) -> UniPoly:
    return curve.g.map(lambda c: Fp(c, p))


def order_in_JFp(D: MumfordDivisor, group_order: Optional[int] = None) -> int:
    """Least m >= 1 with m*D = 0.

    With ``group_order`` the order is found by stripping prime factors of the
    known exponent; otherwise by stepping.
    """
    if D.is_identity():
        return 1
    if group_order is not None:
        if not (D * group_order).is_identity():
            raise ValueError("group_order is not a multiple of the element order")
        m = group_order
        for q in sympy.factorint(group_order):
            while m % q == 0 and (D * (m // q)).is_identity():
                m //= q
        return m
    acc, m = D, 1
    while not acc.is_identity():
        acc = acc + D
        m += 1
    return m


def enumerate_jacobian_Fp(curve: HyperCurve, p: int) -> list[MumfordDivisor]:
    """Every reduced divisor on the odd-degree genus-2 model over F_p."""
    _check_good(curve, p)
    if curve.genus != 2 or not curve.odd_degree:
        raise ValueError("enumeration implemented for odd-degree genus 2")
    f = curve_poly_mod(curve, p)
    out = [MumfordDivisor.identity(f)]
    one = Fp(1, p)
    fvals = {a: f(Fp(a, p)) for a in range(p)}
    for a in range(p):
        fa = fvals[a]
        if fa.is_square():
            r = fa.sqrt()
            for b in {r.v, (-r).v}:
                out.append(MumfordDivisor(f, UniPoly([Fp(-a, p), one]), UniPoly([Fp(b, p)]), check=False))
    for u1 in range(p):
        for u0 in range(p):
            u = UniPoly([Fp(u0, p), Fp(u1, p), one])
            for v1 in range(p):
                for v0 in range(p):
                    v = UniPoly([Fp(v0, p), Fp(v1, p)])
                    if ((v * v - f) % u).is_zero():
                        out.append(MumfordDivisor(f, u, v, check=False))
    return out
