"""Elliptic curves y^2 = x^3 + a2 x^2 + a4 x + a6 over Q or a quadratic field.

Scalars are Fractions or QuadExtElem values; a curve over Q accepts points
with coordinates in any single Q(sqrt d).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .arith import Q, QuadExtElem, UniPoly, factor_rational, rational_roots, sqrt_in_field, squarefree_part

TORSION_EXHAUST = 24
Z2xZ2 = "Z2xZ2"
Z2xZ4 = "Z2xZ4"


class DomainError(ValueError):
    pass


def _field_of(*values) -> Optional[int]:
    ds = {v.d for v in values if isinstance(v, QuadExtElem)}
    if len(ds) > 1:
        raise DomainError(f"values from different quadratic fields {sorted(ds)}")
    return ds.pop() if ds else None


def _scalar(v):
    return v if isinstance(v, QuadExtElem) else Q(v)


class EllipticCurve:
    def __init__(self, a2, a4, a6):
        self.a2, self.a4, self.a6 = _scalar(a2), _scalar(a4), _scalar(a6)
        self.d = _field_of(self.a2, self.a4, self.a6)
        if not self.discriminant:
            raise DomainError(f"singular curve: a2={a2}, a4={a4}, a6={a6}")

    @property
    def b_invariants(self):
        a2, a4, a6 = self.a2, self.a4, self.a6
        return 4 * a2, 2 * a4, 4 * a6, 4 * a2 * a6 - a4 * a4

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self):
        b2, b4, _, _ = self.b_invariants
        c4 = b2 * b2 - 24 * b4
        return c4**3 / self.discriminant

    def rhs(self, x):
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def rhs_poly(self) -> UniPoly:
        return UniPoly([self.a6, self.a4, self.a2, 1])

    def contains(self, x, y) -> bool:
        return y * y == self.rhs(x)

    def point(self, x, y) -> "EllipticPoint":
        return EllipticPoint(self, x, y)

    def infinity(self) -> "EllipticPoint":
        return EllipticPoint(self, None, None)

    def __eq__(self, other):
        return isinstance(other, EllipticCurve) and (self.a2, self.a4, self.a6) == (other.a2, other.a4, other.a6)

    def __hash__(self):
        return hash((self.a2, self.a4, self.a6))

    def __repr__(self):
        return f"EllipticCurve(y^2 = x^3 + ({self.a2})x^2 + ({self.a4})x + ({self.a6}))"

    def to_json(self):
        return {"a2": self.a2, "a4": self.a4, "a6": self.a6}


class EllipticPoint:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: EllipticCurve, x, y, check: bool = True):
        self.curve = curve
        if x is None:
            self.x = self.y = None
            return
        self.x, self.y = _scalar(x), _scalar(y)
        if check and not curve.contains(self.x, self.y):
            raise DomainError(f"({x}, {y}) is not on {curve}")

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def field(self) -> Optional[int]:
        return None if self.is_infinity else _field_of(self.x, self.y)

    def __eq__(self, other):
        if not isinstance(other, EllipticPoint):
            return NotImplemented
        return self.curve == other.curve and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __neg__(self):
        if self.is_infinity:
            return self
        return EllipticPoint(self.curve, self.x, -self.y, check=False)

    def __add__(self, other: "EllipticPoint") -> "EllipticPoint":
        if not isinstance(other, EllipticPoint):
            return NotImplemented
        if self.curve != other.curve:
            raise DomainError("points on different curves")
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        E = self.curve
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if x1 == x2:
            if y1 == -y2:
                return E.infinity()
            lam = (3 * x1 * x1 + 2 * E.a2 * x1 + E.a4) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - E.a2 - x1 - x2
        y3 = lam * (x1 - x3) - y1
        return EllipticPoint(E, x3, y3, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int) -> "EllipticPoint":
        if n < 0:
            return (-self) * (-n)
        result, base = self.curve.infinity(), self
        while n:
            if n & 1:
                result = result + base
            n >>= 1
            if n:
                base = base + base
        return result

    __rmul__ = __mul__

    def conjugate(self) -> "EllipticPoint":
        """Image under sqrt(d) -> -sqrt(d) (the curve must be defined over Q)."""
        if self.is_infinity:
            return self
        conj = lambda v: v.conjugate() if isinstance(v, QuadExtElem) else v  # noqa: E731
        return EllipticPoint(self.curve, conj(self.x), conj(self.y), check=False)

    def __repr__(self):
        return "EllipticPoint(inf)" if self.is_infinity else f"EllipticPoint({self.x}, {self.y})"

    def to_json(self):
        return "inf" if self.is_infinity else [self.x, self.y]


# --- the nice family -----------------------------------------------------------


def _check_L(L) -> Fraction:
    L = Q(L)
    if L in (0, 1):
        raise DomainError(f"L = {L} gives a singular curve")
    return L


def nice_curve(L) -> EllipticCurve:
    """E_L: y^2 = x(x - 1)(x - L)."""
    L = _check_L(L)
    return EllipticCurve(-(1 + L), L, 0)


def curve_parameter(E: EllipticCurve) -> Fraction:
    """L for a curve in the shape x(x-1)(x-L)."""
    if E.a6 != 0 or E.a2 != -(1 + E.a4) or E.d is not None:
        raise DomainError(f"{E} is not of the form x(x-1)(x-L)")
    return E.a4


def duplication_x(x, L):
    """x(2P) = (x^2 - L)^2 / (4 x (x - 1)(x - L)) on E_L."""
    L = _check_L(L)
    x = _scalar(x)
    if x == 0 or x == 1 or x == L:
        raise ZeroDivisionError(f"x = {x} is the abscissa of a 2-torsion point")
    return (x * x - L) ** 2 / (4 * x * (x - 1) * (x - L))


def psi3(E) -> UniPoly:
    """3x^4 - 4(1+L)x^3 + 6Lx^2 - L^2; accepts E_L or L itself."""
    L = curve_parameter(E) if isinstance(E, EllipticCurve) else _check_L(E)
    return UniPoly([-L * L, Fraction(0), 6 * L, -4 * (1 + L), Fraction(3)])


def psi3_generic(E: EllipticCurve) -> UniPoly:
    """3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8."""
    b2, b4, b6, b8 = E.b_invariants
    return UniPoly([b8, 3 * b6, 3 * b4, b2, Fraction(3)])


def quad_sqrt(r):
    """sqrt(r) as a Fraction when r is a square, else k*sqrt(d) in Q(sqrt d)."""
    r = Q(r)
    if r == 0:
        return Fraction(0)
    root = sqrt_in_field(r)
    if root is not None:
        return root
    return sqrt_in_field(r, squarefree_part(r))


@dataclass(frozen=True)
class Order4Candidate:
    x: object
    y_squared: object
    formula: str


def order4_x_candidates(L) -> list[Order4Candidate]:
    """The six abscissas whose doubles are 2-torsion, with the closed forms of f(x).

    f(+-sqrt L) = -L (sqrt L -+ 1)^2, f(1 +- sqrt(1-L)) = (1-L)(1 +- sqrt(1-L))^2,
    f(L +- sqrt(L^2-L)) = (L-1)(L +- sqrt(L^2-L))^2.  Each closed form has the
    shape (radicand-class constant) * square, which is what decides the field of y.
    """
    L = _check_L(L)
    a, b, c = quad_sqrt(L), quad_sqrt(1 - L), quad_sqrt(L * L - L)
    return [
        Order4Candidate(1 + b, (1 - L) * (1 + b) ** 2, "1 + sqrt(1-L)"),
        Order4Candidate(1 - b, (1 - L) * (1 - b) ** 2, "1 - sqrt(1-L)"),
        Order4Candidate(a, -L * (a - 1) ** 2, "sqrt(L)"),
        Order4Candidate(-a, -L * (a + 1) ** 2, "-sqrt(L)"),
        Order4Candidate(L + c, (L - 1) * (L + c) ** 2, "L + sqrt(L^2-L)"),
        Order4Candidate(L - c, (L - 1) * (L - c) ** 2, "L - sqrt(L^2-L)"),
    ]


def _in_field(v, d: Optional[int]) -> bool:
    if not isinstance(v, QuadExtElem) or v.b == 0:
        return True
    return v.d == d


def _lift(v, d: Optional[int]):
    if d is None or isinstance(v, QuadExtElem):
        return v
    return QuadExtElem(v, 0, d)


def _norm_d(d) -> Optional[int]:
    return None if d in (None, 0, 1) else int(d)


def has_order4_over(L, d) -> tuple[bool, Optional[EllipticPoint]]:
    """Whether E_L has a point of order 4 over Q(sqrt d); d in (0, 1, None) means Q.

    Candidates are scanned "+" branch first, so the witness has x = 1 + sqrt(1 - L)
    whenever that branch works.
    """
    L = _check_L(L)
    d = _norm_d(d)
    E = nice_curve(L)
    for cand in order4_x_candidates(L):
        if not (_in_field(cand.x, d) and _in_field(cand.y_squared, d)):
            continue
        fx = cand.y_squared
        if isinstance(fx, QuadExtElem) and fx.b == 0:
            fx = fx.a
        y = sqrt_in_field(fx, d)
        if y is None or not y:
            continue
        P = EllipticPoint(E, _lift(cand.x, d), _lift(y, d))
        P2 = P + P
        if not P2.is_infinity and (P2 + P2).is_infinity:
            return True, P
    return False, None


@lru_cache(maxsize=4096)
def _factors(poly: UniPoly) -> tuple:
    return tuple(factor_rational(poly))


def _roots_in_field(poly: UniPoly, d: Optional[int]) -> list:
    """Roots of a rational polynomial lying in Q (d None) or Q(sqrt d)."""
    out = []
    for fac, _ in _factors(poly):
        if fac.degree == 1:
            out.append(-Q(fac[0]) / Q(fac[1]))
        elif fac.degree == 2 and d is not None:
            c, b, a = Q(fac[0]), Q(fac[1]), Q(fac[2])
            disc = b * b - 4 * a * c
            if squarefree_part(disc) != d:
                continue
            r = sqrt_in_field(disc, d)
            out.extend([(-b + r) / (2 * a), (-b - r) / (2 * a)])
    return out


def three_torsion_points(E: EllipticCurve, d=None) -> list[EllipticPoint]:
    """Points of order 3 on E (defined over Q) with coordinates in Q(sqrt d)."""
    d = _norm_d(d)
    if E.d is not None:
        raise DomainError("three_torsion_points expects a curve over Q")
    out = []
    for x in _roots_in_field(psi3_generic(E), d):
        fx = E.rhs(x)
        if isinstance(fx, QuadExtElem) and fx.b == 0:
            fx = fx.a
        y = sqrt_in_field(fx, d)
        if y is None or not y:
            continue
        for yy in (y, -y):
            out.append(EllipticPoint(E, _lift(x, d), _lift(yy, d)))
    return out


def has_order3_over(E: EllipticCurve, d=None) -> tuple[bool, Optional[EllipticPoint]]:
    pts = three_torsion_points(E, d)
    for P in pts:
        if (P * 3).is_infinity and not P.is_infinity:
            return True, P
    return False, None


def quadratic_twist(L, D: int) -> EllipticCurve:
    """E_L^D: y^2 = x(x - D)(x - D L)."""
    L = _check_L(L)
    D = int(D)
    if D == 1 or squarefree_part(D) != D:
        raise DomainError(f"D = {D} must be squarefree and != 1")
    return EllipticCurve(-D * (1 + L), D * D * L, 0)


def twist_transport(P: EllipticPoint, D: int) -> EllipticPoint:
    """(x, y) -> (D x, D sqrt(D) y) from E_L to E_L^D, over Q(sqrt D)."""
    L = curve_parameter(P.curve)
    target = quadratic_twist(L, D)
    if P.is_infinity:
        return target.infinity()
    sD = QuadExtElem(0, 1, D)
    return EllipticPoint(target, _lift(D * P.x, D), D * sD * P.y)


def twist_inverse(Pt: EllipticPoint, L, D: int) -> EllipticPoint:
    """(X, Y) -> (X / D, Y / (D sqrt D)) back onto E_L."""
    E = nice_curve(L)
    if Pt.is_infinity:
        return E.infinity()
    sD = QuadExtElem(0, 1, D)
    x = Pt.x / D
    y = Pt.y / (D * sD)
    return EllipticPoint(E, x, y)


def torsion_decomposition_check(L, D: int) -> dict:
    """|E(Q(sqrt D))[3]| = |E(Q)[3]| * |E^D(Q)[3]|, each side computed separately."""
    E = nice_curve(L)
    over_K = 1 + len(three_torsion_points(E, D))
    over_Q = 1 + len(three_torsion_points(E))
    twist_Q = 1 + len(three_torsion_points(quadratic_twist(L, D)))
    return {"ok": over_K == over_Q * twist_Q, "E_K": over_K, "E_Q": over_Q, "ED_Q": twist_Q}


def j_invariant(L) -> Fraction:
    """256 (L^2 - L + 1)^3 / (L^2 - L)^2."""
    L = _check_L(L)
    return 256 * (L * L - L + 1) ** 3 / (L * L - L) ** 2


def torsion_order(P: EllipticPoint, bound: int = TORSION_EXHAUST) -> Optional[int]:
    """Least n <= bound with n P = infinity, else None."""
    acc = P
    for n in range(1, bound + 1):
        if acc.is_infinity:
            return n
        acc = acc + P
    return None


def is_torsion(P: EllipticPoint, bound: int = TORSION_EXHAUST) -> bool:
    """Torsion test by exhausting orders up to ``bound``.

    Over Q and quadratic fields every torsion order is at most 24, a trusted
    classification bound rather than something derived here.
    """
    return torsion_order(P, bound) is not None


@dataclass(frozen=True)
class TorsionCode:
    label: str
    d: Optional[int]
    witnesses: tuple = ()

    def to_json(self):
        return {"label": self.label, "d": self.d, "witnesses": [w.to_json() for w in self.witnesses]}


def two_torsion(E: EllipticCurve) -> list[EllipticPoint]:
    return [EllipticPoint(E, x, 0) for x in rational_roots(E.rhs_poly())]
