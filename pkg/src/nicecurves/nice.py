"""Nice curves E_L: y^2 = x(x - 1)(x - L) with L^2 - L + 1 a rational square.

Parametrisations, torsion over quadratic fields, the critical-point
witnesses of infinite order, and the descent from a rational 3-torsion
abscissa down to the genus-3 curve H.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import sympy

from .arith import Q, QuadExtElem, UniPoly, is_square, rational_roots, squarefree_part
from .elliptic import (
    Z2xZ2,
    Z2xZ4,
    EllipticCurve,
    EllipticPoint,
    TorsionCode,
    has_order3_over,
    has_order4_over,
    is_torsion,
    nice_curve,
    psi3,
    torsion_order,
)
from .hyper import HyperCurve, WPPoint, curve_H, known_points_H
from .report import ContractViolation, VerificationReport, trusted

DEFAULT_SEED = 0x4E1CE
SAMPLE_HEIGHT = 100


class DegenerateParameter(ValueError):
    def __init__(self, value, degeneracy: str):
        super().__init__(f"parameter {value} is excluded: {degeneracy}")
        self.value = value
        self.degeneracy = degeneracy


class NotNice(ValueError):
    pass


@dataclass(frozen=True)
class NiceCurve:
    L: Fraction
    W: Fraction
    r: Fraction
    s: Fraction
    curve: EllipticCurve

    @classmethod
    def from_L(cls, L) -> "NiceCurve":
        L = Q(L)
        if L in (0, 1):
            raise DegenerateParameter(L, f"L = {L}")
        W = is_square(L * L - L + 1)
        if W is None:
            raise NotNice(f"L^2 - L + 1 is not a square for L = {L}")
        r, s = (1 + L - W) / 3, (1 + L + W) / 3
        return cls(L, W, r, s, nice_curve(L))

    def f(self, x):
        return x * (x - 1) * (x - self.L)

    def to_json(self):
        return {"L": self.L, "W": self.W, "r": self.r, "s": self.s}


# --- parametrisations -----------------------------------------------------------


def _param_degeneracy(t: Fraction) -> Optional[str]:
    if t == Fraction(1, 2):
        return "2t - 1 = 0"
    if t in (0, 2):
        return "L = 1"
    if t in (1, -1):
        return "L = 0"
    return None


def conic_point(t) -> tuple[Fraction, Fraction]:
    """(L, W) on W^2 = L^2 - L + 1 before sign normalisation."""
    t = Q(t)
    bad = _param_degeneracy(t)
    if bad:
        raise DegenerateParameter(t, bad)
    den = 2 * t - 1
    return (t * t - 1) / den, (t * t - t + 1) / den


def conic_parameter(L, W) -> Fraction:
    """Inverse of :func:`conic_point`: project from (0, 1) with slope k, t = (2 + k)/(1 - k)."""
    L, W = Q(L), Q(W)
    if L == 0:
        raise DegenerateParameter(L, "L = 0")
    k = (W - 1) / L
    if k == 1:
        raise DegenerateParameter(L, "point at infinity of the pencil")
    return (2 + k) / (1 - k)


def param_L(t) -> tuple[Fraction, Fraction]:
    """(L, W) with W > 0."""
    L, W = conic_point(t)
    return L, abs(W)


def special_L(u) -> NiceCurve:
    """L = (u^2 + 3)(u^2 - 1) / (4u^2)."""
    u = Q(u)
    if u == 0:
        raise DegenerateParameter(u, "u = 0")
    if u in (1, -1):
        raise DegenerateParameter(u, "L = 0")
    return NiceCurve.from_L((u * u + 3) * (u * u - 1) / (4 * u * u))


def _rationals_of_height(bound: int) -> list[Fraction]:
    out = set()
    for b in range(1, bound + 1):
        for a in range(-bound, bound + 1):
            out.add(Fraction(a, b))
    return sorted(out)


def sample_nice_L(count: int, height_bound: int = 50, seed: int = DEFAULT_SEED) -> list[tuple[Fraction, Fraction]]:
    """``count`` distinct (t, L) pairs with height(t) <= height_bound, sorted by t."""
    by_L = {}
    for t in _rationals_of_height(height_bound):
        if _param_degeneracy(t):
            continue
        by_L.setdefault(param_L(t)[0], t)
    pairs = sorted((t, L) for L, t in by_L.items())
    if count >= len(pairs):
        return pairs
    return sorted(random.Random(seed).sample(pairs, count))


def sample_u(count: int, height_bound: int = SAMPLE_HEIGHT, seed: int = DEFAULT_SEED) -> list[Fraction]:
    """Distinct positive u (the sign of u does not change L), sorted."""
    pool = [u for u in _rationals_of_height(height_bound) if u > 0 and u != 1]
    if count >= len(pool):
        return pool
    return sorted(random.Random(seed).sample(pool, count))


def squarefree_values(bound: int, exclude: Iterable[int] = ()) -> list[int]:
    skip = set(exclude)
    return [d for d in range(-bound, bound + 1) if d not in (0, 1) and squarefree_part(d) == d and d not in skip]


# --- torsion over quadratic fields ----------------------------------------------


def torsion_classification(L, d: int) -> TorsionCode:
    """Torsion of E_L over Q(sqrt d), derived twice and cross-checked.

    The label path compares squarefree labels of d and 1 - L.  The witness
    path searches for order-4 and order-3 points directly.  Disagreement is a
    contract violation, not a silent preference for either path.
    """
    nc = NiceCurve.from_L(L)
    d = int(d)
    if squarefree_part(d) != d:
        raise ValueError(f"d = {d} is not squarefree")
    label_path = Z2xZ4 if d == squarefree_part(1 - nc.L) else Z2xZ2
    has4, w4 = has_order4_over(nc.L, d)
    has3, w3 = has_order3_over(nc.curve, d)
    if has3:
        raise ContractViolation(f"order-3 point {w3} on E_{nc.L} over Q(sqrt {d})")
    witness_path = Z2xZ4 if has4 else Z2xZ2
    if label_path != witness_path:
        raise ContractViolation(f"paths disagree for (L, d) = ({nc.L}, {d}): {label_path} vs {witness_path}")
    witnesses = (w4,) if has4 else ()
    return TorsionCode(witness_path, d, witnesses)


# --- critical points ------------------------------------------------------------


@dataclass(frozen=True)
class CriticalPoint:
    point: EllipticPoint
    root: str  # "r" or "s"


def critical_values(nc: NiceCurve) -> dict[str, Fraction]:
    return {"r": nc.f(nc.r), "s": nc.f(nc.s)}


def rational_critical_point(u) -> CriticalPoint:
    """The critical point whose f-value is a rational square, with y > 0.

    Which of r, s carries the square value depends on u, so the root label is
    returned alongside the point.
    """
    nc = special_L(u)
    squares = {k: is_square(v) for k, v in critical_values(nc).items()}
    hits = [k for k, y in squares.items() if y is not None and y != 0]
    if len(hits) != 1:
        raise ContractViolation(f"expected exactly one square critical value at u = {u}, got {hits}")
    k = hits[0]
    x = nc.r if k == "r" else nc.s
    P = EllipticPoint(nc.curve, x, squares[k])
    if is_torsion(P):
        raise ContractViolation(f"critical point {P} is torsion")
    return CriticalPoint(P, k)


@dataclass
class Rank2Witness:
    u: Fraction
    nice: NiceCurve
    P: CriticalPoint
    Q: CriticalPoint
    certificate: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.certificate.values())


def rank2_witnesses(u) -> Rank2Witness:
    """P over Q and Q over Q(sqrt -3) at the two critical abscissas.

    Independence: sigma fixes P and negates Q, so aP + bQ = 0 forces
    2aP = 2bQ = 0, and both points have infinite order.
    """
    u = Q(u)
    nc = special_L(u)
    P = rational_critical_point(u)
    other = "s" if P.root == "r" else "r"
    c = nc.s if other == "s" else nc.r
    q = is_square(nc.f(c) / -3)
    if q is None or q == 0:
        raise ContractViolation(f"f({c}) = {nc.f(c)} is not in -3 Q^2")
    Qpt = EllipticPoint(nc.curve, QuadExtElem(c, 0, -3), QuadExtElem(0, q, -3))
    sigmaQ = Qpt.conjugate()
    cert = {
        "P_non_torsion": not is_torsion(P.point),
        "Q_non_torsion": not is_torsion(Qpt),
        "sigma_Q_is_minus_Q": sigmaQ == -Qpt and (sigmaQ + Qpt).is_infinity,
        "sigma_P_is_P": P.point.conjugate() == P.point,
    }
    return Rank2Witness(u, nc, P, CriticalPoint(Qpt, other), cert)


# --- auxiliary curves -----------------------------------------------------------


def _count_mod_p(E: EllipticCurve, p: int) -> int:
    a2, a4, a6 = (int(c) for c in (E.a2, E.a4, E.a6))
    n = 1
    for x in range(p):
        v = (x * x * x + a2 * x * x + a4 * x + a6) % p
        n += 1 if v == 0 else (2 if pow(v, (p - 1) // 2, p) == 1 else 0)
    return n


def _good_primes(E: EllipticCurve, count: int = 4) -> list[int]:
    disc = int(E.discriminant)
    return [int(p) for p in sympy.primerange(3, 200) if disc % p][:count]


def _group_closed(points: list[EllipticPoint]) -> bool:
    s = set(points)
    return all(P + R in s for P in points for R in points) and all(-P in s for P in points)


def lutz_nagell_torsion(a4: int, a6: int) -> list[EllipticPoint]:
    """Torsion of y^2 = x^3 + a4 x + a6 (integral) via Lutz-Nagell candidates."""
    E = EllipticCurve(0, a4, a6)
    disc = abs(4 * a4**3 + 27 * a6 * a6)
    ys = [0] + [y for y in range(1, sympy.integer_nthroot(disc, 2)[0] + 1) if disc % (y * y) == 0]
    pts = [E.infinity()]
    for y in ys:
        for x in rational_roots(UniPoly([a6 - y * y, a4, 0, 1])):
            if x.denominator != 1:
                continue
            for yy in {y, -y}:
                P = EllipticPoint(E, x, yy)
                if torsion_order(P, 12) is not None:
                    pts.append(P)
    return pts


# J: y^2 = x^3 + (2/3)x + 7/27 is y^2 = x^3 + 54x + 189 after (x, y) -> (x/9, y/27)
J_INTEGRAL = (54, 189)
J_SCALE = (9, 27)


def aux_lemma_curves_check() -> list[VerificationReport]:
    """Point lists of E_1, E_2, C and the torsion of J; rank-0 facts are trusted inputs."""
    reports = []

    E1 = EllipticCurve(-1, 1, 0)  # x(x^2 - x + 1)
    rep = VerificationReport("lemma4t1.E1")
    pts = [E1.infinity()] + [EllipticPoint(E1, x, y, check=False) for x, y in ((0, 0), (1, -1), (1, 1))]
    for P in pts[1:]:
        rep.check(f"({P.x}, {P.y}) on E1", E1.contains(P.x, P.y), P)
    if rep.status != "FAIL":
        rep.check("E1 list closed under the group law", _group_closed(pts))
        rep.check("(1,1) has order 4", torsion_order(pts[3]) == 4, torsion_order(pts[3]))
        for p in _good_primes(E1):
            rep.check(f"4 divides #E1(F_{p})", _count_mod_p(E1, p) % 4 == 0, _count_mod_p(E1, p))
    reports.append(rep)

    # E_2: y^2 = (1 - x)(x^2 - x + 1); x -> -x gives y^2 = x^3 + 2x^2 + 2x + 1
    E2 = EllipticCurve(2, 2, 1)
    rep = VerificationReport("lemma4t1.E2")
    listed = [(1, 0), (0, -1), (0, 1)]
    for x, y in listed:
        x, y = Q(x), Q(y)
        rep.check(f"({x}, {y}) on E2", y * y == (1 - x) * (x * x - x + 1), [x, y])
    if rep.status != "FAIL":
        pts = [E2.infinity()] + [EllipticPoint(E2, -Q(x), y) for x, y in listed]
        rep.check("E2 list closed under the group law", _group_closed(pts))
        rep.check("group of order 4", len(set(pts)) == 4)
        for p in _good_primes(E2):
            rep.check(f"4 divides #E2(F_{p})", _count_mod_p(E2, p) % 4 == 0, _count_mod_p(E2, p))
    reports.append(rep)

    rep = VerificationReport("lemma4t2.C")
    quartic = lambda x: (x * x - x) * (x * x - x + 1)  # noqa: E731
    for x, y in ((0, 0), (1, 0)):
        rep.check(f"({x}, {y}) on C", Q(y) ** 2 == quartic(Q(x)), [x, y])
    rep.witnesses["C_known"] = [[0, 0], [1, 0], "+inf", "-inf"]
    a4, a6 = J_INTEGRAL
    J_tors = lutz_nagell_torsion(a4, a6)
    sx, sy = J_SCALE
    J = EllipticCurve(0, Fraction(2, 3), Fraction(7, 27))
    J_pts = [J.infinity()] + [EllipticPoint(J, P.x / sx, P.y / sy) for P in J_tors[1:]]
    rep.witnesses["J_torsion"] = J_pts
    rep.check("J torsion has 4 points", len(J_pts) == 4, len(J_pts))
    rep.check("J torsion closed under the group law", _group_closed(J_pts))
    rep.check("#C(Q)_known <= #J(Q)_tors", 4 <= len(J_pts))
    J_int = EllipticCurve(0, a4, a6)
    for p in _good_primes(J_int):
        n = _count_mod_p(J_int, p)
        rep.check(f"4 divides #J(F_{p})", n % 4 == 0, n)
    reports.append(rep)

    reports.append(trusted("lemma4t1.rank0", "lemma4t1: E1(Q) and E2(Q) are exactly the listed sets", curves=["E1", "E2"]))
    reports.append(trusted("lemma4t2.rank0", "lemma4t2: J(Q) has exactly 4 points", curve="J"))
    return reports


# --- descent from a rational root of psi_3 --------------------------------------


def cusp_cubic(A, B):
    """F(A, B) = B^2 - 12AB + 18B - 27 + 4A^3; S is F = 0."""
    return B * B - 12 * A * B + 18 * B - 27 + 4 * A**3


def cusp_cubic_singular_points() -> list[tuple[Fraction, Fraction]]:
    a, b = sympy.symbols("A B")
    F = cusp_cubic(a, b)
    sols = sympy.solve([F, sympy.diff(F, a), sympy.diff(F, b)], [a, b], dict=True)
    return sorted((Fraction(str(s[a])), Fraction(str(s[b]))) for s in sols)


def shifted_psi3(L) -> UniPoly:
    """psi_3(x + (L + 1)/3), computed by composition."""
    L = Q(L)
    return psi3(L).compose(UniPoly([(L + 1) / 3, Fraction(1)]))


def shifted_psi3_closed_form(L) -> UniPoly:
    L = Q(L)
    w2 = L * L - L + 1
    return UniPoly([-w2 * w2 / 9, -Fraction(4, 9) * (2 * L - 1) * (L + 1) * (L - 2), -2 * w2, Fraction(0), Fraction(3)])


@dataclass(frozen=True)
class CuspCubicPoint:
    A: Fraction
    B: Fraction

    def __post_init__(self):
        if cusp_cubic(self.A, self.B) != 0:
            raise ValueError(f"({self.A}, {self.B}) is not on S")

    def to_json(self):
        return [self.A, self.B]


def cusp_param(t) -> CuspCubicPoint:
    t = Q(t)
    return CuspCubicPoint(3 - t * t, 2 * t**3 - 6 * t * t + 9)


def cusp_parameter(P: CuspCubicPoint) -> Fraction:
    """Inverse of :func:`cusp_param` away from the cusp: slope through (3, 9) is 6 - 2t."""
    if (P.A, P.B) == (3, 9):
        return Fraction(0)
    return 3 - (P.B - 9) / (2 * (P.A - 3))


def t_of_u(u) -> Fraction:
    u = Q(u)
    return (3 - 3 * u * u) / (1 + 3 * u * u)


@dataclass(frozen=True)
class SexticResult:
    u: Fraction
    t: Fraction
    v: Optional[Fraction]


def sextic_condition(u) -> SexticResult:
    """v >= 0 with 3u^6 + 75u^4 - 15u^2 + 1 = (3u^2 + 1) v^2, if it exists."""
    u = Q(u)
    val = (3 * u**6 + 75 * u**4 - 15 * u**2 + 1) / (3 * u * u + 1)
    return SexticResult(u, t_of_u(u), is_square(val))


@dataclass
class DescentWitness:
    L: Fraction
    x: Fraction
    A: Fraction
    B: Fraction
    identities: dict
    on_cusp_cubic: bool
    t: Optional[Fraction] = None
    u_squared: Optional[Fraction] = None
    v: Optional[Fraction] = None

    def to_json(self):
        return {k: getattr(self, k) for k in ("L", "x", "A", "B", "identities", "on_cusp_cubic", "t", "u_squared", "v")}


def descent_chain(L, x) -> DescentWitness:
    """A = (2L - 1)/x, B = (L^2 - L + 1)/x^2, with x the shifted abscissa.

    x^4 F(A, B) = -9 psi_3(x + (L + 1)/3), so (A, B) lies on S exactly when x
    is a root of the shifted quartic.
    """
    L, x = Q(L), Q(x)
    if x == 0:
        raise ValueError("x = 0")
    w2 = L * L - L + 1
    A, B = (2 * L - 1) / x, w2 / x**2
    shifted = shifted_psi3(L)
    ids = {
        "A^2 - 4B = -3/x^2": A * A - 4 * B == -3 / x**2,
        "x^4 F(A,B) = -9 psi3_shifted(x)": x**4 * cusp_cubic(A, B) == -9 * shifted(x),
        "shifted psi3 closed form": shifted == shifted_psi3_closed_form(L),
    }
    on_S = cusp_cubic(A, B) == 0
    w = DescentWitness(L, x, A, B, ids, on_S)
    if on_S:
        w.t = cusp_parameter(CuspCubicPoint(A, B))
        if w.t != -1:
            w.u_squared = (3 - w.t) / (3 * (1 + w.t))
        w.v = is_square(B)
    return w


# --- the curve C and its map to H -----------------------------------------------


def on_curve_C(U, V, W) -> bool:
    U, V, W = Q(U), Q(V), Q(W)
    return 3 * U**6 + 75 * U**4 * W**2 - 15 * U**2 * W**4 + W**6 - 3 * U**2 * V**2 * W**2 - V**2 * W**4 == 0


def C_to_H(U, V, W, H: Optional[HyperCurve] = None) -> WPPoint:
    """X = (U + W)/2, Y = -(3U^2 + W^2) V W / 16, Z = (U - W)/2."""
    if not on_curve_C(U, V, W):
        raise ValueError(f"({U}, {V}, {W}) is not on C")
    U, V, W = Q(U), Q(V), Q(W)
    X = (U + W) / 2
    Y = -3 * U * U * V * W / 16 - V * W**3 / 16
    Z = (U - W) / 2
    return WPPoint(H or curve_H(), X, Y, Z)


def U_coordinate(P: WPPoint) -> Optional[Fraction]:
    """U/W = (X + Z)/(X - Z) for the image on C; None when it lies at W = 0."""
    if P.X == P.Z:
        return None
    return (P.X + P.Z) / (P.X - P.Z)


def U_values(points: Optional[Iterable[WPPoint]] = None) -> list[Fraction]:
    pts = known_points_H() if points is None else points
    return sorted({u for u in (U_coordinate(P) for P in pts) if u is not None})


def conclude_no_3torsion(values: Optional[Iterable] = None) -> VerificationReport:
    """Every finite U either kills A^2 - 4B or forces L^2 - L + 1 = 1."""
    vals = U_values() if values is None else [Q(u) for u in values]
    rep = VerificationReport("prop3T")
    branches = {}
    for u in vals:
        t = t_of_u(u)
        P = cusp_param(t)
        disc = P.A * P.A - 4 * P.B
        if disc == 0:
            branches[str(u)] = "A^2 - 4B = 0 (impossible: equals -3/x^2)"
            rep.check(f"U = {u}", True, {"t": t, "A": P.A, "B": P.B})
            continue
        w2 = -3 * P.B / disc
        ok = w2 == 1
        branches[str(u)] = f"L^2 - L + 1 = {w2}" + (" (forces L in {0, 1})" if ok else "")
        rep.check(f"U = {u}", ok, {"t": t, "A": P.A, "B": P.B, "L^2-L+1": w2})
    rep.witnesses["U_values"] = vals
    rep.witnesses["branches"] = branches
    rep.witnesses["verdict"] = "no rational 3-torsion" if rep.passed else "chain not closed"
    return rep
