"""Capped relative precision p-adic numbers and truncated power series.

A :class:`PadicNumber` is ``p**val * unit`` with ``unit`` known modulo
``p**prec``; the tracked zero has ``prec == 0`` and stores its absolute
precision in ``val``.  Exact inputs (ints, Fractions) never limit the
precision of a result.

A :class:`PadicSeries` is a truncated power series ``sum c_k t**k`` plus a
model of the omitted coefficients, from which a lower bound on the valuation
of the omitted part is derived at any positive root valuation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

from .finite import sqrt_mod

DEFAULT_PRECISION = 30
EXACT = 10**6  # absolute precision used for exact zeros
PRECISION_FLOOR = 5
ZERO_COERCE_PREC = 200  # digits given to a rational added to an exact zero


class PadicError(ArithmeticError):
    pass


class NonResidue(PadicError):
    pass


class OddValuation(PadicError):
    pass


class InsufficientPrecision(PadicError):
    pass


class DiskViolation(PadicError):
    pass


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp_rational(q, p: int) -> int:
    q = Fraction(q)
    return vp(q.numerator, p) - vp(q.denominator, p)


class PadicNumber:
    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val: int, unit: int, prec: int):
        self.p = p
        self.prec = prec
        if prec <= 0:
            self.val = val
            self.unit = 0
            self.prec = 0
            return
        mod = p**prec
        unit %= mod
        if unit == 0:
            self.val = val + prec
            self.unit = 0
            self.prec = 0
            return
        while unit % p == 0:
            unit //= p
            val += 1
            prec -= 1
        self.val = val
        self.unit = unit % p**prec
        self.prec = prec

    @classmethod
    def from_rational(cls, q, p: int, prec: int = DEFAULT_PRECISION) -> "PadicNumber":
        q = Fraction(q)
        if q == 0:
            return cls.zero(p, prec)
        a = vp(q.numerator, p)
        b = vp(q.denominator, p)
        num = q.numerator // p**a
        den = q.denominator // p**b
        mod = p**prec
        return cls(p, a - b, num * pow(den, -1, mod), prec)

    @classmethod
    def zero(cls, p: int, absprec: int) -> "PadicNumber":
        return cls(p, absprec, 0, 0)

    @property
    def abs_prec(self) -> int:
        return self.val + self.prec

    def is_zero(self) -> bool:
        return self.prec == 0

    def __bool__(self):
        return self.prec != 0

    def valuation(self) -> int:
        """Valuation; for the tracked zero, the lower bound it is known to."""
        return self.val

    def _coerce(self, other) -> Optional["PadicNumber"]:
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PadicNumber.zero(self.p, EXACT)
            v = vp_rational(other, self.p)
            # against a tracked zero only the absolute precision matters
            cap = self.val - v if self.is_zero() else self.abs_prec - v
            prec = max(min(cap, ZERO_COERCE_PREC) if self.is_zero() else cap, self.prec, 1)
            return PadicNumber.from_rational(other, self.p, prec)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.p
        A = min(self.abs_prec, o.abs_prec)
        if self.is_zero() and o.is_zero():
            return PadicNumber.zero(p, A)
        if self.is_zero():
            return PadicNumber(p, o.val, o.unit, A - o.val)
        if o.is_zero():
            return PadicNumber(p, self.val, self.unit, A - self.val)
        m = min(self.val, o.val)
        if A <= m:
            return PadicNumber.zero(p, A)
        s = self.unit * p ** (self.val - m) + o.unit * p ** (o.val - m)
        return PadicNumber(p, m, s, A - m)

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber(self.p, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if self.is_zero() and isinstance(other, (int, Fraction)) and other != 0:
            return PadicNumber.zero(self.p, self.val + vp_rational(other, self.p))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return PadicNumber.zero(self.p, self.val + o.val)
        prec = min(self.prec, o.prec)
        return PadicNumber(self.p, self.val + o.val, self.unit * o.unit, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero():
            raise ZeroDivisionError("p-adic inverse of a (tracked) zero")
        return PadicNumber(self.p, -self.val, pow(self.unit, -1, self.p**self.prec), self.prec)

    def __truediv__(self, other):
        if self.is_zero() and isinstance(other, (int, Fraction)) and other != 0:
            return PadicNumber.zero(self.p, self.val - vp_rational(other, self.p))
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
        if n == 0:
            return PadicNumber(self.p, 0, 1, max(self.prec, 1))
        if self.is_zero():
            return PadicNumber.zero(self.p, self.val * n)
        return PadicNumber(self.p, self.val * n, pow(self.unit, n, self.p**self.prec), self.prec)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def residue(self) -> int:
        """Image in F_p; requires val >= 0."""
        if self.val < 0:
            raise ValueError("residue of a non-integral p-adic number")
        if self.is_zero() or self.val > 0:
            return 0
        return self.unit % self.p

    def lift(self) -> Fraction:
        """A rational (integer when integral) representative."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def with_prec(self, prec: int) -> "PadicNumber":
        if self.is_zero():
            return self
        return PadicNumber(self.p, self.val, self.unit, min(prec, self.prec))

    def __repr__(self):
        if self.is_zero():
            return f"O({self.p}^{self.val})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.abs_prec})"

    def to_json(self) -> dict:
        return {"p": self.p, "val": self.val, "unit": str(self.unit), "prec": self.prec}


def padic(q, p: int, prec: int = DEFAULT_PRECISION) -> PadicNumber:
    if isinstance(q, PadicNumber):
        return q
    return PadicNumber.from_rational(q, p, prec)


def padic_sqrt(a: PadicNumber) -> PadicNumber:
    """Square root whose leading residue lies in [1, (p-1)/2]."""
    p = a.p
    if a.is_zero():
        return PadicNumber.zero(p, a.val // 2)
    if a.val % 2:
        raise OddValuation(f"valuation {a.val} is odd")
    r = sqrt_mod(a.unit % p, p)
    if r is None:
        raise NonResidue(f"{a.unit % p} is not a square mod {p}")
    if r > (p - 1) // 2:
        r = p - r
    # Newton iteration doubles the known digits each step
    k = 1
    while k < a.prec:
        k = min(2 * k, a.prec)
        mod = p**k
        r = (r - (r * r - a.unit) * pow(2 * r, -1, mod)) % mod
    return PadicNumber(p, a.val // 2, r, a.prec)


def hensel_root(coeffs: Sequence, approx: int, p: int, prec: int) -> PadicNumber:
    """Lift a simple root ``approx`` mod p of an integer polynomial to Z_p."""
    from .arith import UniPoly

    f = UniPoly(padic(c, p, prec) for c in coeffs)
    df = f.derivative()
    r = padic(approx, p, prec)
    if df(r).valuation() != 0:
        raise PadicError("root is not simple mod p")
    for _ in range(int(math.log2(prec)) + 2):
        r = r - f(r) / df(r)
    return r.with_prec(prec)


# --- power series -----------------------------------------------------------


def _log_p_floor(k: int, p: int) -> int:
    e = 0
    while k >= p:
        k //= p
        e += 1
    return e


def tail_bound(order: int, nu, p: int, tail_log: bool) -> Fraction:
    """min over k >= order of k*nu - (floor(log_p k) if tail_log else 0)."""
    nu = Fraction(nu)
    k0 = max(order, 1)
    best = k0 * nu - (_log_p_floor(k0, p) if tail_log else 0)
    if tail_log:
        q = p
        while q <= k0:
            q *= p
        # k*nu - floor(log_p k) only drops at powers of p
        while True:
            v = q * nu - _log_p_floor(q, p)
            best = min(best, v)
            if q * (p - 1) * nu > 1 and v > best + 1:
                break
            q *= p
    return best


def order_for(target, nu, p: int, tail_log: bool = True) -> int:
    """Smallest order whose tail bound at root valuation nu reaches target."""
    nu = Fraction(nu)
    n = max(1, math.ceil(Fraction(target) / nu))
    while tail_bound(n, nu, p, tail_log) < target:
        n += 1
    return n


class PadicSeries:
    """Truncated series ``sum_{k < order} c_k t^k`` with a tail model.

    Every omitted coefficient (index ``k >= order``) satisfies
    ``val(c_k) >= tail_base - (floor(log_p k) if tail_log else 0)``.  From this
    :meth:`tail_val` bounds the omitted part at any root valuation.
    ``tail_base=None`` means the series is exact (a polynomial).
    """

    __slots__ = ("p", "coeffs", "tail_base", "tail_log")

    def __init__(self, p: int, coeffs: Sequence, tail_base: Optional[int] = None, tail_log: bool = False):
        self.p = p
        self.coeffs = [padic(c, p) for c in coeffs]
        self.tail_base = tail_base
        self.tail_log = tail_log

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def tail_val(self, nu=1) -> float:
        """Lower bound on val(sum_{k >= order} c_k t^k) for val(t) >= nu > 0."""
        if self.tail_base is None:
            return math.inf
        return tail_bound(self.order, nu, self.p, self.tail_log) + self.tail_base

    def __add__(self, other: "PadicSeries") -> "PadicSeries":
        p = self.p
        if self.tail_base is None and other.tail_base is None:
            n = max(self.order, other.order)
            pad = lambda s: s.coeffs + [PadicNumber.zero(p, EXACT)] * (n - s.order)  # noqa: E731
            return PadicSeries(p, [a + b for a, b in zip(pad(self), pad(other))])
        n = min(s.order for s in (self, other) if s.tail_base is not None)
        base = min(s.tail_base for s in (self, other) if s.tail_base is not None)
        lg = self.tail_log or other.tail_log
        out = []
        for s in (self, other):
            # exact coefficients past the truncation point fold into the tail
            extra = [c.valuation() for c in s.coeffs[n:] if not c.is_zero()]
            if s.tail_base is None and extra:
                base = min(base, min(extra))
            out.append(s.coeffs[:n] + [PadicNumber.zero(p, EXACT)] * (n - min(n, s.order)))
        return PadicSeries(p, [a + b for a, b in zip(*out)], base, lg)

    def __neg__(self):
        return PadicSeries(self.p, [-c for c in self.coeffs], self.tail_base, self.tail_log)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PadicSeries":
        c = padic(c, self.p)
        base = None if self.tail_base is None else self.tail_base + min(c.valuation(), EXACT)
        return PadicSeries(self.p, [c * a for a in self.coeffs], base, self.tail_log)

    def __mul__(self, other: "PadicSeries") -> "PadicSeries":
        """Truncated product; tail model assumes both factors have integral coefficients."""
        if self.tail_base is None and other.tail_base is None:
            n = self.order + other.order - 1
        else:
            n = min(self.order if self.tail_base is not None else math.inf,
                    other.order if other.tail_base is not None else math.inf)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n):
            acc = None
            for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
                t = a[i] * b[k - i]
                acc = t if acc is None else acc + t
            out.append(acc if acc is not None else PadicNumber.zero(self.p, EXACT))
        if self.tail_base is None and other.tail_base is None:
            return PadicSeries(self.p, out)
        vals = [c.valuation() for c in a + b if not c.is_zero()]
        base = min([0] + vals)
        return PadicSeries(self.p, out, 2 * base, False)

    def truncate(self, order: int) -> "PadicSeries":
        if order >= self.order:
            return self
        base = self.tail_base
        if base is None:
            base = min(c.valuation() for c in self.coeffs[order:] if not c.is_zero()) if any(
                not c.is_zero() for c in self.coeffs[order:]) else EXACT
        return PadicSeries(self.p, self.coeffs[:order], base, self.tail_log)

    def evaluate(self, t: PadicNumber, nu=None) -> PadicNumber:
        """Value at t; the tail bound is applied using nu = val(t) by default."""
        t = padic(t, self.p)
        acc = PadicNumber.zero(self.p, EXACT)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        if self.tail_base is not None:
            nu = t.valuation() if nu is None else nu
            if nu <= 0:
                raise DiskViolation(f"evaluation point has valuation {nu} <= 0")
            acc = acc + PadicNumber.zero(self.p, math.floor(self.tail_val(nu)))
        return acc

    def min_valuation(self) -> int:
        return min(c.valuation() for c in self.coeffs)

    def __repr__(self):
        return f"PadicSeries(p={self.p}, order={self.order}, tail_base={self.tail_base})"


def series_from_poly(poly_coeffs: Sequence, p: int, order: int, prec: int = DEFAULT_PRECISION) -> PadicSeries:
    cs = [padic(c, p, prec) for c in poly_coeffs]
    cs = (cs + [PadicNumber.zero(p, EXACT)] * order)[:max(order, 1)]
    return PadicSeries(p, cs, 0 if len(poly_coeffs) > order else None)


def series_inverse(s: PadicSeries) -> PadicSeries:
    """1/s for s with unit constant term (integral coefficients stay integral)."""
    c0 = s.coeffs[0]
    if c0.valuation() != 0 or c0.is_zero():
        raise PadicError("series inverse needs a unit constant term")
    inv0 = c0.inverse()
    out = [inv0]
    for k in range(1, s.order):
        acc = s.coeffs[1] * out[k - 1]
        for i in range(2, k + 1):
            acc = acc + s.coeffs[i] * out[k - i]
        out.append(-acc * inv0)
    return PadicSeries(s.p, out, 0, False)


def series_sqrt(s: PadicSeries) -> PadicSeries:
    """Square root with constant term padic_sqrt(c0); c0 must be a unit.

    The canonical root of c0 (leading residue in [1, (p-1)/2]) is used; negate
    the result to get the other branch.
    """
    r0 = padic_sqrt(s.coeffs[0])
    if r0.valuation() != 0:
        raise PadicError("series sqrt needs a unit constant term")
    inv = (2 * r0).inverse()
    out = [r0]
    for k in range(1, s.order):
        acc = s.coeffs[k]
        for i in range(1, k):
            acc = acc - out[i] * out[k - i]
        out.append(acc * inv)
    return PadicSeries(s.p, out, 0, False)


def antiderivative(s: PadicSeries) -> PadicSeries:
    """Termwise integral a_k t^k -> a_k t^(k+1)/(k+1), constant term 0.

    Dividing by k+1 costs ord_p(k+1) digits; the p-adic division records the
    loss per coefficient and the tail model gains its log_p term.
    """
    p = s.p
    out = [PadicNumber.zero(p, EXACT)]
    for k, a in enumerate(s.coeffs):
        out.append(a / (k + 1))
    base = s.tail_base
    if base is None:
        return PadicSeries(p, out)
    return PadicSeries(p, out, base, True)


def strassmann_bound(s: PadicSeries, rescale: bool = True) -> int:
    """Bound on the number of zeros of s in the residue disk val(t) >= 1.

    With ``rescale`` (the default) the classical Strassmann count is applied to
    s(p*t): the answer is the largest index attaining the minimal valuation of
    c_k * p**k.  ``rescale=False`` gives the count for s itself on the closed
    unit disk.  Raises InsufficientPrecision when the minimum is not certified
    by the known digits and the tail model.
    """
    shift = 1 if rescale else 0
    known = [(c.valuation() + shift * k, c.is_zero()) for k, c in enumerate(s.coeffs)]
    nonzero = [v for v, z in known if not z]
    if not nonzero:
        raise InsufficientPrecision("all coefficients vanish to working precision")
    m = min(nonzero)
    for v, z in known:
        if z and v <= m:
            raise InsufficientPrecision(f"a coefficient known only to O(p^{v}) may attain the minimum {m}")
    if s.tail_base is None:
        tail = math.inf
    elif rescale:
        tail = s.tail_val(1)
    else:
        # on the unit disk a log_p loss in the tail is unbounded below
        tail = -math.inf if s.tail_log else s.tail_base
    if not tail > m:
        raise InsufficientPrecision(f"tail bound {tail} does not exceed the minimum {m}")
    return max(k for k, (v, z) in enumerate(known) if not z and v == m)


def newton_root_valuation(u_coeffs: Sequence[PadicNumber]) -> Fraction:
    """Smallest valuation among the roots of a monic u of degree 1 or 2."""
    if len(u_coeffs) == 2:
        return Fraction(u_coeffs[0].valuation())
    c0, c1 = u_coeffs[0], u_coeffs[1]
    v0 = Fraction(c0.valuation())
    v1 = Fraction(c1.valuation())
    # lower convex hull of (0, v0), (1, v1), (2, 0)
    if 2 * v1 <= v0:
        return v1
    return v0 / 2


def power_sums(u_coeffs: Sequence[PadicNumber], n: int) -> list[PadicNumber]:
    """p_0..p_n of the roots of the monic u via Newton's identities."""
    p = u_coeffs[0].p
    if len(u_coeffs) == 2:
        r = -u_coeffs[0]
        out = [padic(1, p)]
        for _ in range(n):
            out.append(out[-1] * r)
        return out
    e1 = -u_coeffs[1]
    e2 = u_coeffs[0]
    out = [padic(2, p), e1]
    for k in range(2, n + 1):
        out.append(e1 * out[k - 1] - e2 * out[k - 2])
    return out[: n + 1]


def evaluate_symmetric(s: PadicSeries, u: Sequence, k: int = 0, min_root_val=1) -> PadicNumber:
    """Sum of t**k * s(t) over the roots t of the monic u (degree 1 or 2).

    ``u`` is given low degree first, over Q_p.  Roots may live in a quadratic
    extension; only their power sums, which lie in Q_p, are formed.
    """
    p = s.p
    cs = [padic(c, p) for c in u]
    if len(cs) not in (2, 3):
        raise ValueError("u must have degree 1 or 2")
    if not (cs[-1] - 1).is_zero():
        raise ValueError("u must be monic")
    nu = newton_root_valuation(cs)
    if nu < min_root_val:
        raise DiskViolation(f"a root of u has valuation {nu} < {min_root_val}")
    ps = power_sums(cs, s.order + k)
    acc = PadicNumber.zero(p, EXACT)
    for j, c in enumerate(s.coeffs):
        acc = acc + c * ps[j + k]
    if s.tail_base is not None:
        acc = acc + PadicNumber.zero(p, math.floor(s.tail_val(nu) + k * nu))
    return acc


class QuadAlgebra:
    """Q_p[w]/(w^2 + c1 w + c0): arithmetic on the two roots at once.

    An element a + b*w stands for the pair of its values at the two roots of
    the modulus, so trace and norm are sums and products over the roots.
    Degree-1 moduli (a single root) are supported with b ignored.
    """

    def __init__(self, modulus: Sequence[PadicNumber]):
        self.deg = len(modulus) - 1
        self.p = modulus[0].p
        self.c0 = modulus[0]
        self.c1 = modulus[1] if self.deg == 2 else None

    def elem(self, a, b=0) -> "QuadAlgebraElem":
        if self.deg == 1:
            # w is the root -c0 itself
            a = padic(a, self.p) + padic(b, self.p) * (-self.c0) if b else padic(a, self.p)
            return QuadAlgebraElem(self, a, PadicNumber.zero(self.p, EXACT))
        return QuadAlgebraElem(self, padic(a, self.p), padic(b, self.p))

    def gen(self) -> "QuadAlgebraElem":
        return self.elem(0, 1)


class QuadAlgebraElem:
    __slots__ = ("alg", "a", "b")

    def __init__(self, alg: QuadAlgebra, a: PadicNumber, b: PadicNumber):
        self.alg, self.a, self.b = alg, a, b

    def _c(self, other):
        if isinstance(other, QuadAlgebraElem):
            return other
        return self.alg.elem(other)

    def __add__(self, other):
        o = self._c(other)
        return QuadAlgebraElem(self.alg, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadAlgebraElem(self.alg, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return self._c(other) - self

    def __mul__(self, other):
        o = self._c(other)
        if self.alg.deg == 1:
            return QuadAlgebraElem(self.alg, self.a * o.a, self.b)
        # w^2 = -c1 w - c0
        bb = self.b * o.b
        a = self.a * o.a - bb * self.alg.c0
        b = self.a * o.b + self.b * o.a - bb * self.alg.c1
        return QuadAlgebraElem(self.alg, a, b)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadAlgebraElem":
        if self.alg.deg == 1:
            return self
        # the other root is -c1 - w
        return QuadAlgebraElem(self.alg, self.a - self.b * self.alg.c1, -self.b)

    def trace(self) -> PadicNumber:
        if self.alg.deg == 1:
            return self.a
        return 2 * self.a - self.b * self.alg.c1

    def norm(self) -> PadicNumber:
        if self.alg.deg == 1:
            return self.a
        return self.a * self.a - self.a * self.b * self.alg.c1 + self.b * self.b * self.alg.c0

    def inverse(self) -> "QuadAlgebraElem":
        if self.alg.deg == 1:
            return QuadAlgebraElem(self.alg, self.a.inverse(), self.b)
        n = self.norm().inverse()
        c = self.conjugate()
        return QuadAlgebraElem(self.alg, c.a * n, c.b * n)

    def __truediv__(self, other):
        return self * self._c(other).inverse()

    def char_poly(self) -> list[PadicNumber]:
        """Monic polynomial (low degree first) whose roots are this element's values."""
        if self.alg.deg == 1:
            return [-self.a, padic(1, self.alg.p)]
        return [self.norm(), -self.trace(), padic(1, self.alg.p)]

    def evaluate_series(self, s: PadicSeries) -> "QuadAlgebraElem":
        """Horner evaluation of the truncated series (tail not included)."""
        acc = self.alg.elem(0)
        for c in reversed(s.coeffs):
            acc = acc * self + c
        return acc
