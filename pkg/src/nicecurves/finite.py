"""Prime fields F_p and the quadratic extension F_{p^2} = F_p[s]/(s^2 - n)."""

from __future__ import annotations

from fractions import Fraction


class Fp:
    """Residue class mod an odd prime p."""

    __slots__ = ("v", "p")

    def __init__(self, v, p: int):
        if isinstance(v, Fraction):
            if v.denominator % p == 0:
                raise ZeroDivisionError(f"{v} has no reduction mod {p}")
            v = v.numerator * pow(v.denominator, -1, p)
        self.v = int(v) % p
        self.p = p

    def _c(self, other):
        if isinstance(other, Fp):
            return other.v
        if isinstance(other, (int, Fraction)):
            return Fp(other, self.p).v
        return None

    def __add__(self, other):
        o = self._c(other)
        return NotImplemented if o is None else Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._c(other)
        return NotImplemented if o is None else Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._c(other)
        return NotImplemented if o is None else Fp(o - self.v, self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __mul__(self, other):
        o = self._c(other)
        return NotImplemented if o is None else Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.v == 0:
                raise ZeroDivisionError("inverse of 0 in F_p")
            return Fp(pow(self.v, n, self.p), self.p)
        return Fp(pow(self.v, n, self.p), self.p)

    def __truediv__(self, other):
        o = self._c(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by 0 in F_p")
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        return Fp(other, self.p) / self

    def __eq__(self, other):
        o = self._c(other)
        return NotImplemented if o is None else self.v == o

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def is_square(self) -> bool:
        return self.v == 0 or pow(self.v, (self.p - 1) // 2, self.p) == 1

    def sqrt(self) -> "Fp":
        """Some square root (Tonelli-Shanks); raises if none exists."""
        if self.v == 0:
            return self
        r = sqrt_mod(self.v, self.p)
        if r is None:
            raise ValueError(f"{self.v} is not a square mod {self.p}")
        return Fp(r, self.p)


def sqrt_mod(a: int, p: int):
    """Tonelli-Shanks square root of a mod odd prime p, or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def least_nonresidue(p: int) -> int:
    n = 2
    while pow(n, (p - 1) // 2, p) != p - 1:
        n += 1
    return n


class Fp2Table:
    """F_{p^2} elements a + b*s (s^2 = n, n the least non-residue) as int pairs.

    Only what point counting needs: evaluation of integer polynomials at
    every element and a quadratic-character lookup table.
    """

    def __init__(self, p: int):
        self.p = p
        self.n = least_nonresidue(p)
        q = p * p
        # square table: index a + b*p -> is square (including zero)
        squares = bytearray(q)
        for a in range(p):
            for b in range(p):
                sa = (a * a + self.n * b * b) % p
                sb = (2 * a * b) % p
                squares[sa + sb * p] = 1
        self.squares = squares

    def mul(self, x, y):
        p, n = self.p, self.n
        return ((x[0] * y[0] + n * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def eval_int_poly(self, coeffs, z):
        acc = (0, 0)
        for c in reversed(coeffs):
            acc = self.mul(acc, z)
            acc = ((acc[0] + c) % self.p, acc[1])
        return acc

    def chi(self, z) -> int:
        """Quadratic character: 0, 1 or -1."""
        if z == (0, 0):
            return 0
        return 1 if self.squares[z[0] + z[1] * self.p] else -1
