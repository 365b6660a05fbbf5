"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are polynomials in zeta_N with Fraction coefficients, reduced
modulo the N-th cyclotomic polynomial, so equality tests are exact
coefficient comparisons.  Square roots of positive integers are constructed
from quadratic Gauss sums, which lets 1/sqrt(|D|) live inside the field
whenever N is chosen appropriately.

The fields appearing in practice are tiny (N | 24 for the built-in test
corpus), so schoolbook polynomial arithmetic is plenty.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

__all__ = ["Cyc", "cyclotomic_poly", "sqrt_as_cyclotomic", "root_order_for"]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    # x^n - 1 divided by the product of Phi_d for proper divisors d
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            phi_d = cyclotomic_poly(d)
            poly = _poly_divide_exact(poly, list(phi_d))
    return tuple(poly)


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1] != 0:
            raise ArithmeticError("non-exact polynomial division")
        q = c // den[-1]
        out[i] = q
        if q:
            for j, d in enumerate(den):
                num[i + j] -= q * d
    if any(num):
        raise ArithmeticError("nonzero remainder in cyclotomic division")
    return out


@lru_cache(maxsize=None)
def _power_basis(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Reduction of zeta^j, j = 0..2*deg-2, to the power basis mod Phi_n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    table = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(2 * deg - 1):
        table.append(tuple(cur))
        # multiply by zeta, reduce
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(table)


@lru_cache(maxsize=None)
def _zeta_power(n: int, k: int) -> tuple[Fraction, ...]:
    """zeta_n^k in the power basis (k arbitrary integer)."""
    k %= n
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    basis = _power_basis(n)
    if k < len(basis):
        return basis[k]
    cur = list(basis[-1])
    for _ in range(k - (len(basis) - 1)):
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(cur)


class Cyc:
    """An element of Q(zeta_N) in reduced power-basis form."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs):
        self.n = n
        deg = len(cyclotomic_poly(n)) - 1
        c = tuple(Fraction(x) for x in coeffs)
        if len(c) != deg:
            raise ValueError(f"expected {deg} coefficients for Q(zeta_{n})")
        self.c = c

    @staticmethod
    def zero(n: int) -> "Cyc":
        deg = len(cyclotomic_poly(n)) - 1
        return Cyc(n, (Fraction(0),) * deg)

    @staticmethod
    def from_rational(n: int, q) -> "Cyc":
        deg = len(cyclotomic_poly(n)) - 1
        return Cyc(n, (Fraction(q),) + (Fraction(0),) * (deg - 1))

    @staticmethod
    def one(n: int) -> "Cyc":
        return Cyc.from_rational(n, 1)

    @staticmethod
    def root(n: int, k: int) -> "Cyc":
        """zeta_n^k = e(k/n)."""
        return Cyc(n, _zeta_power(n, k))

    @staticmethod
    def e(q, n: int) -> "Cyc":
        """e(q) = exp(2*pi*i*q) for a rational q with denominator dividing n."""
        q = Fraction(q)
        if n % q.denominator != 0:
            raise ValueError(f"e({q}) does not lie in Q(zeta_{n})")
        return Cyc.root(n, (q.numerator * (n // q.denominator)) % n)

    def _check(self, other: "Cyc"):
        if self.n != other.n:
            raise ValueError("cyclotomic order mismatch")

    def __add__(self, other: "Cyc") -> "Cyc":
        self._check(other)
        return Cyc(self.n, tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other: "Cyc") -> "Cyc":
        self._check(other)
        return Cyc(self.n, tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self) -> "Cyc":
        return Cyc(self.n, tuple(-a for a in self.c))

    def scale(self, q) -> "Cyc":
        q = Fraction(q)
        return Cyc(self.n, tuple(q * a for a in self.c))

    def __mul__(self, other: "Cyc") -> "Cyc":
        self._check(other)
        deg = len(self.c)
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    if b:
                        prod[i + j] += a * b
        basis = _power_basis(self.n)
        out = [Fraction(0)] * deg
        for k, coeff in enumerate(prod):
            if coeff:
                for i, b in enumerate(basis[k]):
                    out[i] += coeff * b
        return Cyc(self.n, tuple(out))

    def conjugate(self) -> "Cyc":
        """Complex conjugation zeta -> zeta^(-1)."""
        deg = len(self.c)
        out = [Fraction(0)] * deg
        for j, a in enumerate(self.c):
            if a:
                for i, b in enumerate(_zeta_power(self.n, -j)):
                    out[i] += a * b
        return Cyc(self.n, tuple(out))

    @property
    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.n == other.n and self.c == other.c

    def __hash__(self):
        return hash((self.n, self.c))

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(float(a) * z ** i for i, a in enumerate(self.c) if a)

    def as_rational(self) -> Fraction | None:
        if any(self.c[1:]):
            return None
        return self.c[0]

    def __repr__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, a in enumerate(self.c):
            if not a:
                continue
            if i == 0:
                parts.append(str(a))
            elif i == 1:
                parts.append(f"{a}*z" if a != 1 else "z")
            else:
                parts.append(f"{a}*z^{i}" if a != 1 else f"z^{i}")
        return " + ".join(parts).replace("+ -", "- ")


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def sqrt_as_cyclotomic(d: int, n: int) -> Cyc:
    """The positive real square root of d >= 1 as an element of Q(zeta_n).

    Requires 8 | n and p | n for every odd prime p dividing the squarefree
    part of d.  The construction goes through quadratic Gauss sums and the
    result is verified exactly (its square equals d).
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    square = 1
    d0 = d
    f = 2
    while f * f <= d0:
        while d0 % (f * f) == 0:
            d0 //= f * f
            square *= f
        f += 1
    result = Cyc.from_rational(n, square)
    rem = d0
    p = 2
    while rem > 1:
        if rem % p == 0:
            rem //= p
            if p == 2:
                if n % 8:
                    raise ValueError("need 8 | n for sqrt(2)")
                g = Cyc.root(n, n // 8) + Cyc.root(n, -n // 8)
            else:
                if n % p:
                    raise ValueError(f"need {p} | n for sqrt({p})")
                g = Cyc.zero(n)
                for a in range(1, p):
                    s = _legendre(a, p)
                    term = Cyc.root(n, a * (n // p))
                    g = g + term if s == 1 else g - term
                if p % 4 == 3:
                    # g = i*sqrt(p); divide by i
                    g = g * Cyc.root(n, -(n // 4))
            result = result * g
        p += 1 if p == 2 else 2
    if result * result != Cyc.from_rational(n, d):
        raise ArithmeticError(f"sqrt({d}) construction failed in Q(zeta_{n})")
    if result.to_complex().real < 0:
        result = -result
    return result


def root_order_for(level: int, disc_order: int) -> int:
    """A cyclotomic order N containing e(1/level), e(1/8), and sqrt(disc_order)."""
    n = math.lcm(level, 8)
    d0 = disc_order
    f = 2
    while f * f <= d0:
        while d0 % (f * f) == 0:
            d0 //= f * f
        f += 1
    while d0 % 2 == 0:
        d0 //= 2  # sqrt(2) already lives in Q(zeta_8)
    p = 3
    while d0 > 1:
        while d0 % p == 0:
            d0 //= p
            n = math.lcm(n, p)
        p += 2
    return n
