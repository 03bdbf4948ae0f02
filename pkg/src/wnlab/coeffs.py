"""Coefficient rings: ZZ, QQ, GF(p) and ZZ/p^k with exact arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime


def gcdex(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


@dataclass(frozen=True)
class CoeffRing:
    """One of ZZ, QQ, GF(p), ZZ/p^k.

    Elements are Python ints, except over QQ where they are Fractions.
    Over GF(p) and ZZ/p^k the representative lies in [0, modulus).
    """

    kind: str
    p: int | None = None
    k: int = 1

    def __post_init__(self):
        if self.kind not in ("ZZ", "QQ", "GF", "ZZmod"):
            raise ValueError(f"unknown coefficient ring kind {self.kind!r}")
        if self.kind in ("GF", "ZZmod"):
            if self.p is None or not isprime(self.p):
                raise ValueError(f"{self.p} is not a prime")
            if self.k < 1:
                raise ValueError("exponent k must be positive")
            if self.kind == "GF" and self.k != 1:
                raise ValueError("GF(p) takes no exponent")

    @property
    def modulus(self) -> int | None:
        if self.kind == "GF":
            return self.p
        if self.kind == "ZZmod":
            return self.p**self.k
        return None

    @property
    def is_field(self) -> bool:
        return self.kind in ("QQ", "GF")

    @property
    def characteristic(self) -> int:
        return self.modulus or 0

    def __call__(self, c) -> int | Fraction:
        """Coerce an int (or Fraction over QQ) into canonical form."""
        if self.kind == "QQ":
            return Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator != 1:
                return self.divide(c.numerator, c.denominator)
            c = c.numerator
        m = self.modulus
        return c % m if m else int(c)

    def divide(self, a, b):
        """Exact quotient a/b in this ring, or ValueError if not representable."""
        if self.kind == "QQ":
            if b == 0:
                raise ZeroDivisionError("division by zero")
            return Fraction(a) / Fraction(b)
        a, b = self(a), self(b)
        if self.kind == "GF":
            if b == 0:
                raise ZeroDivisionError("division by zero")
            return a * pow(b, -1, self.p) % self.p
        if self.kind == "ZZ":
            if b == 0 or a % b:
                raise ValueError(f"{a}/{b} is not an integer")
            return a // b
        # ZZ/p^k: b = p^v * unit; a must be divisible by p^v
        if b == 0:
            raise ZeroDivisionError("division by zero")
        v = 0
        while b % self.p == 0:
            b //= self.p
            v += 1
        if a % self.p**v:
            raise ValueError(f"{a}/{b * self.p**v} is not representable in {self}")
        m = self.modulus
        return (a // self.p**v) * pow(b, -1, m) % m

    def is_unit(self, c) -> bool:
        c = self(c)
        if self.kind == "QQ":
            return c != 0
        if self.kind == "ZZ":
            return c in (1, -1)
        return c % self.p != 0

    def __str__(self) -> str:
        if self.kind in ("ZZ", "QQ"):
            return self.kind
        if self.kind == "GF":
            return f"GF({self.p})"
        return f"ZZ/{self.p}^{self.k}"


ZZ = CoeffRing("ZZ")
QQ = CoeffRing("QQ")


def GF(p: int) -> CoeffRing:
    return CoeffRing("GF", p)


def ZZmod(p: int, k: int) -> CoeffRing:
    return CoeffRing("ZZmod", p, k)
