"""Hyperplane sections x_α = Σ α_i x_i and the scan over P^d(F_q).

A point α is *good* when its section element avoids every declared bad
prime and the symbolic square P^(2) of every declared weakly normal spot.
The scan is exhaustive over P^d(F_q), lifting coordinates to their least
non-negative residues.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from sympy import isprime

from .fpring import FPRing, PrimeSpot
from .groebner import Ideal, ideal_power, saturate
from .poly import Poly
from .util import parallel_map


# ---------------------------------------------------------------- points


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^d over GF(p) (``lift=False``) or over a lift ring with
    distinguished prime p (``lift=True``), stored in canonical form."""

    coords: tuple
    p: int
    lift: bool = False

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if not any(coords if self.lift else [c % self.p for c in coords]):
            raise ValueError("the zero vector is not a projective point")
        object.__setattr__(self, "coords", _canonical_lift(coords) if self.lift else normalize_field(coords, self.p))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"


def normalize_field(coords: Sequence[int], p: int) -> tuple:
    """Scale so that the first nonzero coordinate is 1 (mod p)."""
    cs = [c % p for c in coords]
    lead = next((c for c in cs if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    inv = pow(lead, -1, p)
    return tuple(c * inv % p for c in cs)


def _canonical_lift(coords: Sequence[int]) -> tuple:
    from math import gcd

    g = 0
    for c in coords:
        g = gcd(g, c)
    cs = [c // g for c in coords]
    if next(c for c in cs if c) < 0:
        cs = [-c for c in cs]
    return tuple(cs)


def p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def normalize_lift(coords: Sequence[int], p: int) -> tuple:
    """Divide out the common p-power so that some coordinate is a unit mod p."""
    nz = [c for c in coords if c]
    if not nz:
        raise ValueError("the zero vector is not a projective point")
    v = min(p_valuation(c, p) for c in nz)
    return tuple(c // p**v for c in coords)


def specialize(alpha, p: int) -> ProjPoint:
    """Reduction P^n(ZZ_(p)) → P^n(F_p) of a (normalized) lift."""
    coords = alpha.coords if isinstance(alpha, ProjPoint) else tuple(alpha)
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    return ProjPoint(normalize_lift(coords, p), p)


def projective_points(d: int, q: int) -> list:
    """All points of P^d(F_q) in canonical form, ordered by position of the
    leading 1 then lexicographically."""
    if not isprime(q):
        raise ValueError("only prime fields are supported")
    out = []
    for lead in range(d + 1):
        for tail in itertools.product(range(q), repeat=d - lead):
            out.append(ProjPoint((0,) * lead + (1,) + tail, q))
    return out


# ---------------------------------------------------------------- sections


@dataclass
class SectionContext:
    R: FPRing
    xs: list
    bad_primes: list = field(default_factory=list)
    wn_spots: list = field(default_factory=list)
    maximal: list | None = None

    def __post_init__(self):
        self.xs = [self.R(x) for x in self.xs]
        if not self.xs or all(x.is_zero() for x in self.xs):
            raise ValueError("x_list must contain a nonzero element")
        if self.maximal is not None:
            m = self.R.ideal(self.maximal)
            for x in self.xs:
                if not m.contains(x):
                    raise ValueError(f"{x} is not in the declared maximal ideal")

    @property
    def d(self) -> int:
        return len(self.xs) - 1


def section_element(ctx: SectionContext, lift: Sequence[int]) -> Poly:
    if len(lift) != len(ctx.xs):
        raise ValueError(f"lift has {len(lift)} coordinates, context has {len(ctx.xs)}")
    R = ctx.R
    total = R.ambient.zero()
    for a, x in zip(lift, ctx.xs):
        if a:
            total = total + x * a
    return R.nf(total)


def same_principal_ideal(R: FPRing, f: Poly, g: Poly) -> bool:
    return R.contains(f, [g]) and R.contains(g, [f])


@dataclass
class SymbolicPower:
    ideal: Ideal
    n: int
    stabilized: bool
    steps: int
    contained: bool


def symbolic_power(P: PrimeSpot, n: int) -> SymbolicPower:
    """P^(n) = P^n R_P ∩ R, computed as (P^n + I_R : s^∞) for the spot's s.

    Valid when s avoids P but lies in every other associated prime of P^n;
    the containment P^(n) ⊆ P is checked and s rejected otherwise.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if P.sat is None:
        raise ValueError(f"prime spot {P} has no saturation element")
    R = P.ring
    Pn = ideal_power(Ideal(R.ambient, P.gens), n)
    base = R.ideal(Pn.gens)
    sat = saturate(base, P.sat)
    contained = all(P.contains(g) for g in sat.ideal.gens)
    if not contained:
        raise ValueError(f"saturation by {P.sat} leaves {P}: unsuitable saturation element")
    return SymbolicPower(sat.ideal, n, True, sat.steps, contained)


# ---------------------------------------------------------------- scan


@dataclass
class Verdict:
    point: ProjPoint
    lift: tuple
    element: Poly
    good: bool
    reasons: list
    regular_at: list


@dataclass
class ScanReport:
    q: int
    d: int
    total: int
    verdicts: list

    @property
    def good_count(self) -> int:
        return sum(v.good for v in self.verdicts)

    @property
    def failure_count(self) -> int:
        return self.total - self.good_count

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "d": self.d,
            "total": self.total,
            "good": self.good_count,
            "failed": self.failure_count,
            "verdicts": [
                {
                    "point": str(v.point),
                    "lift": list(v.lift),
                    "element": str(v.element),
                    "good": v.good,
                    "reasons": v.reasons,
                    "regular_section_at": v.regular_at,
                }
                for v in self.verdicts
            ],
        }


def _spot_label(P: PrimeSpot, i: int, prefix: str) -> str:
    return P.name or f"{prefix}{i}"


def judge(ctx: SectionContext, lift: Sequence[int], symbolic: list) -> tuple:
    """(good, reasons, regular spots) for one lift."""
    x = section_element(ctx, lift)
    reasons = []
    for i, P in enumerate(ctx.bad_primes):
        if P.contains(x):
            reasons.append(f"in bad prime {_spot_label(P, i, 'bad')}")
    for i, (P, Sp) in enumerate(zip(ctx.wn_spots, symbolic)):
        if Sp.ideal.contains(x):
            reasons.append(f"in symbolic square of {_spot_label(P, i, 'wn')}")
    regular = [
        _spot_label(P, i, "wn")
        for i, (P, Sp) in enumerate(zip(ctx.wn_spots, symbolic))
        if P.regular and not Sp.ideal.contains(x) and P.contains(x)
    ]
    return not reasons, reasons, regular, x


def bertini_scan(ctx: SectionContext, q: int) -> ScanReport:
    """Exhaustive scan of P^d(F_q) with least non-negative residue lifts."""
    for P in ctx.wn_spots:
        if P.sat is None:
            raise ValueError(f"wn spot {P} needs a saturation element")
    symbolic = [symbolic_power(P, 2) for P in ctx.wn_spots]
    for Sp in symbolic:
        Sp.ideal.gb()
    for P in ctx.bad_primes:
        P.ideal().gb()
    points = projective_points(ctx.d, q)

    def run(pt):
        lift = pt.coords
        good, reasons, regular, x = judge(ctx, lift, symbolic)
        return Verdict(pt, lift, x, good, reasons, regular)

    verdicts = parallel_map(run, points)
    return ScanReport(q, ctx.d, len(points), verdicts)
