"""Finitely presented algebras, ring maps and the module-level tools on them.

Complete local rings are modelled by finitely presented ZZ-algebras; every
identity checked here is an algebraic identity in the presentation.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .groebner import (
    GroebnerBasis,
    Ideal,
    buchberger,
    eliminate,
    ideal_sum,
    intersect,
    kernel_of_map,
    quotient,
    radical_member,
)
from .poly import GREVLEX, IncompatibleContextError, MonomialOrder, Poly, PolyRing, block, parse_poly


class IllDefinedMapError(ValueError):
    pass


class PresentationError(ValueError):
    pass


class FPRing:
    """``ambient / defining`` with a cached (strong) Gröbner basis.

    Elements are :class:`Poly` objects of ``ambient``; two elements are
    equal in the ring iff their normal forms agree.
    """

    def __init__(self, ambient: PolyRing, relations=(), name: str | None = None, asserted_domain: bool = False):
        self.ambient = ambient
        self.defining = Ideal(ambient, [ambient(r) if isinstance(r, str) else r for r in relations])
        self.gb: GroebnerBasis = self.defining.gb()
        self.name = name
        self.asserted_domain = asserted_domain
        if self.gb.is_unit():
            raise PresentationError(f"{self} is the zero ring")

    @classmethod
    def polynomial(cls, coeffs, vars, order: MonomialOrder = GREVLEX, **kw) -> "FPRing":
        from .poly import polynomial_ring

        return cls(polynomial_ring(coeffs, vars, order), (), **kw)

    @property
    def base(self):
        return self.ambient.coeffs

    @property
    def vars(self):
        return self.ambient.vars

    @property
    def order(self):
        return self.ambient.order

    def __call__(self, x) -> Poly:
        if isinstance(x, str):
            x = parse_poly(x, self.ambient)
        return self.nf(self.ambient(x) if not isinstance(x, Poly) else x)

    def nf(self, f: Poly) -> Poly:
        return self.gb.normal_form(f)

    def eq(self, f: Poly, g: Poly) -> bool:
        return self.nf(f - g).is_zero()

    def is_zero(self, f: Poly) -> bool:
        return self.nf(f).is_zero()

    def gen(self, i) -> Poly:
        return self.ambient.gen(i)

    def ideal(self, gens) -> Ideal:
        """Ideal of the ambient ring generated by ``gens`` plus the relations."""
        gens = [self.ambient(g) if isinstance(g, str) else g for g in gens]
        return Ideal(self.ambient, list(self.defining.gens) + gens)

    def contains(self, f: Poly, gens) -> bool:
        return self.ideal(gens).contains(f)

    def quotient_ring(self, gens, name: str | None = None) -> "FPRing":
        return FPRing(self.ambient, self.ideal(gens).gb().basis, name=name)

    def is_polynomial_ring(self) -> bool:
        return not self.defining.gens

    def presentation(self) -> str:
        s = f"{self.ambient}"
        if self.defining.gens:
            s += " / (" + ", ".join(str(g) for g in self.defining.gens) + ")"
        if self.order != GREVLEX:
            s += f" order {self.order}"
        return s

    def __str__(self):
        return self.presentation()

    def __repr__(self):
        return f"FPRing({self.presentation()!r})"


# ---------------------------------------------------------------- ring maps


class RingMap:
    """source -> target given by one target element per source variable."""

    def __init__(self, source: FPRing, target: FPRing, images: Sequence, name: str | None = None, check: bool = True):
        if source.base != target.base:
            raise IncompatibleContextError(f"base mismatch: {source.base} vs {target.base}")
        if len(images) != len(source.vars):
            raise IllDefinedMapError(f"{len(images)} images for {len(source.vars)} variables")
        self.source = source
        self.target = target
        self.images = [target(im) for im in images]
        self.name = name
        self._lock = threading.Lock()
        self._graph: GroebnerBasis | None = None
        self._graph_ring: PolyRing | None = None
        if check:
            for r in source.defining.gens:
                if not target.is_zero(self.apply_raw(r)):
                    raise IllDefinedMapError(f"relation {r} does not map to 0 in {target}")

    @classmethod
    def identity(cls, R: FPRing) -> "RingMap":
        return cls(R, R, R.ambient.gens())

    def apply_raw(self, f: Poly) -> Poly:
        if not f.ring.compatible(self.source.ambient):
            raise IncompatibleContextError(f"{f} is not in {self.source.ambient}")
        f = Poly(self.source.ambient, f.as_dict(), normalize=False)
        if not self.images:
            return self.target.ambient(f.constant_value())
        return f.subs(self.images, self.target.ambient)

    def __call__(self, f) -> Poly:
        if isinstance(f, str):
            f = parse_poly(f, self.source.ambient)
        return self.target.nf(self.apply_raw(f))

    def graph(self) -> tuple[PolyRing, GroebnerBasis]:
        """Graph ideal I_S + (y_j - φ(y_j)) in K[x, y], block order eliminating x."""
        with self._lock:
            if self._graph is None:
                T, S = self.target.ambient, self.source.ambient
                n = T.nvars
                names = [f"_x{i}" for i in range(n)] + [f"_y{j}" for j in range(S.nvars)]
                G = PolyRing(T.coeffs, tuple(names), block(n))
                xmap = list(range(n))
                gens = [g.to_ring(G, xmap) for g in self.target.defining.gens]
                gens += [g.to_ring(G, [n + j for j in range(S.nvars)]) for g in self.source.defining.gens]
                for j, img in enumerate(self.images):
                    gens.append(G.gen(n + j) - img.to_ring(G, xmap))
                self._graph_ring = G
                self._graph = Ideal(G, gens).gb()
            return self._graph_ring, self._graph

    def kernel(self) -> Ideal:
        return contraction(Ideal(self.target.ambient, []), self)

    def __str__(self):
        body = ", ".join(f"{v} -> {im}" for v, im in zip(self.source.vars, self.images))
        return "{ " + body + " }"

    def __repr__(self):
        return f"RingMap({self.source} -> {self.target} {self})"


def subring_member(f: Poly, phi: RingMap) -> tuple[bool, Poly | None]:
    """Is ``f`` in φ(R)?  Returns (True, preimage in R's ambient) or (False, None)."""
    G, gb = phi.graph()
    n = phi.target.ambient.nvars
    f = phi.target(f)
    r = gb.normal_form(f.to_ring(G, range(n)))
    for e in r.as_dict():
        if any(e[:n]):
            return False, None
    S = phi.source.ambient
    pre = Poly(S, {e[n:]: c for e, c in r.as_dict().items()})
    return True, phi.source.nf(pre)


def module_member(s: Poly, gens: Sequence[Poly], phi: RingMap) -> list[Poly] | None:
    """Coefficients r_j in R with s = Σ φ(r_j)·gens[j], or None.

    Uses the square-zero trick: ε·s lies in the image of
    R[w_1..w_k] -> S[ε]/(ε²), w_j ↦ ε·gens[j], iff s is in the R-span.
    """
    S, R = phi.target, phi.source
    k = len(gens)
    if k == 0:
        return [] if S.is_zero(s) else None
    eps = "_eps"
    Se_ring = PolyRing(S.base, S.vars + (eps,), GREVLEX)
    smap = list(range(S.ambient.nvars))
    e = Se_ring.gen(len(S.vars))
    Se = FPRing(Se_ring, [g.to_ring(Se_ring, smap) for g in S.defining.gens] + [e * e])
    ws = [f"_w{j}" for j in range(k)]
    Rw_ring = PolyRing(R.base, R.vars + tuple(ws), GREVLEX)
    Rw = FPRing(Rw_ring, [g.to_ring(Rw_ring, range(len(R.vars))) for g in R.defining.gens])
    images = [im.to_ring(Se_ring, smap) for im in phi.images]
    images += [e * S(g).to_ring(Se_ring, smap) for g in gens]
    psi = RingMap(Rw, Se, images, check=False)
    ok, pre = subring_member(e * S(s).to_ring(Se_ring, smap), psi)
    if not ok:
        return None
    m = len(R.vars)
    coeffs = []
    for j in range(k):
        t = {}
        for ex, c in pre.as_dict().items():
            w = ex[m:]
            if w[j] == 1 and sum(w) == 1:
                t[ex[:m]] = c
        coeffs.append(R.nf(Poly(R.ambient, t)))
    total = S.ambient.zero()
    for r, g in zip(coeffs, gens):
        total = total + phi(r) * S(g)
    if not S.eq(total, s):
        raise AssertionError("module_member produced an invalid representation")
    return coeffs


# ---------------------------------------------------------------- tensor square


@dataclass
class TensorSquare:
    ring: FPRing
    left: RingMap
    right: RingMap


def tensor_square(phi: RingMap) -> TensorSquare:
    """S ⊗_R S with its two inclusions s ↦ s⊗1 and s ↦ 1⊗s."""
    S = phi.target
    names = list(S.vars)
    suffix = "_1", "_2"
    while any(f"{v}{sfx}" in names for v in names for sfx in suffix):
        suffix = tuple("_" + s for s in suffix)
    vars_ = [f"{v}{suffix[0]}" for v in names] + [f"{v}{suffix[1]}" for v in names]
    T_ring = PolyRing(S.base, tuple(vars_), GREVLEX)
    n = len(names)
    m1, m2 = list(range(n)), list(range(n, 2 * n))
    rels = [g.to_ring(T_ring, m1) for g in S.defining.gens]
    rels += [g.to_ring(T_ring, m2) for g in S.defining.gens]
    rels += [im.to_ring(T_ring, m1) - im.to_ring(T_ring, m2) for im in phi.images]
    T = FPRing(T_ring, rels)
    left = RingMap(S, T, [T_ring.gen(i) for i in m1])
    right = RingMap(S, T, [T_ring.gen(i) for i in m2])
    return TensorSquare(T, left, right)


# ---------------------------------------------------------------- differentials


@dataclass
class PresentedModule:
    """Cokernel of a relation matrix: ``relations`` rows of length ``ngens``."""

    ambient: FPRing
    ngens: int
    relations: list
    labels: list = field(default_factory=list)

    def __post_init__(self):
        self.relations = [[self.ambient.nf(x) for x in row] for row in self.relations]
        for row in self.relations:
            if len(row) != self.ngens:
                raise ValueError("relation row length must equal the generator count")

    def is_zero(self) -> bool:
        return fitting_zero(self).is_unit()

    def __str__(self):
        labels = self.labels or [f"e{i}" for i in range(self.ngens)]
        rows = []
        for row in self.relations:
            parts = [f"({x})*{l}" for x, l in zip(row, labels) if not x.is_zero()]
            rows.append(" + ".join(parts) or "0")
        return f"<{', '.join(labels)} | " + "; ".join(rows) + ">"


def relative_differentials(phi: RingMap) -> PresentedModule:
    """Ω_{S/R} from the relative presentation S = R[x]/(I_S, φ(y_j) − y_j).

    Generators dx_i; relations are the Jacobian rows of the relations of S
    and of the images φ(y_j) (since dy_j = 0 relative to R).
    """
    S = phi.target
    rows = []
    for g in list(S.defining.gens) + list(phi.images):
        row = [S.nf(g.diff(i)) for i in range(len(S.vars))]
        if any(not x.is_zero() for x in row):
            rows.append(row)
    return PresentedModule(S, len(S.vars), rows, [f"d{v}" for v in S.vars])


def _det(M: list) -> Poly:
    n = len(M)
    if n == 1:
        return M[0][0]
    total = None
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * _det(minor)
        term = term if j % 2 == 0 else -term
        total = term if total is None else total + term
    return total if total is not None else M[0][0].ring.zero()


def fitting_zero(M: PresentedModule) -> Ideal:
    """Ideal of g×g minors of the relation matrix (plus the ring relations)."""
    R = M.ambient
    g = M.ngens
    if g == 0:
        return R.ideal([R.ambient.one()])
    minors = []
    for rows in itertools.combinations(M.relations, g):
        d = R.nf(_det([list(r) for r in rows]))
        if not d.is_zero():
            minors.append(d)
    return R.ideal(minors)


# ---------------------------------------------------------------- primes


class PrimeSpot:
    """A user-asserted prime ideal of an FPRing, with an optional saturation element."""

    def __init__(self, ring: FPRing, gens, sat: Poly | None = None, name: str | None = None, regular: bool = False, asserted_prime: bool = True):
        self.ring = ring
        self.gens = tuple(ring(g) for g in gens)
        self.sat = ring(sat) if sat is not None else None
        self.name = name
        self.regular = regular
        self.asserted_prime = asserted_prime
        self._ideal = ring.ideal(self.gens)
        if self._ideal.is_unit():
            raise ValueError(f"({', '.join(map(str, self.gens))}) is the unit ideal in {ring}")
        if self.sat is not None and self.contains(self.sat):
            raise ValueError(f"saturation element {self.sat} lies in the prime")

    def ideal(self) -> Ideal:
        return self._ideal

    def contains(self, f: Poly) -> bool:
        return self._ideal.contains(f)

    def probe_zero_divisors(self, degree: int = 2) -> list:
        """Advisory: products of small monomials lying in P with neither factor in P."""
        R = self.ring
        monos = _monomials(R.ambient, degree)
        bad = []
        outside = [m for m in monos if not self.contains(m)]
        for a, b in itertools.combinations_with_replacement(outside, 2):
            if self.contains(a * b):
                bad.append((a, b))
        return bad

    def __str__(self):
        s = "(" + ", ".join(str(g) for g in self.gens) + ")"
        if self.sat is not None:
            s += f" sat ({self.sat})"
        return s


def _monomials(ring: PolyRing, degree: int) -> list:
    out = []
    n = ring.nvars
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(ring.monomial(tuple(e)))
    return out


def contraction(J: Ideal, phi: RingMap) -> Ideal:
    """φ^{-1}(J) for an ideal J of the target's ambient ring (relations included)."""
    T = phi.target
    full = Ideal(T.ambient, list(T.defining.gens) + [Poly(T.ambient, g.as_dict(), normalize=False) for g in J.gens])
    return kernel_of_map(phi.source.ambient, [Poly(T.ambient, im.as_dict(), normalize=False) for im in phi.images], full)


def ramification_ideal(phi: RingMap) -> Ideal:
    """F₀(Ω_{S/R}) contracted to R: its zero locus is where R → S ramifies."""
    return contraction(fitting_zero(relative_differentials(phi)), phi)


def unramified_at(phi: RingMap, P: PrimeSpot) -> bool:
    """(Ω_{S/R})_P = 0, decided as F₀ ∩ R ⊄ P (valid for integral extensions)."""
    if not P.ring.ambient.compatible(phi.source.ambient):
        raise IncompatibleContextError("prime spot does not live in the source ring")
    F = ramification_ideal(phi)
    return any(not P.contains(g) for g in F.gens)


# ---------------------------------------------------------------- conductor


class SpanningError(ValueError):
    pass


@dataclass
class Conductor:
    ideal: Ideal
    exact: bool
    denominator: Poly
    assumptions: tuple


def verify_spanning(phi: RingMap, module_gens: Sequence[Poly]) -> bool:
    """R-span of module_gens is S: contains 1 and is stable under each S variable."""
    S = phi.target
    if module_member(S.ambient.one(), module_gens, phi) is None:
        return False
    for x in S.ambient.gens():
        for m in module_gens:
            if module_member(S(x * m), module_gens, phi) is None:
                return False
    return True


def find_denominator(phi: RingMap, module_gens: Sequence[Poly], degree: int = 2, height: int = 4) -> Poly | None:
    """First nonzero d (small monomial times small integer) with d·m ∈ φ(R) for all m."""
    R = phi.source
    for mono in _monomials(R.ambient, degree):
        for c in range(1, height + 1):
            d = R(mono * c)
            if d.is_zero():
                continue
            img = phi(d)
            if all(subring_member(img * phi.target(m), phi)[0] for m in module_gens):
                return d
    return None


def conductor(phi: RingMap, module_gens: Sequence, degree: int = 2, height: int = 4, check_spanning: bool = True) -> Conductor:
    """Conductor {r ∈ R : r·S ⊆ R} for S spanned over R by ``module_gens``.

    With d ≠ 0 in the conductor (searched over small candidates) and R, S
    domains: c = ∩_m (dR :_R d·m), each term an ideal quotient in R.
    """
    S, R = phi.target, phi.source
    gens = [S(m) for m in module_gens]
    if check_spanning and not verify_spanning(phi, gens):
        raise SpanningError(f"{[str(g) for g in gens]} do not span {S} over {R}")
    d = find_denominator(phi, gens, degree, height)
    if d is None:
        return Conductor(R.ideal([]), False, R.ambient.zero(), ("no denominator found within bounds",))
    base = R.ideal([d])
    result = None
    for m in gens:
        ok, pre = subring_member(phi(d) * m, phi)
        q = quotient(base, pre)
        result = q if result is None else intersect(result, q)
    result = Ideal(R.ambient, result.gb().basis)
    assumptions = ("R and S are domains", "module generators span S over R")
    exact = check_spanning
    for r in result.gens:
        for m in gens:
            if not subring_member(phi(r) * m, phi)[0]:
                raise AssertionError(f"conductor generator {r} fails on {m}")
    return Conductor(result, exact, d, assumptions)
