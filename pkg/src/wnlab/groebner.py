"""Gröbner bases over fields and strong Gröbner bases over ZZ and ZZ/p^k.

Over ZZ the completion uses S-polynomials (lcm of leading terms) and
G-polynomials (Bezout combination of the leading coefficients); reduction
replaces a coefficient c at a reducible monomial by ``c mod lc`` with the
remainder in ``[0, lc)``, which makes normal forms canonical once the basis
is strong.  ZZ/p^k is handled by working over ZZ with the constant p^k
adjoined to every ideal.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .coeffs import QQ, ZZ, CoeffRing, GF, gcdex
from .poly import (
    GREVLEX,
    IncompatibleContextError,
    MonomialOrder,
    Poly,
    PolyRing,
    block,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


class UnsupportedRingError(ValueError):
    pass


# ====================================================================== engine
#
# Engine polynomials are plain dicts {exp: coeff}; basis entries are
# (lm, lc, dict).  ``field`` is None for ZZ, else a normalizer for the field.


def _lead(p: dict, key):
    return max(p, key=key)


def _nf_zz(f: dict, G: Sequence, key, tail_only_below=None) -> dict:
    p = dict(f)
    r = {}
    while p:
        m = _lead(p, key)
        c = p[m]
        changed = True
        while changed and c:
            changed = False
            for lm, lc, g in G:
                if mono_divides(lm, m):
                    q = c // lc
                    if q:
                        shift = mono_div(m, lm)
                        for e, d in g.items():
                            e2 = mono_mul(e, shift)
                            v = p.get(e2, 0) - q * d
                            if v:
                                p[e2] = v
                            else:
                                p.pop(e2, None)
                        c = p.get(m, 0)
                        changed = True
                        if not c:
                            break
        if c:
            r[m] = c
            del p[m]
    return r


def _nf_field(f: dict, G: Sequence, key, norm) -> dict:
    p = dict(f)
    r = {}
    while p:
        m = _lead(p, key)
        c = p[m]
        for lm, lc, g in G:
            if mono_divides(lm, m):
                shift = mono_div(m, lm)
                for e, d in g.items():
                    e2 = mono_mul(e, shift)
                    v = norm(p.get(e2, 0) - c * d)
                    if v:
                        p[e2] = v
                    else:
                        p.pop(e2, None)
                break
        else:
            r[m] = c
            del p[m]
    return r


def _entry(p: dict, key):
    m = _lead(p, key)
    return (m, p[m], p)


def _combine(a, f, sa, b, g, sb, norm=None) -> dict:
    """a*x^sa*f + b*x^sb*g."""
    out: dict = {}
    for e, c in f.items():
        e2 = mono_mul(e, sa)
        out[e2] = out.get(e2, 0) + a * c
    for e, c in g.items():
        e2 = mono_mul(e, sb)
        out[e2] = out.get(e2, 0) + b * c
    if norm:
        return {e: v for e, v in ((e, norm(c)) for e, c in out.items()) if v}
    return {e: c for e, c in out.items() if c}


def _spoly(fi, fj, norm):
    lmi, lci, pi = fi
    lmj, lcj, pj = fj
    m = mono_lcm(lmi, lmj)
    if norm is None:
        l = lci * lcj // gcdex(lci, lcj)[0]
        return _combine(l // lci, pi, mono_div(m, lmi), -(l // lcj), pj, mono_div(m, lmj))
    # field basis entries are monic
    return _combine(1, pi, mono_div(m, lmi), -1, pj, mono_div(m, lmj), norm)


def _gpoly(fi, fj):
    lmi, lci, pi = fi
    lmj, lcj, pj = fj
    if lcj % lci == 0 or lci % lcj == 0:
        return None
    m = mono_lcm(lmi, lmj)
    _, u, v = gcdex(lci, lcj)
    return _combine(u, pi, mono_div(m, lmi), v, pj, mono_div(m, lmj))


def _normalize_zz(p: dict, key):
    m = _lead(p, key)
    if p[m] < 0:
        p = {e: -c for e, c in p.items()}
    return _entry(p, key)


def _normalize_field(p: dict, key, inv, norm):
    m = _lead(p, key)
    c = p[m]
    if c != 1:
        ic = inv(c)
        p = {e: norm(d * ic) for e, d in p.items()}
    return (m, 1, p)


def _buchberger(F: Iterable[dict], key, norm=None, inv=None) -> list:
    """Return the reduced (strong) basis entries for the ideal spanned by F."""
    zz = norm is None

    def nf(p, G):
        return _nf_zz(p, G, key) if zz else _nf_field(p, G, key, norm)

    def normalize(p):
        return _normalize_zz(p, key) if zz else _normalize_field(p, key, inv, norm)

    G: list = []
    pairs: list = []
    counter = itertools.count()

    def add(p):
        h = normalize(p)
        j = len(G)
        G.append(h)
        for i in range(j):
            lm = mono_lcm(G[i][0], h[0])
            heapq.heappush(pairs, (key(lm), next(counter), i, j))

    for f in F:
        h = nf(f, G)
        if h:
            add(h)
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        fi, fj = G[i], G[j]
        coprime = all(not (a and b) for a, b in zip(fi[0], fj[0]))
        if zz:
            if not (coprime and gcdex(fi[1], fj[1])[0] == 1):
                h = nf(_spoly(fi, fj, None), G)
                if h:
                    add(h)
            gp = _gpoly(fi, fj)
            if gp:
                h = nf(gp, G)
                if h:
                    add(h)
        elif not coprime:
            h = nf(_spoly(fi, fj, norm), G)
            if h:
                add(h)
    return _reduce_basis(G, key, zz, nf)


def _reduce_basis(G: list, key, zz: bool, nf) -> list:
    ordered = sorted(G, key=lambda t: (key(t[0]), t[1] if zz else 0))
    kept: list = []
    for t in ordered:
        lm, lc = t[0], t[1]
        if any(mono_divides(h[0], lm) and (not zz or lc % h[1] == 0) for h in kept):
            continue
        kept.append(t)
    out = []
    for t in kept:
        lm, lc, p = t
        tail = {e: c for e, c in p.items() if e != lm}
        red = nf(tail, kept)
        red[lm] = lc
        out.append((lm, lc, red))
    return out


def _field_tools(K: CoeffRing):
    if K.kind == "GF":
        q = K.p
        return (lambda v: v % q), (lambda c: pow(c, -1, q))
    return (lambda v: v), (lambda c: Fraction(1) / c)


# ====================================================================== ideals


class Ideal:
    """Generators in a common polynomial ring; zero generators are pruned."""

    def __init__(self, ring: PolyRing, gens: Iterable = ()):
        self.ring = ring
        gs = []
        for g in gens:
            g = ring(g) if not isinstance(g, Poly) else g
            if not g.ring.compatible(ring):
                raise IncompatibleContextError(f"generator {g} lives in {g.ring}, not {ring}")
            if g.ring != ring:
                g = Poly(ring, g.as_dict(), normalize=False)
            if not g.is_zero():
                gs.append(g)
        self.gens = tuple(gs)
        self._gb = None

    def gb(self) -> "GroebnerBasis":
        if self._gb is None:
            self._gb = buchberger(self)
        return self._gb

    def contains(self, f) -> bool:
        return self.gb().contains(f)

    def is_unit(self) -> bool:
        return self.gb().is_unit()

    def __contains__(self, f):
        return self.contains(f)

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __pow__(self, n: int) -> "Ideal":
        return ideal_power(self, n)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring.compatible(other.ring) and self.gb().basis == other.gb().basis_in(self.ring)

    def __hash__(self):
        return hash((self.ring, tuple(self.gb().basis)))

    def subset_of(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def with_order(self, order: MonomialOrder) -> "Ideal":
        r = self.ring.with_order(order)
        return Ideal(r, [Poly(r, g.as_dict(), normalize=False) for g in self.gens])

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"

    def __repr__(self):
        return f"Ideal{self} in {self.ring}"


@dataclass
class GroebnerBasis:
    ideal: Ideal
    order: MonomialOrder
    basis: list
    strong: bool
    _entries: list = field(repr=False, default_factory=list)
    _lift: PolyRing | None = field(repr=False, default=None)

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring

    def basis_in(self, ring: PolyRing) -> list:
        return [Poly(ring, g.as_dict(), normalize=False) for g in self.basis] if ring != self.ring else self.basis

    def _engine_ring(self) -> PolyRing:
        return self._lift or self.ring

    def normal_form(self, f) -> Poly:
        f = self._check(f)
        R = self.ring
        key = R.key
        K = R.coeffs
        if K.kind in ("ZZ", "ZZmod"):
            r = _nf_zz(f.as_dict(), self._entries, key)
        else:
            r = _nf_field(f.as_dict(), self._entries, key, _field_tools(K)[0])
        return Poly(R, r)

    def contains(self, f) -> bool:
        return self.normal_form(f).is_zero()

    def is_unit(self) -> bool:
        return any(g.is_constant() and self.ring.coeffs.is_unit(g.constant_value()) for g in self.basis) or (
            self.ring.coeffs.kind == "ZZmod" and self.contains(self.ring.one())
        )

    def _check(self, f) -> Poly:
        if not isinstance(f, Poly):
            return self.ring(f)
        if f.ring == self.ring:
            return f
        if not f.ring.compatible(self.ring):
            raise IncompatibleContextError(f"{f.ring} vs {self.ring}")
        return Poly(self.ring, f.as_dict(), normalize=False)

    def leading_monomials(self) -> list:
        return [g.LM for g in self.basis]

    def __str__(self):
        return "{" + ", ".join(str(g) for g in self.basis) + "}"


def buchberger(I: Ideal, order: MonomialOrder | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of ``I`` (strong over ZZ and ZZ/p^k)."""
    if order is not None and order != I.ring.order:
        I = I.with_order(order)
    R = I.ring
    K = R.coeffs
    key = R.key
    if K.kind == "ZZ":
        entries = _buchberger((g.as_dict() for g in I.gens), key)
        basis = [Poly(R, p, normalize=False) for _, _, p in entries]
        return GroebnerBasis(I, R.order, basis, True, entries)
    if K.kind == "ZZmod":
        m = K.modulus
        gens = [g.as_dict() for g in I.gens] + [{R.zero_exp(): m}]
        entries = _buchberger(gens, key)
        basis = [g for g in (Poly(R, p) for _, _, p in entries) if not g.is_zero()]
        return GroebnerBasis(I, R.order, basis, True, entries, R.with_coeffs(ZZ))
    if K.is_field:
        norm, inv = _field_tools(K)
        entries = _buchberger((g.as_dict() for g in I.gens), key, norm, inv)
        basis = [Poly(R, p, normalize=False) for _, _, p in entries]
        return GroebnerBasis(I, R.order, basis, False, entries)
    raise UnsupportedRingError(f"no Gröbner bases over {K}")


def critical_pair_residues(G: GroebnerBasis) -> list:
    """Normal forms of all S- (and, over ZZ, G-) polynomials of basis pairs.

    All entries are zero exactly when G certifies itself as a (strong) basis.
    """
    R = G.ring
    key = R.key
    K = R.coeffs
    zz = K.kind in ("ZZ", "ZZmod")
    entries = G._entries
    norm = None if zz else _field_tools(K)[0]
    out = []
    for a, b in itertools.combinations(entries, 2):
        polys = [_spoly(a, b, norm)]
        if zz:
            gp = _gpoly(a, b)
            if gp:
                polys.append(gp)
        for p in polys:
            r = _nf_zz(p, entries, key) if zz else _nf_field(p, entries, key, norm)
            out.append(Poly(R.with_coeffs(ZZ) if K.kind == "ZZmod" else R, r))
    return out


def certify(G: GroebnerBasis) -> bool:
    return all(r.is_zero() for r in critical_pair_residues(G))


def normal_form(f: Poly, G: GroebnerBasis) -> Poly:
    return G.normal_form(f)


def ideal_member(f: Poly, I: Ideal, order: MonomialOrder | None = None) -> bool:
    G = I.gb() if order is None or order == I.ring.order else buchberger(I, order)
    return G.contains(f)


# ====================================================================== ops


def _check_same(I: Ideal, J: Ideal):
    if not I.ring.compatible(J.ring):
        raise IncompatibleContextError(f"{I.ring} vs {J.ring}")


def _as(I: Ideal, ring: PolyRing) -> list:
    return [Poly(ring, g.as_dict(), normalize=False) for g in I.gens]


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _check_same(I, J)
    return Ideal(I.ring, list(I.gens) + _as(J, I.ring))


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _check_same(I, J)
    return Ideal(I.ring, [f * g for f in I.gens for g in _as(J, I.ring)])


def ideal_power(I: Ideal, n: int) -> Ideal:
    if n < 0:
        raise ValueError("power must be non-negative")
    result = Ideal(I.ring, [I.ring.one()])
    for _ in range(n):
        result = Ideal(I.ring, ideal_product(result, I).gb().basis)
    return result


def _lift_zz(I: Ideal) -> Ideal:
    """ZZ/p^k ideal -> ZZ ideal containing p^k."""
    R = I.ring
    L = R.with_coeffs(ZZ)
    return Ideal(L, _as(I, L) + [L(R.coeffs.modulus)])


def _down(J: Ideal, ring: PolyRing) -> Ideal:
    return Ideal(ring, [Poly(ring, g.as_dict()) for g in J.gens])


def _extend(ring: PolyRing, new: Sequence[str], front: bool = True) -> tuple[PolyRing, list]:
    names = list(ring.vars)
    fresh = []
    for base in new:
        n = base
        while n in names or n in fresh:
            n = "_" + n
        fresh.append(n)
    allv = fresh + names if front else names + fresh
    order = block(len(fresh)) if front else ring.order
    R2 = PolyRing(ring.coeffs, tuple(allv), order)
    offset = len(fresh) if front else 0
    return R2, [offset + i for i in range(ring.nvars)]


def eliminate(I: Ideal, k: int, keep_ring: PolyRing | None = None) -> Ideal:
    """I ∩ K[x_k, ..., x_n]: drop the first ``k`` variables.

    The result lives in ``keep_ring`` (default: remaining variables, grevlex).
    """
    R = I.ring
    if R.coeffs.kind == "ZZmod":
        sub = eliminate(_lift_zz(I), k)
        target = keep_ring or PolyRing(R.coeffs, R.vars[k:], GREVLEX)
        return _down(sub, target)
    if not 0 <= k <= R.nvars:
        raise ValueError("bad elimination prefix")
    E = I.with_order(block(k)) if (R.order.kind != "block" or R.order.prefix != k) else I
    G = E.gb()
    target = keep_ring or PolyRing(R.coeffs, R.vars[k:], GREVLEX)
    if target.nvars != R.nvars - k:
        raise ValueError("keep_ring has the wrong number of variables")
    out = []
    for g in G.basis:
        if all(not any(e[:k]) for e in g.as_dict()):
            out.append(Poly(target, {e[k:]: c for e, c in g.as_dict().items()}, normalize=False))
    return Ideal(target, out)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    _check_same(I, J)
    R = I.ring
    if R.coeffs.kind == "ZZmod":
        return _down(intersect(_lift_zz(I), _lift_zz(Ideal(R, _as(J, R)))), R)
    R2, vm = _extend(R, ["t"])
    t = R2.gen(0)
    gens = [t * g.to_ring(R2, vm) for g in I.gens] + [(1 - t) * g.to_ring(R2, vm) for g in J.gens]
    return eliminate(Ideal(R2, gens), 1, keep_ring=R)


def exact_divide(f: Poly, g: Poly) -> Poly:
    """Return q with f = q*g exactly; ValueError if g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    R = f.ring
    K = R.coeffs
    key = R.key
    lm, lc = g.LM, g.LC
    gd = g.as_dict()
    p = f.as_dict()
    q: dict = {}
    while p:
        m = _lead(p, key)
        c = p[m]
        if not mono_divides(lm, m):
            raise ValueError(f"{g} does not divide {f}")
        try:
            a = K.divide(c, lc)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{g} does not divide {f}") from None
        s = mono_div(m, lm)
        q[s] = q.get(s, 0) + a
        for e, d in gd.items():
            e2 = mono_mul(e, s)
            v = K(p.get(e2, 0) - a * d)
            if v:
                p[e2] = v
            else:
                p.pop(e2, None)
    return Poly(R, q)


def quotient(I: Ideal, f: Poly) -> Ideal:
    """(I : f)."""
    R = I.ring
    f = R(f) if not isinstance(f, Poly) else Poly(R, f.as_dict(), normalize=False)
    if R.coeffs.kind == "ZZmod":
        L = R.with_coeffs(ZZ)
        return _down(quotient(_lift_zz(I), Poly(L, f.as_dict(), normalize=False)), R)
    if f.is_zero():
        return Ideal(R, [R.one()])
    inter = intersect(I, Ideal(R, [f]))
    return Ideal(R, [exact_divide(g, f) for g in inter.gens])


def same_ideal(I: Ideal, J: Ideal) -> bool:
    _check_same(I, J)
    return I.subset_of(J) and Ideal(I.ring, _as(J, I.ring)).subset_of(I)


@dataclass
class Saturation:
    ideal: Ideal
    steps: int
    chain: list


def saturate(I: Ideal, f: Poly, max_steps: int = 64) -> Saturation:
    """(I : f^∞) by iterated quotients until the chain stabilizes."""
    cur = Ideal(I.ring, I.gb().basis)
    chain = [cur]
    for step in range(1, max_steps + 1):
        nxt = quotient(cur, f)
        nxt = Ideal(I.ring, nxt.gb().basis)
        if nxt.gb().basis == cur.gb().basis:
            return Saturation(cur, step - 1, chain)
        chain.append(nxt)
        cur = nxt
    raise RuntimeError(f"saturation did not stabilize in {max_steps} steps")


def radical_member(f: Poly, I: Ideal) -> bool:
    """f ∈ √I  ⟺  1 ∈ I + (1 - t f) in R[t]."""
    R = I.ring
    if R.coeffs.kind == "ZZmod":
        I = _lift_zz(I)
        R = I.ring
        f = Poly(R, f.as_dict(), normalize=False)
    f = Poly(R, f.as_dict(), normalize=False) if isinstance(f, Poly) else R(f)
    R2, vm = _extend(R, ["t"], front=False)
    R2 = R2.with_order(GREVLEX)
    t = R2.gen(R2.nvars - 1)
    gens = [g.to_ring(R2, vm) for g in I.gens] + [1 - t * f.to_ring(R2, vm)]
    return Ideal(R2, gens).gb().is_unit()


def kernel_of_map(source: PolyRing, images: Sequence[Poly], target_ideal: Ideal | None = None) -> Ideal:
    """Kernel of source -> target/target_ideal, y_j ↦ images[j].

    Computed by eliminating the target variables from the graph ideal.
    """
    if len(images) != source.nvars:
        raise ValueError("need one image per source variable")
    if not images:
        return Ideal(source, [])
    T = images[0].ring
    if target_ideal is None:
        target_ideal = Ideal(T, [])
    if T.coeffs != source.coeffs:
        raise IncompatibleContextError(f"base mismatch: {source.coeffs} vs {T.coeffs}")
    names = [f"_x{i}" for i in range(T.nvars)] + [f"_y{j}" for j in range(source.nvars)]
    n = T.nvars
    G = PolyRing(T.coeffs, tuple(names), block(n))
    xmap = list(range(n))
    gens = [g.to_ring(G, xmap) for g in target_ideal.gens]
    for j, img in enumerate(images):
        gens.append(G.gen(n + j) - img.to_ring(G, xmap))
    return eliminate(Ideal(G, gens), n, keep_ring=source)


# ====================================================================== dimension


def monomial_ideal_dim(lms: Sequence, nvars: int) -> int:
    """Krull dimension of K[x]/(monomials): largest independent variable set."""
    if any(not any(e) for e in lms):
        return -1
    best = 0
    for size in range(nvars, 0, -1):
        for S in itertools.combinations(range(nvars), size):
            Sset = set(S)
            if all(any(x and i not in Sset for i, x in enumerate(e)) for e in lms):
                return size
    return best


def dim_over(I: Ideal, K: CoeffRing) -> int:
    R = I.ring.with_coeffs(K).with_order(GREVLEX)
    J = Ideal(R, [Poly(R, g.as_dict()) for g in I.gens])
    return monomial_ideal_dim(J.gb().leading_monomials(), R.nvars)


def dim_fiberwise(I: Ideal, primes: Iterable[int]) -> tuple[int, dict]:
    """(dim of the generic fiber over QQ, {p: dim of the fiber over GF(p)})."""
    if I.ring.coeffs.kind != "ZZ":
        raise UnsupportedRingError("fiberwise dimension needs base ZZ")
    return dim_over(I, QQ), {p: dim_over(I, GF(p)) for p in primes}
