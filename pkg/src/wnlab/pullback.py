"""Fiber products R ×_{R/I} B and their failure of weak normality.

When R/I has characteristic p and B ⊆ R/I is generically purely
inseparable (every a has some a^{p^e} in B), the pullback R' ⊆ R is
seminormal but not weakly normal: any s ∈ R with s̄ ∉ B, s^{p^e} ∈ R' and
p·s ∈ R' witnesses this.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from sympy import isprime

from .criteria import Certificate, candidate_elements, manaresi_witness
from .fpring import FPRing, RingMap, _monomials, subring_member
from .groebner import kernel_of_map
from .poly import GREVLEX, Poly, PolyRing

log = logging.getLogger(__name__)


class GeneratorEscapesError(ValueError):
    """A chosen generator of R' does not reduce into B modulo I."""


class IncompleteGeneratorsError(ValueError):
    def __init__(self, element: Poly):
        super().__init__(f"{element} lies in the pullback but not in the generated subring")
        self.element = element


class Indeterminate(RuntimeError):
    """Nothing decisive found within the search bounds."""


@dataclass
class PullbackSpec:
    R: FPRing
    I: list
    B_gens: list
    p: int
    e_bound: int = 3

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        self.I = [self.R(g) for g in self.I]
        self.B_gens = [self.R(g) for g in self.B_gens]
        self.RI = self.R.quotient_ring(self.I)
        names = tuple(f"b{j}" for j in range(len(self.B_gens)))
        free = FPRing(PolyRing(self.R.base, names, GREVLEX))
        self.B_map = RingMap(free, self.RI, [self.RI(b) for b in self.B_gens], check=False)

    def in_B(self, f: Poly) -> bool:
        return subring_member(self.RI(f), self.B_map)[0]

    def reducedness_probe(self) -> list:
        """Advisory: p, generators of R/I and of B that are nilpotent but nonzero."""
        from .groebner import radical_member

        bad = []
        for x in [self.RI.ambient(self.p)] + list(self.RI.ambient.gens()) + self.B_gens:
            x = self.RI(x)
            if not x.is_zero() and radical_member(x, self.RI.defining):
                bad.append(x)
        return bad


@dataclass
class GpiResult:
    verdict: bool | None
    exponents: dict


def gpi_check(spec: PullbackSpec) -> GpiResult:
    """Least e ≤ e_bound with v^{p^e} ∈ B for each variable v of R/I.

    In characteristic p, p^e-th powers are additive, so the generator-level
    check covers all of R/I.  Exceeding e_bound is indeterminate (None).
    """
    table = {}
    for v, x in zip(spec.R.vars, spec.R.ambient.gens()):
        table[v] = None
        for e in range(spec.e_bound + 1):
            if spec.in_B(x ** (spec.p**e)):
                table[v] = e
                break
    verdict = True if all(e is not None for e in table.values()) else None
    return GpiResult(verdict, table)


@dataclass
class Pullback:
    spec: PullbackSpec
    ring: FPRing
    inclusion: RingMap
    gens: list
    transcript: list = field(default_factory=list)
    asserted: tuple = ("local", "mixed characteristic", "Noetherian")


def _probe_elements(spec: PullbackSpec, degree: int) -> list:
    R = spec.R
    out = []
    for mono in _monomials(R.ambient, degree):
        if mono.is_constant():
            continue
        if spec.in_B(mono):
            out.append(R(mono))
        for g in spec.I:
            x = R(g * mono)
            if not x.is_zero():
                out.append(x)
    return out


def _prune(R: FPRing, xs: list) -> list:
    """Drop each element already in the subring generated by the earlier kept ones."""
    kept: list = []
    for x in xs:
        if kept:
            free = FPRing(PolyRing(R.base, tuple(f"_z{i}" for i in range(len(kept))), GREVLEX))
            if subring_member(x, RingMap(free, R, kept, check=False))[0]:
                continue
        kept.append(x)
    return kept


def fiber_product(
    spec: PullbackSpec,
    gens: Sequence | None = None,
    names: Sequence[str] | None = None,
    probe_degree: int | None = None,
    auto_complete: bool | None = None,
    check_gpi: bool = True,
) -> Pullback:
    """Present R' = R ×_{R/I} B as a quotient of a polynomial ring.

    Generators default to lifts of B's generators plus I's generators times
    the variables of R; with ``auto_complete`` any probe element missing from
    the generated subring is appended as a new generator.
    """
    R = spec.R
    transcript = []
    if check_gpi:
        g = gpi_check(spec)
        transcript.append(f"gpi exponents: {g.exponents}")
        if g.verdict is None:
            raise Indeterminate(f"generic pure inseparability not established within e <= {spec.e_bound}")
    if gens is None:
        chosen = list(spec.B_gens) + [R(i * x) for i in spec.I for x in R.ambient.gens()]
        auto = True if auto_complete is None else auto_complete
    else:
        chosen = [R(x) for x in gens]
        auto = bool(auto_complete)
    seen, uniq = set(), []
    for x in chosen:
        if not x.is_constant() and x not in seen:
            seen.add(x)
            uniq.append(x)
    chosen = _prune(R, uniq) if gens is None else uniq
    for x in chosen:
        if not spec.in_B(x):
            raise GeneratorEscapesError(f"{x} does not reduce into B modulo I")
    degree = probe_degree if probe_degree is not None else max(2 * spec.p, max((x.degree() for x in chosen), default=1))
    while True:
        free = FPRing(PolyRing(R.base, tuple(f"_z{i}" for i in range(len(chosen))), GREVLEX))
        sub = RingMap(free, R, chosen, check=False)
        missing = next((x for x in _probe_elements(spec, degree) if not subring_member(x, sub)[0]), None)
        if missing is None:
            break
        if not auto:
            raise IncompleteGeneratorsError(missing)
        transcript.append(f"added generator {missing}")
        log.info("pullback: adding generator %s", missing)
        chosen.append(missing)
    transcript.append(f"generators: {[str(x) for x in chosen]} (probe degree {degree})")
    if names is None:
        names = [f"z{i}" for i in range(len(chosen))]
    if len(names) != len(chosen):
        raise ValueError(f"{len(names)} names for {len(chosen)} generators")
    src = PolyRing(R.base, tuple(names), GREVLEX)
    K = kernel_of_map(src, [Poly(R.ambient, x.as_dict(), normalize=False) for x in chosen], R.defining)
    Rp = FPRing(src, K.gb().basis, asserted_domain=True)
    incl = RingMap(Rp, R, chosen)
    transcript.append(f"presentation: {Rp}")
    return Pullback(spec, Rp, incl, chosen, transcript)


def certify_not_wn(Rp: FPRing, inclusion: RingMap, p: int, degree: int = 3, height: int = 1, e_max: int = 2) -> Certificate:
    """Search s ∈ R, s ∉ R', with s^{p^e} ∈ R' and p·s ∈ R'.

    e = 1 yields a Yanagihara violation of R' (with a = s); larger e is
    turned into a Manaresi witness.  Raises Indeterminate when the bounded
    search comes up empty.
    """
    inclusion.graph()
    for s in candidate_elements(inclusion, degree, height):
        if subring_member(s, inclusion)[0]:
            continue
        ok_e, e_pre = subring_member(s * p, inclusion)
        if not ok_e:
            continue
        for e in range(1, e_max + 1):
            ok_b, b_pre = subring_member(s ** (p**e), inclusion)
            if not ok_b:
                continue
            if e == 1:
                payload = {"p": p, "b": b_pre, "c": e_pre, "d": Rp(p), "e": e_pre, "a": s}
                return Certificate("YanagiharaViolation", Rp, payload, phi=inclusion, assumptions=("R' is a domain",))
            cert = manaresi_witness(inclusion, s)
            if cert.kind == "ManaresiWitness":
                return cert
    raise Indeterminate(f"no witness of degree <= {degree}, height <= {height}")
