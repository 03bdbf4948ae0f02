"""Element-level tests for seminormality and weak normality, with certificates.

Swan's condition: b³ = c² forces a with a² = b, a³ = c.
Yanagihara's condition: c^p = b·d^p and p·c = d·e force a with a^p = b, p·a = e.
Manaresi's criterion: R ⊆ S is weakly normal in S iff R is the equalizer of
s ↦ s⊗1 and s ↦ 1⊗s into (S ⊗_R S)_red.

In a domain the candidate a is forced (a = c/b, resp. c/d in the fraction
field), so every check reduces to one membership c ∈ bR plus identities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from sympy import isprime

from .fpring import (
    FPRing,
    RingMap,
    TensorSquare,
    _monomials,
    module_member,
    subring_member,
    tensor_square,
)
from .groebner import Ideal, quotient, radical_member
from .poly import Poly
from .util import parallel_map


class PreconditionError(ValueError):
    pass


class AmbiguousSolveError(ValueError):
    """The divisor is a zero-divisor, so the forced candidate is not unique."""


@dataclass
class Certificate:
    kind: str
    ring: FPRing
    payload: dict
    phi: RingMap | None = None
    assumptions: tuple = ()
    tested: tuple = ()
    flags: dict = field(default_factory=dict)

    @property
    def is_violation(self) -> bool:
        return self.kind in ("SwanViolation", "YanagiharaViolation", "ManaresiWitness")

    def __getitem__(self, k):
        return self.payload[k]

    def verify(self) -> bool:
        """Re-check the defining identities from scratch."""
        return _VERIFY[self.kind](self)

    def key(self) -> tuple:
        return (self.kind,) + tuple((k, str(v)) for k, v in sorted(self.payload.items()))

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "ring": self.ring.presentation(),
            "payload": {k: (v if isinstance(v, int) else str(v)) for k, v in sorted(self.payload.items())},
            "assumptions": list(self.assumptions),
        }
        if self.phi is not None:
            out["map"] = {
                "source": self.phi.source.presentation(),
                "target": self.phi.target.presentation(),
                "images": {v: str(im) for v, im in zip(self.phi.source.vars, self.phi.images)},
            }
        if self.flags:
            out["flags"] = dict(sorted(self.flags.items()))
        if self.tested:
            out["tested"] = [str(t) for t in self.tested]
        return out

    def __str__(self):
        body = ", ".join(f"{k}={v}" for k, v in self.payload.items())
        return f"{self.kind}({body})"


# ---------------------------------------------------------------- helpers


def is_nonzerodivisor(R: FPRing, d: Poly) -> bool:
    """(0 :_R d) = 0, i.e. (I_R : d) = I_R."""
    d = R(d)
    if d.is_zero():
        return False
    q = quotient(R.defining, d)
    return all(R.is_zero(g) for g in q.gens)


def solve_multiple(R: FPRing, c: Poly, b: Poly) -> Poly | None:
    """Some a in R with a·b = c, or None when c ∉ bR."""
    ident = RingMap(R, R, R.ambient.gens(), check=False)
    sol = module_member(R(c), [R(b)], ident)
    return None if sol is None else sol[0]


# ---------------------------------------------------------------- Swan


def swan_check(R: FPRing, b, c) -> Certificate:
    b, c = R(b), R(c)
    if not R.eq(b**3, c**2):
        raise PreconditionError(f"b^3 != c^2 for b={b}, c={c}")
    assumptions = ("R is a domain (asserted)",) if R.asserted_domain else ()
    if b.is_zero():
        kind = "SwanWitness" if c.is_zero() else "SwanViolation"
        payload = {"a": R.ambient.zero(), "b": b, "c": c} if c.is_zero() else {"b": b, "c": c}
        return Certificate(kind, R, payload, assumptions=assumptions)
    if not is_nonzerodivisor(R, b):
        raise AmbiguousSolveError(f"{b} is a zero-divisor in {R}")
    a = solve_multiple(R, c, b)
    if a is not None and R.eq(a**2, b) and R.eq(a**3, c):
        return Certificate("SwanWitness", R, {"a": a, "b": b, "c": c}, assumptions=assumptions)
    return Certificate("SwanViolation", R, {"b": b, "c": c}, assumptions=assumptions)


def _verify_swan_witness(cert: Certificate) -> bool:
    R, a, b, c = cert.ring, cert["a"], cert["b"], cert["c"]
    return R.eq(a**2, b) and R.eq(a**3, c)


def _verify_swan_violation(cert: Certificate) -> bool:
    R, b, c = cert.ring, cert["b"], cert["c"]
    if not R.eq(b**3, c**2):
        return False
    if "a" in cert.payload:
        phi, a = cert.phi, cert["a"]
        S = phi.target
        return S.eq(a**2, phi(b)) and S.eq(a**3, phi(c)) and not subring_member(a, phi)[0]
    if b.is_zero():
        return not c.is_zero()
    a = solve_multiple(R, c, b)
    return a is None or not (R.eq(a**2, b) and R.eq(a**3, c))


# ---------------------------------------------------------------- Yanagihara


def yanagihara_check(R: FPRing, p: int, b, c, d, e) -> Certificate:
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime")
    b, c, d, e = R(b), R(c), R(d), R(e)
    if d.is_zero() or not is_nonzerodivisor(R, d):
        raise PreconditionError(f"d={d} must be a non-zerodivisor")
    if not R.eq(c**p, b * d**p):
        raise PreconditionError("c^p != b*d^p")
    if not R.eq(c * p, d * e):
        raise PreconditionError("p*c != d*e")
    payload = {"p": p, "b": b, "c": c, "d": d, "e": e}
    assumptions = ("R is a domain (asserted)",) if R.asserted_domain else ()
    a = solve_multiple(R, c, d)
    if a is not None and R.eq(a**p, b) and R.eq(a * p, e):
        return Certificate("YanagiharaWitness", R, {**payload, "a": a}, assumptions=assumptions)
    return Certificate("YanagiharaViolation", R, payload, assumptions=assumptions)


def _hyp_ok(cert) -> bool:
    R = cert.ring
    p, b, c, d, e = (cert[k] for k in "pbcde")
    return R.eq(c**p, b * d**p) and R.eq(c * p, d * e) and is_nonzerodivisor(R, d)


def _verify_yanagihara_witness(cert: Certificate) -> bool:
    R, a, p = cert.ring, cert["a"], cert["p"]
    return _hyp_ok(cert) and R.eq(a**p, cert["b"]) and R.eq(a * p, cert["e"]) and R.eq(cert["d"] * a, cert["c"])


def _verify_yanagihara_violation(cert: Certificate) -> bool:
    if not _hyp_ok(cert):
        return False
    R, p = cert.ring, cert["p"]
    if "a" in cert.payload:
        phi, a = cert.phi, cert["a"]
        S = phi.target
        return (
            S.eq(phi(cert["d"]) * a, phi(cert["c"]))
            and S.eq(a**p, phi(cert["b"]))
            and S.eq(a * p, phi(cert["e"]))
            and not subring_member(a, phi)[0]
        )
    a = solve_multiple(R, cert["c"], cert["d"])
    return a is None or not (R.eq(a**p, cert["b"]) and R.eq(a * p, cert["e"]))


# ---------------------------------------------------------------- Manaresi


def _tensor_of(phi: RingMap) -> TensorSquare:
    ts = getattr(phi, "_tensor", None)
    if ts is None:
        ts = phi._tensor = tensor_square(phi)
    return ts


def manaresi_witness(phi: RingMap, s) -> Certificate:
    """s witnesses failure of weak normality of R in S iff s⊗1 − 1⊗s is
    nilpotent in S ⊗_R S while s ∉ φ(R)."""
    S = phi.target
    s = S(s)
    ts = _tensor_of(phi)
    T = ts.ring
    diff = T.nf(ts.left(s) - ts.right(s))
    nilpotent = diff.is_zero() or radical_member(diff, T.defining)
    inside, pre = subring_member(s, phi)
    payload = {"s": s, "difference": diff}
    assumptions = ("R -> S is an injective integral extension (asserted)",)
    kind = "ManaresiWitness" if nilpotent and not inside else "NotAWitness"
    flags = {"nilpotent": nilpotent, "in_subring": inside}
    return Certificate(kind, phi.source, payload, phi=phi, assumptions=assumptions, flags=flags)


def _verify_manaresi(cert: Certificate) -> bool:
    phi, s = cert.phi, cert["s"]
    ts = tensor_square(phi)
    diff = ts.ring.nf(ts.left(s) - ts.right(s))
    nil = diff.is_zero() or radical_member(diff, ts.ring.defining)
    inside = subring_member(s, phi)[0]
    if cert.kind == "ManaresiWitness":
        return nil and not inside
    return not nil or inside


def default_probe_set(phi: RingMap, degree: int, module_gens: Sequence | None = None) -> list:
    S = phi.target
    gens = [S(m) for m in module_gens] if module_gens else [S.ambient.one()]
    out, seen = [], set()
    for mono in _monomials(S.ambient, degree):
        for m in gens:
            x = S(mono * m)
            if not x.is_zero() and x not in seen:
                seen.add(x)
                out.append(x)
    return out


def equalizer_probe(phi: RingMap, probe_set: Sequence | None = None, degree: int = 3, module_gens=None) -> Certificate:
    """First probe element violating the equalizer condition, else EqualizerPass.

    A pass only means no probed element is a witness; it proves nothing
    about the rest of S.
    """
    probes = [phi.target(x) for x in probe_set] if probe_set is not None else default_probe_set(phi, degree, module_gens)
    for s in probes:
        cert = manaresi_witness(phi, s)
        if cert.kind == "ManaresiWitness":
            return cert
    return Certificate(
        "EqualizerPass",
        phi.source,
        {},
        phi=phi,
        assumptions=("bounded probe; not a proof of weak normality",),
        tested=tuple(probes),
    )


def _verify_equalizer_pass(cert: Certificate) -> bool:
    return all(_verify_manaresi(Certificate("NotAWitness", cert.ring, {"s": s}, phi=cert.phi)) for s in cert.tested)


# ---------------------------------------------------------------- search


def _coefficient_values(height: int) -> list:
    out = []
    for c in range(1, height + 1):
        out += [c, -c]
    return out


def candidate_elements(phi: RingMap, degree: int, height: int) -> list:
    """Elements Σ c_m·m of S over monomials m of degree ≤ ``degree`` with
    0 < |c_m| ≤ ``height``, reduced and deduplicated.

    Order: fewer terms first, then monomial subsets in degree order, then
    coefficients 1, -1, 2, -2, ...; the order is fixed, so searches are
    reproducible and a larger bound only appends candidates per support size.
    """
    S = phi.target
    monos = _monomials(S.ambient, degree)
    values = _coefficient_values(height)
    out, seen = [], set()
    for k in range(1, len(monos) + 1):
        for support in itertools.combinations(monos, k):
            for coeffs in itertools.product(values, repeat=k):
                a = S.ambient.zero()
                for c, m in zip(coeffs, support):
                    a = a + m * c
                a = S(a)
                if a.is_zero() or a in seen:
                    continue
                seen.add(a)
                out.append(a)
    return out


def bounded_violation_search(
    R: FPRing,
    phi: RingMap,
    degree_bound: int,
    height_bound: int,
    kinds: Sequence[str] = ("swan", "yanagihara"),
    primes: Sequence[int] = (2, 3),
) -> list:
    """All Swan / Yanagihara violations parametrized by a ∈ S within the bounds.

    With φ the normalization, any violating a is integral over R and so lies
    in S; enumerating a ∈ S with a ∉ φ(R) and testing a², a³ (resp. a^p,
    p·a) for membership in φ(R) finds every violation whose a is inside the
    bounds.  An empty result is evidence, not proof.
    """
    if degree_bound < 0 or height_bound < 0:
        raise ValueError("bounds must be non-negative")
    if phi.source is not R:
        raise ValueError("phi must start at R")
    phi.graph()
    cands = candidate_elements(phi, degree_bound, height_bound)

    def check(a):
        found = []
        if subring_member(a, phi)[0]:
            return found
        if "swan" in kinds:
            ok2, b = subring_member(a**2, phi)
            if ok2:
                ok3, c = subring_member(a**3, phi)
                if ok3:
                    found.append(Certificate("SwanViolation", R, {"b": b, "c": c, "a": a}, phi=phi, assumptions=("phi is the normalization (caller's claim)",)))
        if "yanagihara" in kinds:
            for p in primes:
                okp, b = subring_member(a**p, phi)
                if not okp:
                    continue
                oke, e = subring_member(a * p, phi)
                if oke:
                    payload = {"p": p, "b": b, "c": e, "d": R(p), "e": e, "a": a}
                    found.append(Certificate("YanagiharaViolation", R, payload, phi=phi, assumptions=("phi is the normalization (caller's claim)",)))
        return found

    results = parallel_map(check, cands)
    return [c for batch in results for c in batch]


_VERIFY = {
    "SwanWitness": _verify_swan_witness,
    "SwanViolation": _verify_swan_violation,
    "YanagiharaWitness": _verify_yanagihara_witness,
    "YanagiharaViolation": _verify_yanagihara_violation,
    "ManaresiWitness": _verify_manaresi,
    "NotAWitness": _verify_manaresi,
    "EqualizerPass": _verify_equalizer_pass,
}
