import pytest
from hypothesis import given, strategies as st

from strategies import polys
from wnlab.coeffs import ZZ
from wnlab.criteria import (
    AmbiguousSolveError,
    Certificate,
    PreconditionError,
    bounded_violation_search,
    candidate_elements,
    equalizer_probe,
    manaresi_witness,
    swan_check,
    yanagihara_check,
)
from wnlab.fpring import FPRing, RingMap, subring_member, tensor_square
from wnlab.groebner import radical_member

A = FPRing.polynomial(ZZ, "X Y").quotient_ring(["Y^2 - 4*X"])
A.asserted_domain = True
S = FPRing.polynomial(ZZ, "T")
phi = RingMap(A, S, ["T^2", "2*T"])
Zt = FPRing.polynomial(ZZ, "t", asserted_domain=True)
cusp = FPRing.polynomial(ZZ, "s c").quotient_ring(["c^2 - s^3"])
nu = RingMap(cusp, FPRing.polynomial(ZZ, "t"), ["t^2", "t^3"])


# ---------------------------------------------------------------- Swan


def test_swan_examples():
    w = swan_check(Zt, "t^2", "t^3")
    assert w.kind == "SwanWitness" and w["a"] == Zt("t")
    v = swan_check(cusp, "s", "c")
    assert v.kind == "SwanViolation"
    z = swan_check(Zt, "0", "0")
    assert z.kind == "SwanWitness" and z["a"] == 0
    for cert in (w, v, z):
        assert cert.verify()


def test_swan_precondition():
    with pytest.raises(PreconditionError):
        swan_check(Zt, "t", "t")


def test_swan_rejects_zero_divisor():
    R = FPRing.polynomial(ZZ, "x y").quotient_ring(["x*y"])
    with pytest.raises(AmbiguousSolveError):
        swan_check(R, "x^2", "x^3")


@given(polys(Zt.ambient, max_terms=2, max_deg=2))
def test_polynomial_ring_always_has_swan_witness(a):
    cert = swan_check(Zt, a**2, a**3)
    assert cert.kind == "SwanWitness"
    assert cert.verify()


# ---------------------------------------------------------------- Yanagihara


def test_yanagihara_examples():
    v = yanagihara_check(A, 2, "X", "Y", "2", "Y")
    assert v.kind == "YanagiharaViolation" and v.verify()
    w = yanagihara_check(Zt, 2, "t^2", "2*t", "2", "2*t")
    assert w.kind == "YanagiharaWitness" and w["a"] == Zt("t") and w.verify()


@pytest.mark.parametrize(
    "args",
    [
        (2, "X", "Y", "0", "Y"),  # d = 0
        (4, "X", "Y", "2", "Y"),  # p not prime
        (2, "X", "Y", "2", "X"),  # p*c != d*e
        (2, "Y", "Y", "2", "Y"),  # c^p != b*d^p
    ],
)
def test_yanagihara_preconditions(args):
    with pytest.raises(PreconditionError):
        yanagihara_check(A, *args)


@given(polys(Zt.ambient, max_terms=2, max_deg=2), st.sampled_from([2, 3, 5]))
def test_polynomial_ring_always_has_yanagihara_witness(a, p):
    d = Zt(str(p))
    cert = yanagihara_check(Zt, p, a**p, a * p, d, a * p)
    assert cert.kind == "YanagiharaWitness"
    assert cert.verify()


# ---------------------------------------------------------------- Manaresi


def test_manaresi_examples():
    w = manaresi_witness(phi, "T")
    assert w.kind == "ManaresiWitness" and w.verify()
    # an element of the image: difference is 0 but s lies in R
    n = manaresi_witness(phi, "T^2 + 2*T")
    assert n.kind == "NotAWitness" and n.flags["in_subring"] and n.verify()
    ident = RingMap.identity(A)
    assert manaresi_witness(ident, "X").kind == "NotAWitness"


def test_manaresi_soundness_by_independent_rerun():
    w = manaresi_witness(phi, "3*T + T^2")
    assert w.kind == "ManaresiWitness"
    ts = tensor_square(phi)
    s = S("3*T + T^2")
    assert radical_member(ts.left(s) - ts.right(s), ts.ring.defining)
    assert not subring_member(s, phi)[0]


def test_equalizer_probe():
    found = equalizer_probe(phi, degree=3)
    assert found.kind == "ManaresiWitness" and found["s"] == S("T")
    passed = equalizer_probe(RingMap.identity(A), degree=2)
    assert passed.kind == "EqualizerPass" and passed.tested and passed.verify()


def test_equalizer_on_the_cone():
    R = FPRing.polynomial(ZZ, "x y u v w").quotient_ring(["x*v - y*u", "u^2 - x^2*w", "u*v - x*y*w", "v^2 - y^2*w"])
    N = FPRing.polynomial(ZZ, "X Y Z")
    nu = RingMap(R, N, ["X", "Y", "X*Z", "Y*Z", "Z^2"])
    assert manaresi_witness(nu, "Z").kind == "NotAWitness"
    cert = equalizer_probe(nu, ["Z"])
    assert cert.kind == "EqualizerPass" and cert.verify()


# ---------------------------------------------------------------- search


def test_search_on_the_parabola():
    assert bounded_violation_search(A, phi, 2, 2, kinds=("swan",)) == []
    found = bounded_violation_search(A, phi, 1, 1, kinds=("yanagihara",), primes=(2,))
    keys = [c.key() for c in found]
    assert ("YanagiharaViolation", ("a", "T"), ("b", "X"), ("c", "Y"), ("d", "2"), ("e", "Y"), ("p", "2")) in keys
    for cert in found:
        assert cert.verify()
        # consistency with the direct check on the same tuple
        direct = yanagihara_check(A, cert["p"], cert["b"], cert["c"], cert["d"], cert["e"])
        assert direct.kind == "YanagiharaViolation"


def test_search_on_the_cusp():
    found = bounded_violation_search(cusp, nu, 1, 1, kinds=("swan",))
    assert found and all(c.verify() for c in found)
    assert any(c["b"] == cusp("s") and c["c"] == cusp("c") for c in found)


def test_search_is_monotone_in_bounds():
    small = {c.key() for c in bounded_violation_search(A, phi, 1, 1, kinds=("yanagihara",), primes=(2,))}
    large = {c.key() for c in bounded_violation_search(A, phi, 2, 2, kinds=("yanagihara",), primes=(2,))}
    assert small <= large


def test_candidate_order_puts_simple_elements_first():
    cands = candidate_elements(phi, 2, 1)
    assert cands[:3] == [S("1"), S("-1"), S("T")]
    assert len(cands) == len(set(cands))


def test_certificate_json_is_self_contained():
    cert = yanagihara_check(A, 2, "X", "Y", "2", "Y")
    js = cert.to_json()
    assert js["ring"] == "ZZ[X,Y] / (Y^2 - 4*X)"
    assert js["payload"] == {"b": "X", "c": "Y", "d": "2", "e": "Y", "p": 2}
    w = manaresi_witness(phi, "T").to_json()
    assert w["map"]["images"] == {"X": "T^2", "Y": "2*T"}


def test_tampered_certificate_fails_verification():
    good = yanagihara_check(Zt, 2, "t^2", "2*t", "2", "2*t")
    bad = Certificate("YanagiharaWitness", Zt, {**good.payload, "a": Zt("t + 1")})
    assert not bad.verify()
    fake = Certificate("ManaresiWitness", A, {"s": S("T^2")}, phi=phi)
    assert not fake.verify()
