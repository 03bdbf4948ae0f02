import itertools
import json
import random

import pytest
from hypothesis import given, strategies as st

from oracles import brute_scan, in_symbolic_square
from wnlab.bertini import (
    ProjPoint,
    SectionContext,
    bertini_scan,
    judge,
    normalize_lift,
    projective_points,
    same_principal_ideal,
    section_element,
    specialize,
    symbolic_power,
)
from wnlab.coeffs import QQ, ZZ, ZZmod
from wnlab.fpring import FPRing, PrimeSpot
from wnlab.groebner import Ideal, ideal_power, same_ideal

Zx = FPRing.polynomial(ZZ, "x")
A = FPRing.polynomial(ZZ, "X Y").quotient_ring(["Y^2 - 4*X"])
W = FPRing.polynomial(QQ, "x y z").quotient_ring(["x*y - z^2"])


# ---------------------------------------------------------------- points


def test_specialize_examples():
    assert specialize((1, 3), 2) == ProjPoint((1, 1), 2)
    assert specialize((2, 1), 2) == ProjPoint((0, 1), 2)
    assert specialize((2, 6), 2) == ProjPoint((1, 1), 2)
    with pytest.raises(ValueError):
        specialize((0, 0), 2)
    with pytest.raises(ValueError):
        specialize((1, 1), 4)


def test_point_normalization():
    assert ProjPoint((2, 4), 5).coords == (1, 2)
    assert ProjPoint((0, 3, 1), 5).coords == (0, 1, 2)
    assert ProjPoint((-2, 4), 0, lift=True).coords == (1, -2)
    assert ProjPoint((3, 1), 3) == ProjPoint((0, 1), 3)
    with pytest.raises(ValueError):
        ProjPoint((3, 6), 3)


def _proportional_mod(u, v, p):
    return all((a * d - b * c) % p == 0 for (a, b), (c, d) in itertools.combinations(zip(u, v), 2))


@given(
    st.lists(st.integers(-50, 50), min_size=2, max_size=4).filter(any),
    st.sampled_from([2, 3, 5, 7]),
    st.integers(-30, 30),
    st.integers(0, 3),
)
def test_specialize_is_lift_independent(v, p, u, k):
    if u % p == 0:
        u += 1
    base = specialize(v, p)
    assert specialize([c * u * p**k for c in v], p) == base
    # oracle: the reduction of the p-normalized lift is proportional to the output
    assert _proportional_mod(normalize_lift(v, p), base.coords, p)


@pytest.mark.parametrize("d,q", [(1, 2), (2, 3), (1, 5), (3, 2)])
def test_projective_point_count(d, q):
    pts = projective_points(d, q)
    assert len(pts) == sum(q**i for i in range(d + 1))
    assert len(set(pts)) == len(pts)


# ---------------------------------------------------------------- sections


def test_section_element_examples():
    ctx = SectionContext(Zx, ["2", "x"])
    assert section_element(ctx, (1, 1)) == Zx("2 + x")
    assert section_element(ctx, (1, 0)) == Zx("2")
    with pytest.raises(ValueError):
        section_element(ctx, (1, 0, 0))
    with pytest.raises(ValueError):
        SectionContext(Zx, ["0", "0"])
    with pytest.raises(ValueError):
        SectionContext(Zx, ["2", "x + 1"], maximal=["2", "x"])


def test_unit_rescaled_lifts_give_the_same_ideal():
    R4 = FPRing.polynomial(ZZmod(2, 2), "x")
    ctx = SectionContext(R4, ["2", "x"])
    f, g = section_element(ctx, (1, 3)), section_element(ctx, (3, 9))
    assert same_principal_ideal(R4, f, g)
    # over ZZ, 3 is not a unit and the ideals differ
    ctxz = SectionContext(Zx, ["2", "x"])
    assert not same_principal_ideal(Zx, section_element(ctxz, (1, 3)), section_element(ctxz, (3, 9)))


# ---------------------------------------------------------------- symbolic powers


def test_whitney_type_symbolic_square():
    P = PrimeSpot(W, ["x", "z"], sat="y")
    sp = symbolic_power(P, 2)
    x = W("x")
    assert sp.ideal.contains(x)
    assert not W.ideal(ideal_power(Ideal(W.ambient, P.gens), 2).gens).contains(x)
    assert in_symbolic_square(P, x)
    assert sp.contained and sp.stabilized


def test_regular_prime_symbolic_equals_ordinary():
    P = PrimeSpot(Zx, ["2", "x"], sat="x + 1")
    sp = symbolic_power(P, 2)
    assert same_ideal(sp.ideal, Zx.ideal(["4", "2*x", "x^2"]))
    assert sp.steps == 0


def test_first_symbolic_power_is_the_prime():
    P = PrimeSpot(W, ["x", "z"], sat="y")
    assert same_ideal(symbolic_power(P, 1).ideal, P.ideal())


def test_symbolic_power_needs_a_saturation_element():
    with pytest.raises(ValueError):
        symbolic_power(PrimeSpot(Zx, ["2", "x"]), 2)
    with pytest.raises(ValueError):
        symbolic_power(PrimeSpot(Zx, ["2", "x"], sat="x + 1"), 0)


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_symbolic_square_matches_brute_force(coeffs):
    P = PrimeSpot(W, ["x", "z"], sat="y")
    sp = symbolic_power(P, 2)
    f = W(f"{coeffs[0]}*x + {coeffs[1]}*z^2 + {coeffs[2]}*x*z")
    assert sp.ideal.contains(f) == in_symbolic_square(P, f)


# ---------------------------------------------------------------- scan


CONTEXTS = {
    "regular": (Zx, ["2", "x"], 2, [PrimeSpot(Zx, ["2", "x"], sat="x + 1", regular=True)], []),
    "blocked": (Zx, ["2", "x"], 2, [], [PrimeSpot(Zx, ["2", "x"])]),
    "regular_q3": (Zx, ["2", "x"], 3, [PrimeSpot(Zx, ["2", "x"], sat="x + 1")], []),
    "surface": (A, ["2", "X", "Y"], 3, [PrimeSpot(A, ["2", "Y"], sat="X")], []),
}


@pytest.mark.parametrize("name", list(CONTEXTS))
def test_scan_counts_match_brute_force(name):
    R, xs, q, wn, bad = CONTEXTS[name]
    rep = bertini_scan(SectionContext(R, xs, bad, wn), q)
    assert (rep.good_count, rep.total) == brute_scan(R, xs, q, wn, bad)
    assert rep.good_count + rep.failure_count == rep.total


def test_scan_examples():
    R, xs, q, wn, bad = CONTEXTS["regular"]
    rep = bertini_scan(SectionContext(R, xs, bad, wn), q)
    assert (rep.good_count, rep.total) == (3, 3)
    # each good section lies in the regular prime, so regularity of the section is implied
    assert all(v.regular_at == ["wn0"] or v.regular_at == [] for v in rep.verdicts)
    R, xs, q, wn, bad = CONTEXTS["blocked"]
    rep = bertini_scan(SectionContext(R, xs, bad, wn), q)
    assert (rep.good_count, rep.total) == (0, 3)
    assert all(v.reasons == ["in bad prime bad0"] for v in rep.verdicts)
    R, xs, q, wn, bad = CONTEXTS["surface"]
    rep = bertini_scan(SectionContext(R, xs, bad, wn), q)
    assert rep.total == 13 and rep.good_count >= 1


def test_scan_rejects_spots_without_saturation():
    with pytest.raises(ValueError):
        bertini_scan(SectionContext(Zx, ["2", "x"], wn_spots=[PrimeSpot(Zx, ["2", "x"])]), 2)


def test_good_points_reverify_individually():
    R, xs, q, wn, bad = CONTEXTS["surface"]
    ctx = SectionContext(R, xs, bad, wn)
    rep = bertini_scan(ctx, q)
    sym = [symbolic_power(P, 2) for P in wn]
    for v in rep.verdicts:
        assert judge(ctx, v.lift, sym)[0] == v.good


def test_verdicts_depend_only_on_the_lift():
    R, xs, _, wn, bad = CONTEXTS["regular"]
    ctx = SectionContext(R, xs, bad, wn)
    coarse = {v.lift: v.good for v in bertini_scan(ctx, 2).verdicts}
    fine = {v.lift: v.good for v in bertini_scan(ctx, 3).verdicts}
    for lift, good in coarse.items():
        assert fine[lift] == good


def test_scan_is_deterministic_across_threads(monkeypatch):
    R, xs, q, wn, bad = CONTEXTS["surface"]
    ctx = SectionContext(R, xs, bad, wn)
    monkeypatch.setenv("WN_THREADS", "1")
    one = json.dumps(bertini_scan(ctx, q).to_json(), sort_keys=True)
    monkeypatch.setenv("WN_THREADS", "8")
    eight = json.dumps(bertini_scan(ctx, q).to_json(), sort_keys=True)
    assert one == eight


def test_specialize_thousand_rescalings():
    rng = random.Random(11)
    for _ in range(1000):
        p = rng.choice([2, 3, 5, 7, 11])
        v = [rng.randint(-40, 40) for _ in range(rng.randint(2, 4))]
        if not any(v):
            continue
        u = rng.choice([c for c in range(-20, 21) if c % p])
        k = rng.randint(0, 3)
        assert specialize([c * u * p**k for c in v], p) == specialize(v, p)
