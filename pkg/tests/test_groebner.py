import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from strategies import change_coeffs, from_sympy, ideals, polys, random_ideal, to_sympy
from wnlab.coeffs import GF, QQ, ZZ, ZZmod
from wnlab.groebner import (
    Ideal,
    buchberger,
    certify,
    critical_pair_residues,
    dim_fiberwise,
    dim_over,
    eliminate,
    exact_divide,
    ideal_member,
    intersect,
    kernel_of_map,
    quotient,
    radical_member,
    same_ideal,
    saturate,
)
from wnlab.poly import LEX, polynomial_ring

ZXY = polynomial_ring(ZZ, "X Y")
Z3 = polynomial_ring(ZZ, "x y z")
Q3 = polynomial_ring(QQ, "x y z")


def I(ring, *gens):
    return Ideal(ring, [ring(g) for g in gens])


# ---------------------------------------------------------------- known bases


def test_single_generator():
    assert I(polynomial_ring(QQ, "x y"), "x").gb().basis == [polynomial_ring(QQ, "x y")("x")]


def test_euclidean_combination():
    Zx = polynomial_ring(ZZ, "x")
    G = I(Zx, "3*x - 6", "2*x - 4").gb()
    assert G.basis == [Zx("x - 2")]
    # oracle: x - 2 = (3x - 6) - (2x - 4), and both generators reduce to 0
    assert Zx("3*x - 6") - Zx("2*x - 4") == Zx("x - 2")
    assert G.contains(Zx("3*x - 6")) and G.contains(Zx("2*x - 4"))


def test_two_and_the_parabola():
    G = I(ZXY, "2", "Y^2 - 4*X").gb()
    assert G.basis == [ZXY("2"), ZXY("Y^2")]
    assert certify(G)
    assert G.normal_form(ZXY("Y")) == ZXY("Y")
    assert G.normal_form(ZXY("2*Y")) == 0
    assert G.normal_form(ZXY("Y^2 - 4*X")) == 0
    # 4X = 2 * 2X
    assert ideal_member(ZXY("4*X"), I(ZXY, "2", "Y^2 - 4*X"))
    assert not ideal_member(ZXY("Y"), I(ZXY, "2", "Y^2 - 4*X"))


def test_gpolynomial_is_needed():
    # 2x and 3y force xy = x*(3y) - y*(2x) into the strong basis
    R = polynomial_ring(ZZ, "x y")
    G = I(R, "2*x", "3*y").gb()
    assert R("x*y") in G.basis
    assert G.contains(R("x*y"))
    assert not G.contains(R("x"))


def test_zero_generators_are_pruned():
    R = polynomial_ring(ZZ, "x")
    assert I(R, "0", "x", "0").gens == [R("x")] or list(I(R, "0", "x", "0").gens) == [R("x")]
    assert I(R).gb().basis == []
    assert not I(R).gb().contains(R("1"))


def test_truncated_coefficients():
    R = polynomial_ring(ZZmod(2, 2), "x")
    G = I(R, "2*x").gb()
    assert G.contains(R("2*x^3")) and not G.contains(R("x"))
    assert G.contains(R("6*x"))  # 6 = 2 mod 4
    assert I(R, "x + 2", "2*x").gb().contains(R("4")) and not I(R, "2*x + 2").gb().is_unit()
    assert I(R, "x + 1", "x").gb().is_unit()


# ---------------------------------------------------------------- oracle: sympy over fields


def _sympy_basis(I, modulus=None):
    syms = sympy.symbols(" ".join(I.ring.vars))
    kw = {"modulus": modulus} if modulus else {"domain": "QQ"}
    order = "lex" if I.ring.order == LEX else "grevlex"
    G = sympy.groebner([to_sympy(g, syms) for g in I.gens], *syms, order=order, **kw)
    return sorted(str(change_coeffs(from_sympy(e, I.ring.with_coeffs(QQ)), I.ring) if modulus is None else _mod_poly(e, I.ring)) for e in G.exprs)


def _mod_poly(expr, ring):
    syms = sympy.symbols(" ".join(ring.vars))
    P = sympy.Poly(expr, *syms)
    from wnlab.poly import Poly

    return Poly(ring, {tuple(m): int(c) for m, c in P.terms()})


@given(ideals(Q3, max_terms=3, max_deg=3))
def test_reduced_basis_matches_sympy_over_QQ(I):
    mine = sorted(str(g) for g in I.gb().basis)
    assert mine == _sympy_basis(I)


@pytest.mark.parametrize("p", [2, 3, 7])
@given(data=st.data())
def test_reduced_basis_matches_sympy_over_GF(p, data):
    ring = polynomial_ring(GF(p), "x y z")
    I = data.draw(ideals(ring, max_terms=3, max_deg=3))
    mine = sorted(str(g) for g in I.gb().basis)
    assert mine == _sympy_basis(I, modulus=p)


@given(ideals(polynomial_ring(QQ, "x y z", LEX), max_gens=2, max_terms=3, max_deg=2))
def test_lex_basis_matches_sympy(I):
    assert sorted(str(g) for g in I.gb().basis) == _sympy_basis(I)


# ---------------------------------------------------------------- properties over ZZ


@given(ideals(Z3))
def test_strong_basis_certifies(I):
    G = I.gb()
    assert all(r.is_zero() for r in critical_pair_residues(G))
    for g in I.gens:
        assert G.contains(g)


@given(ideals(Z3), st.lists(polys(Z3, max_deg=2), min_size=3, max_size=3), polys(Z3))
def test_constructed_members_and_canonical_forms(I, cofactors, f):
    member = Z3.zero()
    for h, g in zip(cofactors, I.gens):
        member = member + h * g
    G = I.gb()
    assert G.contains(member)
    # normal forms are canonical: shifting by a member changes nothing
    assert G.normal_form(f + member) == G.normal_form(f)
    assert G.normal_form(G.normal_form(f)) == G.normal_form(f)


@given(ideals(Z3, max_gens=2), polys(Z3))
def test_membership_over_ZZ_implies_membership_over_fields(I, f):
    if not I.contains(f):
        return
    Q = polynomial_ring(QQ, Z3.vars)
    assert Ideal(Q, [change_coeffs(g, Q) for g in I.gens]).contains(change_coeffs(f, Q))
    for p in (2, 3, 5):
        F = polynomial_ring(GF(p), Z3.vars)
        assert Ideal(F, [change_coeffs(g, F) for g in I.gens]).contains(change_coeffs(f, F))


@given(ideals(Z3, max_gens=2))
def test_equal_ideals_give_identical_bases(I):
    shuffled = Ideal(Z3, list(reversed(I.gens)) + [I.gens[0] * 3 + (I.gens[-1] if len(I.gens) > 1 else 0)])
    assert shuffled.gb().basis == I.gb().basis


def test_random_batch_is_fast_and_certified():
    rng = random.Random(7)
    for _ in range(30):
        G = random_ideal(rng, Z3).gb()
        assert certify(G)


# ---------------------------------------------------------------- operations


def test_saturation_example():
    J = I(Q3, "x^2", "x*z", "z^2", "x*y - z^2")
    S = saturate(J, Q3("y"))
    assert S.ideal.contains(Q3("x"))
    assert same_ideal(S.ideal, I(Q3, "x", "z^2"))
    # oracle: x*y = z^2 + (x*y - z^2) lies in J, so one quotient step already contains x
    assert quotient(J, Q3("y")).contains(Q3("x"))


@given(ideals(Q3, max_gens=2, max_deg=2), polys(Q3, max_deg=1).filter(lambda f: not f.is_zero()))
def test_saturation_is_idempotent_and_grows(J, f):
    S = saturate(J, f)
    assert J.subset_of(S.ideal)
    again = saturate(S.ideal, f)
    assert same_ideal(again.ideal, S.ideal)
    # the quotient chain ascends
    for a, b in zip(S.chain, S.chain[1:]):
        assert a.subset_of(b)


@given(ideals(Q3, max_gens=2, max_deg=2), polys(Q3, max_deg=2).filter(lambda f: not f.is_zero()))
def test_quotient_times_f_lands_in_ideal(J, f):
    Qt = quotient(J, f)
    assert J.subset_of(Qt)
    for g in Qt.gb().basis:
        assert J.contains(g * f)


def test_quotient_example():
    assert same_ideal(quotient(I(Q3, "x^2"), Q3("x")), I(Q3, "x"))


@given(ideals(Q3, max_gens=2, max_deg=2), ideals(Q3, max_gens=2, max_deg=2))
def test_intersection_bounds(A, B):
    C = intersect(A, B)
    assert C.subset_of(A) and C.subset_of(B)
    assert (A * B).subset_of(C)


def test_eliminate_parabola():
    R = polynomial_ring(QQ, "t x y")
    E = eliminate(I(R, "x - t^2", "y - 2*t"), 1)
    assert E.ring.vars == ("x", "y")
    assert same_ideal(E, I(E.ring, "y^2 - 4*x"))


@given(ideals(Q3, max_gens=2, max_deg=2), ideals(Q3, max_gens=1, max_deg=2))
def test_eliminate_respects_containment(A, extra):
    B = A + extra
    EA, EB = eliminate(A, 1), eliminate(B, 1)
    assert EA.subset_of(EB)
    # and every eliminant lies in the original ideal
    for g in EA.gb().basis:
        assert A.contains(g.to_ring(Q3, [1, 2]))


def test_eliminate_matches_sympy_lex():
    # oracle: elements of a lex basis free of t generate the elimination ideal
    R = polynomial_ring(QQ, "t x y")
    J = I(R, "x - t^2 - t", "y - t^3")
    E = eliminate(J, 1)
    t, x, y = sympy.symbols("t x y")
    G = sympy.groebner([x - t**2 - t, y - t**3], t, x, y, order="lex")
    elim = [e for e in G.exprs if not e.has(t)]
    target = Ideal(E.ring, [from_sympy(e, E.ring) for e in elim])
    assert same_ideal(E, target)


def test_exact_division():
    R = polynomial_ring(ZZ, "x y")
    assert exact_divide(R("x^2 - y^2"), R("x - y")) == R("x + y")
    with pytest.raises(ValueError):
        exact_divide(R("x^2 + 1"), R("x - 1"))


# ---------------------------------------------------------------- radical, kernel, dimension


def test_radical_membership_examples():
    T = polynomial_ring(ZZ, "T1 T2")
    J = I(T, "T1^2 - T2^2", "2*T1 - 2*T2")
    assert radical_member(T("T1 - T2"), J)
    # oracle identity: (T1 - T2)^2 = -T2*(2T1 - 2T2) + (T1^2 - T2^2)
    assert T("T1 - T2") ** 2 == T("-T2") * T("2*T1 - 2*T2") + T("T1^2 - T2^2")
    assert not J.contains(T("T1 - T2"))
    Qxy = polynomial_ring(QQ, "x y")
    assert radical_member(Qxy("x"), I(Qxy, "x^2"))
    assert not radical_member(Qxy("y"), I(Qxy, "x"))


@given(ideals(Q3, max_gens=2, max_deg=2), polys(Q3, max_deg=1), st.integers(1, 3))
def test_powers_in_ideal_are_radical_members(J, f, k):
    if J.contains(f**k):
        assert radical_member(f, J)


def test_kernel_examples():
    T = polynomial_ring(ZZ, "T")
    K = kernel_of_map(ZXY, [T("T^2"), T("2*T")])
    assert same_ideal(K, I(ZXY, "Y^2 - 4*X"))
    assert kernel_of_map(ZXY, [T("T"), T("T^2")]).gb().basis == [ZXY("X^2 - Y")]
    assert kernel_of_map(ZXY, ZXY.gens()).gb().basis == []


def test_cone_kernel():
    R = polynomial_ring(ZZ, "x y u v w")
    S = polynomial_ring(ZZ, "X Y Z")
    images = [S(t) for t in ("X", "Y", "X*Z", "Y*Z", "Z^2")]
    K = kernel_of_map(R, images)
    listed = [R(t) for t in ("x*v - y*u", "u^2 - x^2*w", "u*v - x*y*w", "v^2 - y^2*w")]
    for f in listed:
        assert K.contains(f)
        assert f.subs(images, S) == 0
    for g in K.gb().basis:
        assert g.subs(images, S) == 0
    assert same_ideal(K, Ideal(R, listed))


@given(st.lists(polys(polynomial_ring(ZZ, "s t"), max_deg=2, max_terms=2), min_size=2, max_size=2))
def test_kernel_generators_map_to_zero(images):
    S = polynomial_ring(ZZ, "s t")
    K = kernel_of_map(ZXY, images)
    for g in K.gb().basis:
        assert g.subs(images, S) == 0


def test_fiber_dimensions():
    assert dim_fiberwise(I(ZXY, "Y^2 - 4*X"), [2]) == (1, {2: 1})
    Zx = polynomial_ring(ZZ, "x")
    assert dim_fiberwise(Ideal(Zx, []), [2, 3]) == (1, {2: 1, 3: 1})
    assert dim_fiberwise(I(Zx, "2"), [2, 3]) == (-1, {2: 1, 3: -1})
    assert dim_over(I(Q3, "x", "y"), QQ) == 1


def test_cone_conductor_has_codimension_two():
    R = polynomial_ring(ZZ, "x y u v w")
    K = [R(t) for t in ("x*v - y*u", "u^2 - x^2*w", "u*v - x*y*w", "v^2 - y^2*w")]
    d_ring = dim_fiberwise(Ideal(R, K), [2, 3])
    d_cond = dim_fiberwise(Ideal(R, K + [R(t) for t in "xyuv"]), [2, 3])
    assert d_ring == (3, {2: 3, 3: 3})
    assert d_ring[0] - d_cond[0] == 2
    assert all(d_ring[1][p] - d_cond[1][p] == 2 for p in (2, 3))
