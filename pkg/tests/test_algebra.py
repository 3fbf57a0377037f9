import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orbitcalc.algebra import (
    ChowClass,
    QuantumContext,
    QuantumElement,
    UniPoly,
    f_adic_digits,
    f_adic_expand,
    integrate_point,
    mod_F_power,
    reduce_class,
    reduce_mod_F,
    star,
)
from orbitcalc.poly import AlgebraError, Poly, parse_poly
from orbitcalc.verify import random_input

from util import C, P, U, cls

R1 = QuantumContext.universal(1)
R2 = QuantumContext.universal(2)


# ---- coefficient polynomials ----------------------------------------------

def test_ring_ops_examples():
    v = ("z", "c1")
    assert P("z + c1", v) * P("z", v) == P("z^2 + c1*z", v)
    w = ("z", "c2")
    assert P("z^2 - c2^2", w).exact_div(P("z - c2", w)) == P("z + c2", w)
    h = ("H1", "H2")
    assert P("H1 + H2", h) * P("H1 - H2", h) == P("H1^2 - H2^2", h)


def test_inexact_division_raises():
    v = ("z",)
    with pytest.raises(AlgebraError):
        P("z^2 + 1", v).exact_div(P("z - 1", v))


def test_variable_mismatch_raises():
    with pytest.raises(AlgebraError):
        P("x", ("x",)) + P("y", ("y",))


def test_no_stored_zeros():
    v = ("x", "y")
    p = P("x + y", v) - P("x", v)
    assert p.terms == {(0, 1): 1}


def test_rational_coefficients_reduced():
    p = P("2/4*x", ("x",))
    assert p.terms[(1,)] == Fraction(1, 2)
    assert P("6/3", ("x",)).terms[(0,)] == 2


def test_poly_json_sorted_grlex():
    p = P("1 + x + y^2 + x*y", ("x", "y"))
    exps = [t["exp"] for t in p.to_json()["terms"]]
    assert exps == [[1, 1], [0, 2], [1, 0], [0, 0]]
    assert Poly.from_json(p.to_json()) == p


def test_text_form():
    p = P("x^2 - 3*x*y + 1/2", ("x", "y"))
    assert str(p) == "x^2 - 3*x*y + 1/2"


# ---- quantum ring -------------------------------------------------------

def test_reduce_mod_F_examples():
    assert reduce_mod_F(U("z^2", R1), R1) == U("-c1*z - c2", R1)
    assert reduce_mod_F(U("z", R1), R1) == U("z", R1)
    assert reduce_mod_F(U("z^3", R1), R1) == U("(c1^2 - c2)*z + c1*c2", R1)


def test_f_adic_examples():
    digits = f_adic_digits(U("z^3", R1), R1)
    assert digits == [U("(c1^2 - c2)*z + c1*c2", R1), U("z - c1", R1)]
    e = f_adic_expand(U("z^3", R1), R1)
    assert e.lift() == U("z^3", R1)
    assert e.extract(1, 0) == C("-c1", R1)
    assert f_adic_expand(U("3*z + c2", R1), R1).coeffs == (U("3*z + c2", R1),)
    sq = f_adic_expand(R1.F * R1.F, R1)
    assert sq.coeffs == (R1.zero(), R1.zero(), R1.one())


def test_mod_F_power():
    f = U("z^5 + c1*z^2", R1)
    g = mod_F_power(f, 2, R1)
    assert g.degree() < 4
    assert (f - g).divmod(R1.F_power(2))[1] == 0


def test_star_examples():
    z = QuantumElement(R1, [R1.z()])
    one = QuantumElement(R1, [R1.one()])
    assert star(one, z) == z
    assert star(z, z) == QuantumElement(R1, [U("-c1*z - c2", R1), R1.one()])
    assert star(star(z, z), z) == star(z, star(z, z))


def test_star_context_mismatch():
    with pytest.raises(AlgebraError):
        star(QuantumElement(R1, [R1.z()]), QuantumElement(R2, [R2.z()]))


def test_integrate_point_examples():
    assert integrate_point(U("z", R1), R1) == C("1", R1)
    assert integrate_point(U("z^2", R1), R1) == C("-c1", R1)
    assert integrate_point(R2.one(), R2) == 0


def test_reduce_class_examples():
    names = ("H1", "H2") + R1.coeff_vars
    assert reduce_class(parse_poly("H1^2", names), R1) == cls("-c1*H1 - c2", R1, 2)
    already = cls("H1*H2 + c1*H2", R1, 2)
    assert reduce_class(already.poly, R1) == already
    assert reduce_class(parse_poly("H1^2*H2", names), R1) == cls("(-c1*H1 - c2)*H2", R1, 2)


def test_chow_class_requires_reduced():
    with pytest.raises(AlgebraError):
        cls("H1^2", R1, 1)


def test_f_must_be_monic():
    with pytest.raises(AlgebraError):
        QuantumContext(1, UniPoly.from_poly(P("2*z^2", ("z",)), "z", ()), ())


def test_chow_class_json():
    c = cls("H1 + H2 + c1", R1, 2)
    j = c.to_json()
    assert j["r"] == 1 and j["n"] == 2 and j["coeff_vars"] == ["c1", "c2"]
    assert Poly.from_json(j) == c.poly


# ---- properties ---------------------------------------------------------

contexts = st.sampled_from([R1, R2, QuantumContext.universal(3), QuantumContext.split()])
seeds = st.integers(0, 10**6)


@given(contexts, seeds)
def test_reduction_difference_divisible(ctx, seed):
    f = random_input(random.Random(seed), ctx, max_degree=3 * ctx.r + 3)
    fbar = reduce_mod_F(f, ctx)
    assert fbar.degree() <= ctx.r
    (f - fbar).exact_div(ctx.F)


@given(contexts, seeds)
def test_f_adic_reconstructs(ctx, seed):
    f = random_input(random.Random(seed), ctx, max_degree=3 * ctx.r + 3)
    e = f_adic_expand(f, ctx)
    assert all(a.degree() <= ctx.r for a in e.coeffs)
    assert e.lift() == f


@given(contexts, seeds)
def test_star_commutative_associative(ctx, seed):
    rng = random.Random(seed)
    a, b, c = (f_adic_expand(random_input(rng, ctx, max_degree=2 * ctx.r + 2), ctx) for _ in range(3))
    assert star(a, b) == star(b, a)
    assert star(star(a, b), c) == star(a, star(b, c))


@given(contexts, seeds)
def test_star_at_hbar_zero(ctx, seed):
    rng = random.Random(seed)
    a, b = (f_adic_expand(random_input(rng, ctx, max_degree=ctx.r), ctx) for _ in range(2))
    assert star(a, b).truncate(1).lift() == reduce_mod_F(a.lift() * b.lift(), ctx)


@given(st.sampled_from([R1, R2]), seeds)
def test_reduce_class_homomorphism(ctx, seed):
    rng = random.Random(seed)
    names = ("H1", "H2") + ctx.coeff_vars

    def rand():
        f = random_input(rng, ctx, max_degree=ctx.r + 2)
        g = random_input(rng, ctx, max_degree=ctx.r + 2)
        return f.to_poly("z", ("z",) + ctx.coeff_vars).rename({"z": "H1"}).embed(names) * g.to_poly(
            "z", ("z",) + ctx.coeff_vars
        ).rename({"z": "H2"}).embed(names)

    p, q = rand(), rand()
    rp, rq = reduce_class(p, ctx, 2), reduce_class(q, ctx, 2)
    assert reduce_class(rp.poly, ctx, 2) == rp
    assert reduce_class(p + q, ctx, 2) == rp + rq
    assert reduce_class(p * q, ctx, 2) == reduce_class(rp.poly * rq.poly, ctx, 2)


@given(st.integers(1, 3), seeds)
def test_specializing_coefficients(r, seed):
    ctx = QuantumContext.universal(r)
    flat = QuantumContext.nonequivariant(r)
    f = random_input(random.Random(seed), ctx, max_degree=3 * r)
    f0 = UniPoly(flat.coeff_vars, [c.specialize_zero(ctx.coeff_vars).embed(()) for c in f.coeffs])
    lhs = reduce_mod_F(f, ctx)
    lhs0 = UniPoly((), [c.specialize_zero(ctx.coeff_vars).embed(()) for c in lhs.coeffs])
    assert lhs0 == reduce_mod_F(f0, flat)
