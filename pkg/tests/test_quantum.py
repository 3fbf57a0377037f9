import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from orbitcalc.algebra import ChowClass, QuantumContext, QuantumElement, star
from orbitcalc.classes import (
    class_from_duals,
    class_via_kernel,
    class_via_permutation_formula,
    diagonal_class,
    graph_closure_class,
    graph_closure_vars,
    monomial_duals,
    nonequivariant_class,
    nonequivariant_graph_closure,
    pair_class,
    serpar_classes,
    uniform_class_formula,
)
from orbitcalc.library import six_point_family, small_library
from orbitcalc.matroid import (
    QMatrix,
    RankDeficiencyError,
    general_matrix,
    identity_matroid,
    matroid_from_matrix,
    parallel_connection,
    series_connection,
    uniform,
)
from orbitcalc.polytope import lattice_points
from orbitcalc.poly import AlgebraError, parse_poly
from orbitcalc.quantum import (
    DirectSum,
    Point,
    Relabel,
    Truncate,
    identity_expr,
    kronecker_dual,
    mhbar,
    mhbar_general,
    partition_expr,
    schubert_expr,
    uniform_expr,
)
from orbitcalc.verify import random_input

from util import C, U, cls

R1 = QuantumContext.universal(1)
R2 = QuantumContext.universal(2)
FAM = six_point_family()
LIB = small_library()
DIAG = matroid_from_matrix(general_matrix(1, 2))


def test_point_sends_input_to_reduction():
    assert mhbar(Point(), [U("z", R1)], R1) == QuantumElement(R1, [U("z", R1)])
    assert mhbar(Point(), [U("z^2", R1)], R1) == QuantumElement(R1, [U("-c1*z - c2", R1)])


def test_identity_two_examples():
    inputs = [U("z", R1), U("z", R1)]
    full = QuantumElement(R1, [U("-c1*z - c2", R1), R1.one()])
    assert mhbar(identity_matroid(2), inputs, R1) == full
    assert mhbar(identity_expr(2), inputs, R1, check=True) == full
    assert mhbar(Truncate(1, identity_expr(2)), inputs, R1) == full.truncate(1)


def test_mhbar_arity():
    with pytest.raises(AlgebraError):
        mhbar(uniform(2, 3), [R1.z()], R1)


def test_kronecker_examples():
    z = R1.z()
    assert kronecker_dual(DIAG, [z, z], R1) == C("-c1", R1)
    assert kronecker_dual(uniform(2, 3), [R1.one()] * 3, R1) == 0
    assert kronecker_dual(uniform(2, 3), [z] * 3, R1) == C("1", R1)


def test_class_from_duals_examples():
    assert class_from_duals(DIAG, R1) == cls("H1 + H2 + c1", R1, 2)
    assert class_from_duals(identity_matroid(2), R1).is_zero()
    assert class_from_duals(uniform(2, 3), R1).specialize_nonequivariant() == cls("1", QuantumContext.nonequivariant(1), 3)


def test_class_rank_deficient_matrix():
    q = QMatrix([[1, 2], [2, 4]])
    with pytest.raises(RankDeficiencyError):
        class_from_duals(q, R1)
    assert class_via_permutation_formula(q, R1).is_zero()
    assert nonequivariant_class(q, 1).is_zero()


def test_reference_engine_agrees():
    for m in (DIAG, uniform(2, 3), LIB["Sch(1,2;{1,2},[4])"], LIB["Part({1,2}|{3}|{4})"]):
        for ctx in (R1, R2):
            assert monomial_duals(m, ctx) == monomial_duals(m, ctx, engine="reference")


def test_permutation_formula_examples():
    for r in (1, 2, 3):
        ctx = QuantumContext.universal(r)
        assert class_via_permutation_formula(DIAG, ctx, verify=True) == diagonal_class(ctx)
    assert class_via_permutation_formula(uniform(3, 4), R2) == uniform_class_formula(3, 4, R2)


def test_kernel_route_matches():
    for m in (DIAG, uniform(2, 4), FAM["C"]):
        assert class_via_kernel(m, R1) == class_from_duals(m, R1)


def test_nonequivariant_examples():
    assert nonequivariant_class(uniform(2, 3), 1) == cls("1", QuantumContext.nonequivariant(1), 3)
    assert nonequivariant_class(DIAG, 1) == cls("H1 + H2", QuantumContext.nonequivariant(1), 2)
    c = nonequivariant_class(FAM["A"], 2)
    assert len(c.poly.terms) == len(lattice_points(FAM["A"], 2))


def test_graph_closure_of_a_point():
    point = uniform(1, 1)
    for r in (1, 2):
        ctx = QuantumContext.universal(r)
        g = graph_closure_class(point, ctx)
        diag = diagonal_class(ctx).poly.rename({"H2": "H"}).embed(graph_closure_vars(1, ctx))
        assert g == diag
    g0 = nonequivariant_graph_closure(point, 2)
    assert g0 == parse_poly("H1^2 + H1*H + H^2", g0.vars)


def test_graph_closure_specializes_to_enumeration():
    for m in (DIAG, uniform(2, 3), FAM["E"].truncate(2)):
        for r in (1, 2):
            ctx = QuantumContext.universal(r)
            g = graph_closure_class(m, ctx)
            flat = g.specialize_zero(ctx.coeff_vars)
            assert flat.embed(tuple(v for v in flat.vars if v not in ctx.coeff_vars)) == nonequivariant_graph_closure(m, r)


def test_serpar_diagonals():
    g1, g2 = general_matrix(1, 2, seed=1), general_matrix(1, 2, seed=2)
    p, s = serpar_classes(diagonal_class(R1), diagonal_class(R1), R1)
    assert p == class_from_duals(parallel_connection(g1, g2), R1)
    assert s == class_from_duals(series_connection(g1, g2), R1) == class_from_duals(uniform(2, 3), R1)


def test_serpar_with_full_space():
    """Gluing a single free point is like not gluing at all."""
    g = general_matrix(1, 2, seed=3)
    one = ChowClass(R1, 1, parse_poly("1", ("H1",) + R1.coeff_vars))
    p, s = serpar_classes(diagonal_class(R1), one, R1)
    assert p == diagonal_class(R1)
    assert s == class_from_duals(series_connection(g, QMatrix([[1]])), R1)


def test_six_point_relations():
    c = {k: class_from_duals(v, R2) for k, v in FAM.items()}
    assert c["A"] == c["D"] - c["C"] - c["E"]


# ---- properties ---------------------------------------------------------

small = sorted((k, v) for k, v in LIB.items() if v.n <= 4)
seeds = st.integers(0, 10**6)


@given(st.sampled_from(small), st.sampled_from([R1, R2]), seeds)
def test_relabel_equivariance(item, ctx, seed):
    _, m = item
    rng = random.Random(seed)
    perm = list(range(1, m.n + 1))
    rng.shuffle(perm)
    inputs = [random_input(rng, ctx) for _ in range(m.n)]
    permuted = [inputs[p - 1] for p in perm]
    assert mhbar(m.relabel(perm), permuted, ctx) == mhbar(m, inputs, ctx)
    assert mhbar(Relabel(perm, uniform_expr(m.d, m.n)), permuted, ctx) == mhbar(uniform(m.d, m.n), inputs, ctx)


@given(st.sampled_from(small), st.sampled_from(small), seeds)
def test_direct_sum_is_star(a, b, seed):
    (_, m1), (_, m2) = a, b
    if m1.n + m2.n > 6:
        return
    rng = random.Random(seed)
    f = [random_input(rng, R1) for _ in range(m1.n + m2.n)]
    lhs = mhbar(m1.direct_sum(m2), f, R1)
    assert lhs == star(mhbar(m1, f[: m1.n], R1), mhbar(m2, f[m1.n:], R1))


@given(st.sampled_from(small), st.integers(1, 3), seeds)
def test_truncation_is_hbar_cut(item, k, seed):
    _, m = item
    rng = random.Random(seed)
    f = [random_input(rng, R2) for _ in range(m.n)]
    assert mhbar(m.truncate(k), f, R2) == mhbar(m, f, R2).truncate(k)


@given(st.sampled_from(small), seeds)
def test_mhbar_coefficients_are_truncated_duals(item, seed):
    _, m = item
    rng = random.Random(seed)
    f = [random_input(rng, R1) for _ in range(m.n)]
    val = mhbar(m, f, R1)
    for k in range(m.d):
        t = m.truncate(k + 1)
        assert val.extract(k, R1.r) == pair_class(class_via_permutation_formula(t, R1), f, R1)


@given(st.sampled_from([uniform_expr(2, 4), schubert_expr([1, 2], [{1, 3}, range(1, 5)]),
                        partition_expr([[1, 4], [2], [3]]), DirectSum([uniform_expr(1, 2), Point()])]), seeds)
def test_structured_matches_general(expr, seed):
    rng = random.Random(seed)
    f = [random_input(rng, R2) for _ in range(expr.size)]
    assert mhbar(expr, f, R2) == mhbar_general(expr.evaluate(), f, R2)


def test_class_degree_bound_and_json():
    c = class_from_duals(FAM["B"], R2)
    assert all(e[i] <= 2 for e in c.poly.terms for i in range(6))
    j = c.to_json()
    assert j["n"] == 6 and j["r"] == 2


def test_duals_of_monomials_pair_with_class():
    m = FAM["C"].truncate(2)
    c = class_from_duals(m, R1)
    duals = monomial_duals(m, R1)
    for a in product(range(2), repeat=m.n):
        got = pair_class(c, [R1.z(k) for k in a], R1)
        assert got == duals.get(a, 0 * got)
