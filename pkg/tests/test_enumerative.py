import pytest
from hypothesis import given, strategies as st

from orbitcalc.enumerative import (
    UV,
    grassmannian_degree,
    line_section_class_closed_form,
    line_section_class_via_pipeline,
    rank_two_expr,
    section_terms,
    tri_incident_report,
    two_to_one,
)
from orbitcalc.matroid import MatroidError, partition, uniform
from orbitcalc.poly import AlgebraError, Poly, parse_poly
from orbitcalc.quantum import partition_expr, uniform_expr


def uv(text):
    return parse_poly(text, UV)


def test_closed_form_examples():
    assert line_section_class_closed_form(5) == uv("360*u^2 + 780*u*v + 360*v^2")
    assert line_section_class_closed_form(4) == uv("48*u + 48*v")
    p = line_section_class_closed_form(8)
    assert p == p.rename({"u": "v", "v": "u"}).embed(UV)
    with pytest.raises(ValueError):
        line_section_class_closed_form(3)


def test_grassmannian_degree_examples():
    assert grassmannian_degree(line_section_class_closed_form(5), 2) == 420
    assert grassmannian_degree(line_section_class_closed_form(7), 3) == 77070
    # the Schur polynomial s_{(1,1)} = u v at r = 2 and s_{(2,2)} at r = 3
    assert grassmannian_degree(uv("u*v"), 2) == 1
    assert grassmannian_degree(uv("u^2*v^2"), 3) == 1


def test_grassmannian_degree_input_checks():
    with pytest.raises(AlgebraError):
        grassmannian_degree(uv("u*v"), 3)
    with pytest.raises(AlgebraError):
        grassmannian_degree(uv("u^2 + u*v"), 2)


@pytest.mark.parametrize("d", range(4, 9))
def test_pipeline_matches_closed_form(d):
    assert line_section_class_via_pipeline(d, uniform_expr(2, d)) == line_section_class_closed_form(d)


def test_pipeline_accepts_matroids():
    assert line_section_class_via_pipeline(5, uniform(2, 5)) == line_section_class_closed_form(5)
    flex = line_section_class_via_pipeline(5, partition([[1], [2], [3, 4, 5]]))
    assert grassmannian_degree(flex, 2) == 90


def test_pipeline_preconditions():
    with pytest.raises(MatroidError):
        line_section_class_via_pipeline(5, uniform(3, 5))
    with pytest.raises(MatroidError):
        line_section_class_via_pipeline(5, uniform(2, 4))


def test_section_terms_interpolate_values():
    """At H_i in {-u, -v} the 2^d terms give back L(sum H_i)."""
    d = 4
    u, v = Poly.var(UV, "u"), Poly.var(UV, "v")
    terms = section_terms(d)
    g = Poly.one(UV + ("x",))
    x = Poly.var(UV + ("x",), "x")
    for k in range(d + 1):
        g = g * (x + u.embed(g.vars) * k + v.embed(g.vars) * (d - k))
    l_poly = (g - g.subs({"x": Poly.zero(g.vars)})).exact_div(x)
    for choice in range(1 << d):
        at_u = {i + 1 for i in range(d) if choice >> i & 1}
        point = sum((-u if i in at_u else -v for i in range(1, d + 1)), Poly.zero(UV))
        expected = l_poly.subs({"x": point.embed(l_poly.vars)}).embed(UV)
        total = Poly.zero(UV)
        for t, coef in terms:
            factor = Poly.one(UV)
            for i in range(1, d + 1):
                h = -u if i in at_u else -v
                factor = factor * ((h + u) if i in t else (h + v))
            total = total + coef * factor
        assert total == expected * (u - v) ** d


def test_tri_incident_quintic():
    rep = tri_incident_report(5, 2)
    assert [row["degree"] for row in rep["per_i"]] == [90, 240, 90]
    assert rep["total"] == 420
    assert [row["multiplicities"] for row in rep["per_i"]] == [[1, 3, 1], [2, 2, 1], [3, 1, 1]]
    assert [row["degree"] // 2 for row in rep["per_i"]] == [45, 120, 45]


def test_tri_incident_septic():
    rep = tri_incident_report(7, 3)
    assert [row["degree"] for row in rep["per_i"]] == [7770, 17472, 26586, 17472, 7770]
    assert rep["total"] == 77070


def test_tri_incident_preconditions():
    with pytest.raises(ValueError):
        tri_incident_report(6, 2)


def test_two_to_one_loci():
    assert [i for i in range(1, 6) if two_to_one(7, i)] == [1, 3, 5]


def test_partition_classes_add_up():
    d = 5
    total = sum(
        (line_section_class_via_pipeline(d, partition_expr([list(range(1, i + 1)), [i + 1], list(range(i + 2, d + 1))]))
         for i in range(1, d - 1)),
        Poly.zero(UV),
    )
    assert total == line_section_class_closed_form(d)


@given(st.lists(st.integers(1, 3), min_size=5, max_size=5))
def test_rank_two_decomposition(labels):
    blocks = {}
    for i, b in enumerate(labels, start=1):
        blocks.setdefault(b, []).append(i)
    if len(blocks) < 2:
        return
    m = partition(list(blocks.values()), realize=False)
    assert rank_two_expr(m).evaluate() == m
    cls = line_section_class_via_pipeline(5, m)
    assert cls == cls.rename({"u": "v", "v": "u"}).embed(UV)
