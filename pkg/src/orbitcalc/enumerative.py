"""Lines meeting a degree-d hypersurface in prescribed contact patterns.

Everything here lives on P^1 with split Chern roots: F(z) = (z+u)(z+v).
Classes on the Grassmannian of lines are polynomials in u, v, and the
degree against a point class of G(1, r) is read off from two coefficients.
"""

from __future__ import annotations

from itertools import combinations

from .algebra import QuantumContext, UniPoly
from .classes import InvariantError
from .matroid import Matroid, MatroidError
from .poly import AlgebraError, Poly
from .quantum import (
    DirectSum,
    MatroidExpr,
    Truncate,
    kronecker_dual,
    partition_expr,
    points,
    relabel_to_order,
    uniform_expr,
)

UV = ("u", "v")


def _u():
    return Poly.var(UV, "u")


def _v():
    return Poly.var(UV, "v")


def line_section_class_closed_form(d: int) -> Poly:
    """d(d-1)(d-2) prod_{k=2}^{d-2} (k u + (d-k) v)."""
    if d < 4:
        raise ValueError("line sections need d >= 4")
    out = Poly.const(UV, d * (d - 1) * (d - 2))
    for k in range(2, d - 1):
        out = out * (_u() * k + _v() * (d - k))
    return out


def grassmannian_degree(p: Poly, r: int) -> int:
    """[u^{r-1} v^{r-1}] p - [u^{r-2} v^r] p for a symmetric form of degree 2r - 2."""
    if r < 1:
        raise ValueError("r must be positive")
    p = p.embed(UV)
    if any(sum(e) != 2 * r - 2 for e in p.terms):
        raise AlgebraError(f"expected a form of degree {2 * r - 2} in u, v")
    if p != p.rename({"u": "v", "v": "u"}).embed(UV):
        raise AlgebraError("class is not symmetric in u and v")
    lead = p.terms.get((r - 1, r - 1), 0)
    off = p.terms.get((r - 2, r), 0) if r >= 2 else 0
    return int(lead - off)


def rank_two_expr(m: Matroid) -> MatroidExpr:
    """A rank-2 matroid as a truncated sum of its parallel classes (loops give zero)."""
    if m.d != 2:
        raise MatroidError("expected a rank-2 matroid")
    loops = set(m.loops())
    classes: list = []
    for i in range(1, m.n + 1):
        if i in loops:
            continue
        for c in classes:
            if m.rank({c[0], i}) == 1:
                c.append(i)
                break
        else:
            classes.append([i])
    order = [x for c in classes for x in c]
    expr: MatroidExpr = Truncate(2, DirectSum([Truncate(1, DirectSum(points(len(c)))) for c in classes]))
    if loops:
        order += sorted(loops)
        expr = DirectSum([expr, Truncate(0, DirectSum(points(len(loops))))])
    expr = relabel_to_order(order, expr)
    if expr.evaluate() != m:
        raise InvariantError("rank-two decomposition does not reproduce the matroid")
    return expr


def section_terms(d: int) -> list:
    """Terms (T, coefficient) of the multilinear reduction of L(H_1 + .. + H_d).

    L(x) = (G(x) - G(0)) / x with G(x) = prod_{k=0}^d (x + k u + (d-k) v).
    The reduction modulo every (H_i+u)(H_i+v) equals
    sum_T coefficient * prod_{i in T} (H_i+u) prod_{i not in T} (H_i+v) / (u-v)^d.
    """
    u, v = _u(), _v()
    g0 = Poly.one(UV)
    for k in range(d + 1):
        g0 = g0 * (u * k + v * (d - k))
    out = []
    for size in range(d + 1):
        val = g0.exact_div(v * size + u * (d - size))
        if (d - size) % 2:
            val = -val
        for t in combinations(range(1, d + 1), size):
            out.append((frozenset(t), val))
    return out


def line_section_class_via_pipeline(d: int, m) -> Poly:
    """The same class recomputed from the orbit class of a rank-2 matroid on d points."""
    if isinstance(m, Matroid):
        if m.n != d or m.d != 2:
            raise MatroidError("expected a rank-2 matroid on d elements")
        expr = rank_two_expr(m)
    elif isinstance(m, MatroidExpr):
        expr = m
        if expr.size != d or expr.evaluate().d != 2:
            raise MatroidError("expected a rank-2 matroid on d elements")
    else:
        raise TypeError("expected a Matroid or MatroidExpr")
    if d < 4:
        raise ValueError("line sections need d >= 4")
    ctx = QuantumContext.split()
    plus_u = UniPoly(UV, [_u(), Poly.one(UV)])
    plus_v = UniPoly(UV, [_v(), Poly.one(UV)])
    total = Poly.zero(UV)
    cache: dict = {}
    for t, coef in section_terms(d):
        key = tuple(i in t for i in range(1, d + 1))
        val = cache.get(key)
        if val is None:
            val = cache[key] = kronecker_dual(expr, [plus_u if f else plus_v for f in key], ctx)
        total = total + coef * val
    return total.exact_div((_u() - _v()) ** d)


def tri_incident_partition(d: int, i: int) -> list:
    return [list(range(1, i + 1)), [i + 1], list(range(i + 2, d + 1))]


def tri_incident_report(d: int, r: int) -> dict:
    """Degrees of the three-contact line loci meeting a general point of G(1, r)."""
    if d != 2 * r + 1 or r < 2:
        raise ValueError("tri-incident report needs d = 2r + 1 with r >= 2")
    per_i = []
    for i in range(1, d - 1):
        blocks = [b for b in tri_incident_partition(d, i) if b]
        cls_i = line_section_class_via_pipeline(d, partition_expr(blocks))
        per_i.append({"i": i, "multiplicities": [i, d - 1 - i, 1], "degree": grassmannian_degree(cls_i, r)})
    total = sum(row["degree"] for row in per_i)
    uniform_total = grassmannian_degree(line_section_class_via_pipeline(d, uniform_expr(2, d)), r)
    if total != uniform_total:
        raise InvariantError(f"partition degrees sum to {total}, uniform degree is {uniform_total}")
    return {"d": d, "r": r, "per_i": per_i, "total": total}


def two_to_one(d: int, i: int) -> bool:
    """Whether the parametrization of the i-th locus is generically two-to-one."""
    return i in (1, (d - 1) // 2, d - 2)
