"""Named matroids: the six-point plane configurations related by subdivisions,
and a test library of small matroids of every structured family."""

from __future__ import annotations

from fractions import Fraction as Q
from functools import lru_cache

from .algebra import f_adic_digits, mod_F_power, reduce_mod_F
from .matroid import (
    Matroid,
    QMatrix,
    general_matrix,
    matroid_from_matrix,
    parallel_connection,
    partition,
    schubert,
    series_connection,
    uniform,
)
from .poly import Poly


def _plane_points(points) -> QMatrix:
    return QMatrix.from_columns([(Q(x), Q(y), Q(1)) for x, y in points])


# Six points in the plane.  A has the three lines {1,2,4}, {1,3,6}, {4,5,6};
# B breaks {1,2,4}; D further breaks {1,3,6}.
POINTS_A = [(1, 1), (Q(1, 2), Q(1, 2)), (Q(3, 2), Q(1, 2)), (0, 0), (1, 0), (2, 0)]
POINTS_B = [(1, 1), (Q(1, 4), Q(3, 4)), (Q(3, 2), Q(1, 2)), (0, 0), (1, 0), (2, 0)]
POINTS_D = [(1, 1), (Q(1, 4), Q(3, 4)), (Q(7, 4), Q(3, 4)), (0, 0), (1, 0), (2, 0)]


def matrix_A() -> QMatrix:
    return _plane_points(POINTS_A)


def matrix_B() -> QMatrix:
    return _plane_points(POINTS_B)


def matrix_D() -> QMatrix:
    return _plane_points(POINTS_D)


@lru_cache(maxsize=None)
def six_point_family() -> dict:
    """The matroids A, B, C, D, E on six points.

    B = A + C across x1+x2+x4 = 2 and D = B + E across x1+x3+x6 = 2.
    """
    return {
        "A": matroid_from_matrix(matrix_A(), check=True),
        "B": matroid_from_matrix(matrix_B(), check=True),
        "C": schubert([1, 3], [{3, 5, 6}, range(1, 7)]),
        "D": matroid_from_matrix(matrix_D(), check=True),
        "E": schubert([1, 3], [{2, 4, 5}, range(1, 7)]),
    }


def _sp_builds() -> dict:
    g12 = general_matrix(1, 2, seed=11)
    g13 = general_matrix(1, 3, seed=12)
    g23 = general_matrix(2, 3, seed=13)
    g22 = general_matrix(2, 2, seed=14)
    out = {
        "S(g12,g12)": series_connection(g12, g12),
        "P(g12,g13)": parallel_connection(g12, g13),
        "S(g12,g13)": series_connection(g12, g13),
        "S(g23,g12)": series_connection(g23, g12),
        "P(g23,g12)": parallel_connection(g23, g12),
        "S(g23,g13)": series_connection(g23, g13),
        "P(g23,g23)": parallel_connection(g23, g23),
        "S(g22,g12)": series_connection(g22, g12),
    }
    return {k: matroid_from_matrix(v) for k, v in out.items()}


@lru_cache(maxsize=None)
def small_library() -> dict:
    """Matroids on at most five elements from every structured family."""
    lib = {}
    for n in range(2, 6):
        for d in range(1, n):
            lib[f"U({d},{n})"] = uniform(d, n)
    lib["Sch(1,2;{1,2},[3])"] = schubert([1, 2], [{1, 2}, range(1, 4)])
    lib["Sch(1,2;{1,2},[4])"] = schubert([1, 2], [{1, 2}, range(1, 5)])
    lib["Sch(1,2;{1,2,3},[4])"] = schubert([1, 2], [{1, 2, 3}, range(1, 5)])
    lib["Sch(2,3;{1,2,3},[5])"] = schubert([2, 3], [{1, 2, 3}, range(1, 6)])
    lib["Sch(1,3;{1,2},[5])"] = schubert([1, 3], [{1, 2}, range(1, 6)])
    lib["Sch(1,2,3;{1,2},{1,2,3,4},[5])"] = schubert([1, 2, 3], [{1, 2}, {1, 2, 3, 4}, range(1, 6)])
    lib["Sch(1,2;{2,4},[5])"] = schubert([1, 2], [{2, 4}, range(1, 6)])
    lib["Part({1,2}|{3}|{4})"] = partition([[1, 2], [3], [4]])
    lib["Part({1,2}|{3}|{4,5})"] = partition([[1, 2], [3], [4, 5]])
    lib["Part({1}|{2}|{3,4,5})"] = partition([[1], [2], [3, 4, 5]])
    lib["Part({1,3}|{2,4}|{5})"] = partition([[1, 3], [2, 4], [5]])
    lib.update(_sp_builds())
    fam = six_point_family()
    for name in ("A", "D"):
        for i in (1, 6):
            lib[f"{name}\\{i}"] = fam[name].delete(i)
    return lib


def connected_library() -> dict:
    return {k: v for k, v in small_library().items() if v.is_connected()}


def nested_reduction_dual(fs, ctx) -> Poly:
    """Dual of class(A) as D - C - E, each written as a nested reduction of products.

    ``fs`` are six polynomials in z over the coefficient ring of ``ctx``.
    """
    f = [None] + [reduce_mod_F(g, ctx) for g in fs]

    d_term = f[1] * f[2] * f[3] * mod_F_power(f[4] * f[5] * f[6], 2, ctx)
    c_term = f[1] * f[2] * f[4] * mod_F_power(f[3] * f[5] * f[6], 1, ctx)
    e_term = f[1] * f[3] * f[6] * mod_F_power(f[2] * f[4] * f[5], 1, ctx)
    return _digit(d_term, 2, ctx) - _digit(c_term, 2, ctx) - _digit(e_term, 2, ctx)


def _digit(g, k, ctx):
    digits = f_adic_digits(g, ctx)
    return digits[k].coeff(ctx.r) if len(digits) > k else Poly.zero(ctx.coeff_vars)
