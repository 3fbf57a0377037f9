"""Exact linear algebra over Z, Q and Q[t]."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .poly import Poly


def integer_rows(rows: Sequence[Sequence]) -> list:
    """Scale each row by the lcm of its denominators (rank and bases unchanged)."""
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        m = lcm(*(f.denominator for f in fr)) if fr else 1
        out.append([int(f * m) for f in fr])
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-free elimination."""
    m = [list(r) for r in integer_rows(rows)]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, nrows) if m[i][col]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk]
        for i in range(rk + 1, nrows):
            if m[i][col]:
                f = m[i][col]
                m[i] = [p[col] * a - f * b for a, b in zip(m[i], p)]
        rk += 1
        if rk == nrows:
            break
    return rk


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Bareiss determinant of a square integer matrix."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k]), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det_poly(m: Sequence[Sequence[Poly]]) -> Poly:
    """Bareiss determinant over a polynomial ring (exact divisions)."""
    a = [list(r) for r in m]
    n = len(a)
    vars = a[0][0].vars
    if n == 0:
        return Poly.one(vars)
    sign = 1
    prev = Poly.one(vars)
    for k in range(n - 1):
        if not a[k][k]:
            sw = next((i for i in range(k + 1, n) if a[i][k]), None)
            if sw is None:
                return Poly.zero(vars)
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * akk - aik * a[k][j]).exact_div(prev)
        prev = akk
    return a[n - 1][n - 1] * sign


def solve(a: Sequence[Sequence], b: Sequence):
    """Unique solution of a square system over Q, or None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        row = [x / p for x in m[col]]
        m[col] = row
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], row)]
    return [m[i][n] for i in range(n)]


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine span of a nonempty point set."""
    pts = [list(p) for p in points]
    if not pts:
        return -1
    base = pts[0]
    return rank([[x - y for x, y in zip(p, base)] for p in pts[1:]]) if len(pts) > 1 else 0
