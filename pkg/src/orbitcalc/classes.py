"""Equivariant classes of matrix orbit closures in (P^r)^n.

Routes to the class of a matroid M:

* :func:`class_from_duals` pairs the class against every monomial H^a
  (Kronecker duals) and inverts the Poincare pairing.  The default engine
  runs the subset dynamic program of [M]_hbar on integer tensors; the
  ``"reference"`` engine evaluates each dual separately with sparse
  polynomials.
* :func:`class_via_permutation_formula` interpolates the rational sum over
  orderings of the ground set.
* :func:`class_via_kernel` evaluates [M]_hbar on the inputs
  (F(z) - F(H_i)) / (z - H_i) over a ring containing the H_i.
* :func:`nonequivariant_class` counts lattice points (F = z^{r+1} only).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Sequence

import numpy as np

from .algebra import (
    ChowClass,
    QuantumContext,
    UniPoly,
    f_adic_digits,
    h_vars,
    integrate_point,
    reduce_vars,
)
from .matroid import Matroid, QMatrix, RankDeficiencyError, from_mask, matroid_from_matrix, popcount
from .poly import AlgebraError, Poly
from .polytope import _basis_sigma_table, lattice_points
from .quantum import kronecker_dual, mhbar_general


class InvariantError(AssertionError):
    """An internal consistency check failed."""


def _as_matroid(m, ctx=None) -> Matroid:
    if isinstance(m, Matroid):
        return m
    if isinstance(m, QMatrix):
        rk = m.rank()
        if rk < m.rows:
            raise RankDeficiencyError(rk, m.rows)
        return matroid_from_matrix(m)
    if hasattr(m, "evaluate"):
        return m.evaluate()
    raise TypeError("expected a Matroid, QMatrix or MatroidExpr")


def codimension(m: Matroid, r: int) -> int:
    """Degree of the class: n r minus the orbit dimension (r+1) d - 1."""
    return m.n * r - (r + 1) * m.d + 1


# ----------------------------------------------------------------------
# Poincare pairing


def gram_matrix(ctx: QuantumContext) -> list:
    """G[a][b] = integral of z^(a+b); zero above the anti-diagonal, one on it."""
    r = ctx.r
    return [[integrate_point(ctx.z(a + b), ctx) for b in range(r + 1)] for a in range(r + 1)]


def gram_inverse(ctx: QuantumContext) -> list:
    """Inverse of the pairing matrix over the coefficient ring.

    G times the reversal matrix J is lower unitriangular, so it is inverted by
    forward substitution and G^{-1} = J (GJ)^{-1}.
    """
    r = ctx.r
    g = gram_matrix(ctx)
    lower = [[g[a][r - b] for b in range(r + 1)] for a in range(r + 1)]
    one, zero = Poly.one(ctx.coeff_vars), Poly.zero(ctx.coeff_vars)
    x = [[one if i == j else zero for j in range(r + 1)] for i in range(r + 1)]
    for i in range(r + 1):
        if lower[i][i] != one:
            raise InvariantError("pairing matrix is not unit anti-triangular")
        for k in range(i):
            if lower[i][k]:
                x[i] = [a - lower[i][k] * b for a, b in zip(x[i], x[k])]
    return [x[r - a] for a in range(r + 1)]


def _solve_pairing(duals: dict, n: int, ctx: QuantumContext) -> ChowClass:
    """Class from its pairings duals[a] = integral(class * H^a)."""
    ginv = gram_inverse(ctx)
    s = ctx.r + 1
    table = dict(duals)
    for axis in range(n):
        new = {}
        for b in product(range(s), repeat=n):
            acc = Poly.zero(ctx.coeff_vars)
            for a in range(s):
                c = ginv[b[axis]][a]
                if c:
                    key = b[:axis] + (a,) + b[axis + 1:]
                    v = table.get(key)
                    if v:
                        acc = acc + c * v
            if acc:
                new[b] = acc
        table = new
    vars = h_vars(n) + ctx.coeff_vars
    terms = {}
    for b, p in table.items():
        for e, c in p.terms.items():
            terms[tuple(b) + e] = c
    return ChowClass(ctx, n, Poly(vars, terms))


# ----------------------------------------------------------------------
# tensor engine


class _Overflow(Exception):
    pass


class _GradedRing:
    """Monomials of weighted degree at most ``cap`` in the coefficient variables."""

    def __init__(self, ctx: QuantumContext, cap: int):
        w = ctx.weights
        monos: list = []

        def rec(i, rem, cur):
            if i == len(w):
                monos.append(tuple(cur))
                return
            for k in range(rem // w[i] + 1):
                cur.append(k)
                rec(i + 1, rem - k * w[i], cur)
                cur.pop()

        rec(0, cap, [])
        self.monos = monos
        self.index = {m: i for i, m in enumerate(monos)}

    def right_matrix(self, p: Poly, dtype) -> np.ndarray:
        """Matrix R with (vector @ R) = vector times p, truncated at the cap."""
        size = len(self.monos)
        out = np.zeros((size, size), dtype=dtype)
        for j, mu in enumerate(self.monos):
            for nu, c in p.terms.items():
                t = self.index.get(tuple(a + b for a, b in zip(mu, nu)))
                if t is not None:
                    out[j, t] += int(c)
        return out


def is_graded(ctx: QuantumContext) -> bool:
    """True when F is homogeneous for positive integer weights with integer coefficients."""
    if any(w < 1 for w in ctx.weights):
        return False
    for m in range(1, ctx.r + 2):
        for e, c in ctx.F_coeff(m).terms.items():
            if not isinstance(c, int) or sum(a * w for a, w in zip(e, ctx.weights)) != m:
                return False
    return True


def _digit_sums(k: int, s: int) -> np.ndarray:
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    grids = np.indices((s,) * k).reshape(k, -1)
    return grids.sum(axis=0)


def _dual_tensor(m: Matroid, ctx: QuantumContext, dtype):
    """Array D[a_1, .., a_n, mu]: coefficient of c^mu in integral(class * H^a)."""
    n, d, r = m.n, m.d, ctx.r
    s = r + 1
    cap = codimension(m, r)
    ring = _GradedRing(ctx, cap)
    size = len(ring.monos)
    mults = [ring.right_matrix(ctx.F_coeff(k), dtype) for k in range(1, s + 1)]
    big = dtype is not object
    limit = (1 << 62) // ((1 << n) * (1 + size * max([1] + [int(abs(x)) for a in mults for x in a.flat])))

    # z * (top coefficient) = F^{k+1} - sum_m f_m z^{r+1-m} F^k; one stacked
    # product handles every f_m, in float64 while that stays exact
    stacked = np.concatenate([mults[k - 1] for k in range(s, 0, -1)], axis=1)
    stacked_f = stacked.astype(np.float64) if big else None
    exact_f = float(1 << 52) / (1 + size * max(1, int(np.abs(stacked).max(initial=0)))) if big else 0

    def times_z(a):
        out = np.zeros_like(a)
        out[:, :, 1:, :] = a[:, :, :-1, :]
        top = a[:, :, r, :]
        out[:, 1:, 0, :] += top[:, :-1, :]
        if big and top.size and int(np.abs(top).max()) < exact_f:
            corr = np.rint(top.astype(np.float64) @ stacked_f).astype(np.int64)
        else:
            corr = top @ stacked
        out -= corr.reshape(top.shape[:2] + (s, size))
        return out

    def guard(a):
        if big and a.size and int(np.abs(a).max()) > limit:
            raise _Overflow

    ranks = m.rank_table()
    full = (1 << n) - 1
    sums = [_digit_sums(k, s) for k in range(n + 1)]
    acc: dict = {}
    start = np.zeros((1, d, s, size), dtype=dtype)
    start[0, 0, 0, ring.index[(0,) * len(ctx.coeff_vars)]] = 1
    for x in sorted(range(full), key=popcount):
        if x == 0:
            v = start
        else:
            v = acc.pop(x, None)
            if v is None or not v.any():
                continue
        guard(v)
        kx = popcount(x)
        elems_x = from_mask(x)
        rest = full & ~x
        powers = [v]
        for _ in range(r * popcount(rest)):
            powers.append(times_z(powers[-1]))
            guard(powers[-1])
        w = np.stack(powers)
        w_top = w[:, :, d - 1, r, :]
        sub = rest
        while sub:
            y = x | sub
            ky = int(ranks[y])
            if ky:
                kd = popcount(sub)
                order = list(from_mask(sub)) + list(elems_x)
                axes = sorted(range(len(order)), key=lambda t: order[t])
                if y == full:
                    t = w_top[sums[kd]]
                    tail = (size,)
                else:
                    t = w[:, :, :ky][sums[kd]]
                    tail = t.shape[2:]
                t = t.reshape((s,) * (kd + kx) + tail)
                t = t.transpose(axes + list(range(kd + kx, t.ndim)))
                t = t.reshape((s ** (kd + kx),) + tail)
                target = acc.get(y)
                if target is None:
                    shape = (s ** n, size) if y == full else (s ** (kd + kx), d, s, size)
                    target = acc[y] = np.zeros(shape, dtype=dtype)
                if y == full:
                    target -= t
                else:
                    target[:, :ky] -= t
            sub = (sub - 1) & rest
    total = acc.get(full)
    if total is None:
        total = np.zeros((s ** n, size), dtype=dtype)
    guard(total)
    if n % 2:
        total = -total
    return total.reshape((s,) * n + (size,)), ring


def _apply_gram_inverse(dt: np.ndarray, ring: _GradedRing, ctx: QuantumContext, n: int) -> np.ndarray:
    s = ctx.r + 1
    size = len(ring.monos)
    ginv = gram_inverse(ctx)
    gbig = np.zeros((s, s, size, size), dtype=object)
    for b in range(s):
        for a in range(s):
            gbig[b, a] = ring.right_matrix(ginv[b][a], object).T
    growth = 1 + int(np.abs(gbig).sum(axis=(0, 2)).max())
    small = dt.dtype != object
    out = dt
    for axis in range(n):
        if small and int(np.abs(out).max(initial=0)) * growth >= 1 << 62:
            small = False
            out = out.astype(object)
        g = gbig.astype(np.int64) if small else gbig
        res = np.tensordot(g, out, axes=([1, 3], [axis, n]))
        out = np.moveaxis(res, [0, 1], [axis, n])
    return out


def monomial_duals(m, ctx: QuantumContext, engine: str = "tensor") -> dict:
    """{a: integral(class(M) * prod H_i^{a_i})} for a in {0..r}^n (nonzero values)."""
    m = _as_matroid(m)
    s = ctx.r + 1
    if engine == "tensor" and is_graded(ctx):
        if codimension(m, ctx.r) < 0:
            return {}
        dt, ring = _tensor_or_object(m, ctx)
        out = {}
        for idx in zip(*np.nonzero(dt)):
            a, mu = tuple(int(i) for i in idx[:-1]), idx[-1]
            c = int(dt[idx])
            out.setdefault(a, {})[ring.monos[mu]] = c
        return {a: Poly(ctx.coeff_vars, t) for a, t in out.items()}
    if engine not in ("tensor", "reference"):
        raise ValueError(f"unknown engine {engine!r}")
    out = {}
    for a in product(range(s), repeat=m.n):
        v = kronecker_dual(m, [ctx.z(k) for k in a], ctx)
        if v:
            out[a] = v
    return out


def _tensor_or_object(m, ctx):
    try:
        return _dual_tensor(m, ctx, np.int64)
    except _Overflow:
        return _dual_tensor(m, ctx, object)


def class_from_duals(m, ctx: QuantumContext, engine: str = "tensor") -> ChowClass:
    """Class of the orbit closure reconstructed from its Kronecker duals."""
    m = _as_matroid(m)
    n = m.n
    if engine == "tensor" and is_graded(ctx):
        if codimension(m, ctx.r) < 0:
            return ChowClass.zero(ctx, n)
        dt, ring = _tensor_or_object(m, ctx)
        cls_t = _apply_gram_inverse(dt, ring, ctx, n)
        terms = {}
        for idx in zip(*np.nonzero(cls_t)):
            b, mu = tuple(int(i) for i in idx[:-1]), idx[-1]
            terms[b + ring.monos[mu]] = int(cls_t[idx])
        return ChowClass(ctx, n, Poly(h_vars(n) + ctx.coeff_vars, terms))
    return _solve_pairing(monomial_duals(m, ctx, "reference"), n, ctx)


# ----------------------------------------------------------------------
# permutation formula


def _vandermonde_inverse(nodes: Sequence[int]) -> list:
    """V^{-1} for V[j][k] = nodes[j]^k, exact."""
    from .linalg import solve

    size = len(nodes)
    cols = []
    for j in range(size):
        e = [1 if i == j else 0 for i in range(size)]
        cols.append(solve([[Fraction(x) ** k for k in range(size)] for x in nodes], e))
    return [[cols[j][k] for j in range(size)] for k in range(size)]


def _orderings_by_basis(m: Matroid) -> dict:
    groups: dict = {}
    for sigma, b in _basis_sigma_table(m):
        groups.setdefault(b, []).append(tuple(i - 1 for i in sigma))
    return groups


def _rational_sum(groups, z, fvals, memo, n, key_of):
    """sum over orderings of prod_{i not in B} F(z_i) / prod consecutive differences.

    Returns (numerators by c-monomial, common denominator)."""
    den_all = 1
    for i in range(n):
        for j in range(i + 1, n):
            den_all *= z[j] - z[i]
    full = (1 << n) - 1
    out: dict = {}
    for b, sigmas in groups.items():
        weight = 0
        for sigma in sigmas:
            den = 1
            for a, c in zip(sigma, sigma[1:]):
                den *= z[c] - z[a]
            weight += den_all // den
        if not weight:
            continue
        rest = full & ~b
        key = (rest, key_of(rest))
        prod_f = memo.get(key)
        if prod_f is None:
            prod_f = None
            for i in range(n):
                if rest >> i & 1:
                    prod_f = fvals(i) if prod_f is None else prod_f * fvals(i)
            memo[key] = prod_f
        if prod_f is None:
            out[None] = out.get(None, 0) + weight
        else:
            for e, c in prod_f.terms.items():
                out[e] = out.get(e, 0) + weight * c
    return out, den_all


def class_via_permutation_formula(m, ctx: QuantumContext, *, verify: bool = False, seed: int = 0) -> ChowClass:
    """Class by interpolating the sum over orderings on a disjoint integer grid."""
    if isinstance(m, QMatrix):
        if m.rank() < m.rows:
            return ChowClass.zero(ctx, m.cols)
        m = matroid_from_matrix(m)
    m = _as_matroid(m)
    n, r = m.n, ctx.r
    s = r + 1
    zero_e = (0,) * len(ctx.coeff_vars)
    nodes = [[i * s + 1 + k for k in range(s)] for i in range(1, n + 1)]
    f_at = {}
    for i in range(n):
        for k, x in enumerate(nodes[i]):
            f_at[(i, x)] = ctx.F.evaluate(Poly.const(ctx.coeff_vars, x))
    groups = _orderings_by_basis(m)
    memo: dict = {}
    samples = []
    for g in product(range(s), repeat=n):
        z = [nodes[i][g[i]] for i in range(n)]
        num, den = _rational_sum(
            groups, z, lambda i: f_at[(i, z[i])], memo, n,
            lambda rest: tuple(z[i] for i in range(n) if rest >> i & 1),
        )
        samples.append((g, num, den))
    # clear denominators so the interpolation runs over the integers
    common = lcm(*(den for _, _, den in samples))
    values: dict = {}
    for g, num, den in samples:
        scale = common // den
        for e, c in num.items():
            e = zero_e if e is None else e
            arr = values.get(e)
            if arr is None:
                arr = values[e] = np.zeros((s,) * n, dtype=object)
            arr[g] += int(c * scale)
    vinv = []
    for i in range(n):
        rows = _vandermonde_inverse(nodes[i])
        q = lcm(*(x.denominator for row in rows for x in row))
        common *= q
        vinv.append(np.array([[int(x * q) for x in row] for row in rows], dtype=object))
    terms = {}
    for e, arr in values.items():
        coef = arr
        for axis in range(n):
            coef = np.moveaxis(np.tensordot(vinv[axis], coef, axes=([1], [axis])), 0, axis)
        for b in zip(*np.nonzero(coef)):
            c, rem = divmod(int(coef[b]), common)
            if rem:
                raise InvariantError("interpolated class has a non-integral coefficient")
            if c:
                terms[tuple(int(i) for i in b) + e] = c
    out = ChowClass(ctx, n, Poly(h_vars(n) + ctx.coeff_vars, terms))
    if verify:
        _check_off_grid(out, m, ctx, groups, seed)
    return out


def _check_off_grid(cls_: ChowClass, m: Matroid, ctx: QuantumContext, groups, seed):
    """Compare with the rational sum at a random point where the c's are numbers."""
    rng = random.Random(seed)
    n = m.n
    z = rng.sample(range(-10 ** 6, 10 ** 6), n)
    cvals = {v: rng.randrange(-50, 51) for v in ctx.coeff_vars}
    fnum = UniPoly([], [Poly.const((), c.evaluate(cvals)) for c in ctx.F.coeffs])

    def fval(i):
        return fnum.evaluate(Poly.const((), z[i]))

    num, den = _rational_sum(groups, z, fval, {}, n, lambda rest: rest)
    lhs = Fraction(sum(num.values()), den)
    rhs = cls_.poly.evaluate({**{h: z[i] for i, h in enumerate(h_vars(n))}, **cvals})
    if lhs != rhs:
        raise InvariantError("interpolated class disagrees with the rational sum off the grid")


# ----------------------------------------------------------------------
# other routes and closed forms


def divided_difference(ctx: QuantumContext, ring: Sequence[str], h: str) -> UniPoly:
    """(F(z) - F(h)) / (z - h) as a polynomial in z over ``ring``."""
    ring = tuple(ring)
    fz = ctx.F.embed(ring)
    fh = ctx.F_at(h, ring)
    num = fz - UniPoly.const(ring, fh)
    return num.exact_div(UniPoly(ring, [-Poly.var(ring, h), Poly.one(ring)]))


def class_via_kernel(m, ctx: QuantumContext) -> ChowClass:
    """[z^r][F^{d-1}] [M]_hbar applied to the divided differences of F at H_i."""
    m = _as_matroid(m)
    hv = h_vars(m.n)
    ext = ctx.extend(hv)
    inputs = [divided_difference(ctx, ext.coeff_vars, h) for h in hv]
    val = mhbar_general(m, inputs, ext).extract(m.d - 1, ctx.r)
    return ChowClass.from_poly(val, ctx, m.n)


def diagonal_class(ctx: QuantumContext) -> ChowClass:
    """(F(H1) - F(H2)) / (H1 - H2): the class of the diagonal in P^r x P^r."""
    vars = h_vars(2) + ctx.coeff_vars
    num = ctx.F_at("H1", vars) - ctx.F_at("H2", vars)
    return ChowClass(ctx, 2, num.exact_div(Poly.var(vars, "H1") - Poly.var(vars, "H2")))


def uniform_class_formula(k: int, n: int, ctx: QuantumContext) -> ChowClass:
    """[z^r][F^{k-1}] prod_i (F(z) - F(H_i)) / (z - H_i): the class of U(k, n)."""
    hv = h_vars(n)
    ring = hv + ctx.coeff_vars
    ext = ctx.extend(hv)
    acc = UniPoly.const(ring, 1)
    for h in hv:
        acc = acc * divided_difference(ctx, ring, h)
    digits = f_adic_digits(acc, ext)
    val = digits[k - 1].coeff(ctx.r) if len(digits) >= k else Poly.zero(ring)
    return ChowClass.from_poly(val, ctx, n)


def nonequivariant_class(m, r: int) -> ChowClass:
    """Sum over rank-mode lattice points e of prod_i H_i^(r - e_i)."""
    ctx = QuantumContext.nonequivariant(r)
    if isinstance(m, QMatrix):
        if m.rank() < m.rows:
            return ChowClass.zero(ctx, m.cols)
        m = matroid_from_matrix(m)
    m = _as_matroid(m)
    terms = {tuple(r - x for x in e): 1 for e in lattice_points(m, r, "rank")}
    return ChowClass(ctx, m.n, Poly(h_vars(m.n), terms))


def graph_closure_vars(n: int, ctx: QuantumContext) -> tuple:
    return h_vars(n) + ("H",) + ctx.coeff_vars


def graph_closure_class(m, ctx: QuantumContext, engine: str = "tensor") -> Poly:
    """sum_k class(trunc_{k+1}(M + point)) with H_{n+1} -> H, times F(H)^k."""
    m = _as_matroid(m)
    n = m.n
    vars = graph_closure_vars(n, ctx)
    ext = m.add_coloop()
    f_h = ctx.F_at("H", vars)
    total = Poly.zero(vars)
    for k in range(m.d):
        cl = class_from_duals(ext.truncate(k + 1), ctx, engine=engine)
        p = cl.poly.rename({f"H{n + 1}": "H"}).embed(vars)
        total = total + p * f_h ** k
    return total


def nonequivariant_graph_closure(m, r: int) -> Poly:
    """sum over independence-mode lattice points of H^(sum e) prod H_i^(r - e_i)."""
    m = _as_matroid(m)
    vars = h_vars(m.n) + ("H",)
    terms: dict = {}
    for e in lattice_points(m, r, "independence"):
        key = tuple(r - x for x in e) + (sum(e),)
        terms[key] = terms.get(key, 0) + 1
    return Poly(vars, terms)


def serpar_classes(c1: ChowClass, c2: ChowClass, ctx: QuantumContext):
    """Split class(M1) * class(M2), glued along H_{n1} of M1 and H_1 of M2, F-adically.

    Returns the hbar^0 and hbar^1 parts as classes on n1 + n2 - 1 points:
    the classes of the parallel and of the series connection.
    """
    if c1.ctx != ctx or c2.ctx != ctx:
        raise AlgebraError("classes from different contexts")
    n1, n2 = c1.n, c2.n
    n = n1 + n2 - 1
    others = tuple(f"H{i}" for i in range(1, n + 1) if i != n1)
    ring = others + ctx.coeff_vars
    vars = ("z",) + ring
    p1 = c1.poly.rename({f"H{n1}": "z"}).embed(vars)
    ren2 = {"H1": "z", **{f"H{j}": f"H{n1 + j - 1}" for j in range(2, n2 + 1)}}
    p2 = c2.poly.rename(ren2).embed(vars)
    prod_ = UniPoly.from_poly(p1 * p2, "z", ring)
    digits = f_adic_digits(prod_, ctx.extend(others))
    if len(digits) > 2:
        raise InvariantError("product has hbar-degree above one; inputs were not reduced")
    digits += [UniPoly.zero(ring)] * (2 - len(digits))
    target = h_vars(n) + ctx.coeff_vars
    out = []
    for a in digits:
        p = a.to_poly(f"H{n1}", target)
        out.append(ChowClass(ctx, n, p))
    return out[0], out[1]


def pair_class(cls_: ChowClass, inputs: Sequence[UniPoly], ctx: QuantumContext) -> Poly:
    """integral over (P^r)^n of class * prod f_i(H_i), by reduction in each H_i."""
    n, r = cls_.n, ctx.r
    if len(inputs) != n:
        raise AlgebraError(f"expected {n} inputs, got {len(inputs)}")
    hv = h_vars(n)
    p = cls_.poly
    for h, f in zip(hv, inputs):
        p = reduce_vars(p * f.to_poly(h, p.vars), ctx, [h])
    top = (r,) * n
    return Poly(ctx.coeff_vars, {e[n:]: c for e, c in p.terms.items() if e[:n] == top})
