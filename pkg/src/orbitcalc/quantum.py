"""The operator [M]_hbar and Kronecker duals.

Two independent evaluation strategies are provided.

* Structured: a :class:`MatroidExpr` built from single points, direct sums,
  truncations and relabelings is evaluated recursively; a point sends its
  input to its reduction mod F, a direct sum is a quantum product and a
  truncation to rank k cuts the hbar-series at hbar^k.
* General: for an arbitrary matroid, the signed sum over flags of subsets
  ``X_1 < ... < X_l = [n]`` of nested products reduced modulo
  ``F^{rk X_1}, ..., F^{rk X_l}`` (the Schubert-matroid decomposition).  The
  flag sum is organized as a dynamic program over subsets, which memoizes
  every shared prefix of a flag.
"""

from __future__ import annotations

from typing import Sequence

from .algebra import QuantumContext, QuantumElement, UniPoly, mod_F_power, reduce_mod_F, star
from .matroid import Matroid, MatroidError, popcount, to_mask
from .poly import AlgebraError


class MatroidExpr:
    """Expression tree evaluating to a matroid."""

    size: int

    def evaluate(self) -> Matroid:
        raise NotImplementedError

    def mhbar(self, inputs: Sequence[UniPoly], ctx: QuantumContext) -> QuantumElement:
        raise NotImplementedError


class Point(MatroidExpr):
    """The one-element matroid of rank one."""

    size = 1

    def evaluate(self):
        return Matroid(1, [1], check=False)

    def mhbar(self, inputs, ctx):
        return QuantumElement(ctx, [reduce_mod_F(inputs[0], ctx)])

    def __repr__(self):
        return "*"


class Leaf(MatroidExpr):
    """An arbitrary matroid, evaluated by the general strategy."""

    def __init__(self, matroid: Matroid):
        self.matroid = matroid
        self.size = matroid.n

    def evaluate(self):
        return self.matroid

    def mhbar(self, inputs, ctx):
        return mhbar_general(self.matroid, inputs, ctx)

    def __repr__(self):
        return f"Leaf({self.matroid!r})"


class DirectSum(MatroidExpr):
    def __init__(self, children: Sequence[MatroidExpr]):
        if not children:
            raise MatroidError("empty direct sum")
        self.children = tuple(children)
        self.size = sum(c.size for c in self.children)

    def evaluate(self):
        out = self.children[0].evaluate()
        for c in self.children[1:]:
            out = out.direct_sum(c.evaluate())
        return out

    def mhbar(self, inputs, ctx):
        pos = 0
        acc = None
        for c in self.children:
            part = c.mhbar(inputs[pos: pos + c.size], ctx)
            pos += c.size
            acc = part if acc is None else star(acc, part)
        return acc

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.children)) + ")"


class Truncate(MatroidExpr):
    def __init__(self, k: int, child: MatroidExpr):
        if k < 0:
            raise MatroidError("truncation rank must be nonnegative")
        self.k = k
        self.child = child
        self.size = child.size

    def evaluate(self):
        m = self.child.evaluate()
        if self.k == 0:
            return Matroid(m.n, [0], check=False)
        return m.truncate(self.k)

    def mhbar(self, inputs, ctx):
        return self.child.mhbar(inputs, ctx).truncate(self.k)

    def __repr__(self):
        return f"T{self.k}{self.child!r}"


class Relabel(MatroidExpr):
    """Element ``i`` of the result is element ``perm[i-1]`` of the child."""

    def __init__(self, perm: Sequence[int], child: MatroidExpr):
        perm = tuple(perm)
        if sorted(perm) != list(range(1, child.size + 1)):
            raise MatroidError("relabeling must be a permutation of the child's ground set")
        self.perm = perm
        self.child = child
        self.size = child.size

    def evaluate(self):
        return self.child.evaluate().relabel(self.perm)

    def mhbar(self, inputs, ctx):
        g = [None] * self.size
        for i, p in enumerate(self.perm):
            g[p - 1] = inputs[i]
        return self.child.mhbar(g, ctx)

    def __repr__(self):
        return f"Relabel{self.perm}{self.child!r}"


def points(k: int) -> list:
    return [Point() for _ in range(k)]


def uniform_expr(d: int, n: int) -> MatroidExpr:
    return Truncate(d, DirectSum(points(n)))


def identity_expr(n: int) -> MatroidExpr:
    return DirectSum(points(n))


def relabel_to_order(order: Sequence[int], expr: MatroidExpr) -> MatroidExpr:
    """``expr`` has its elements listed in ``order``; return it on labels 1..n."""
    position = {e: k + 1 for k, e in enumerate(order)}
    perm = [position[i] for i in range(1, len(order) + 1)]
    if perm == sorted(perm):
        return expr
    return Relabel(perm, expr)


def schubert_expr(ranks: Sequence[int], sets: Sequence) -> MatroidExpr:
    """Sch(r_1..r_l; X_1 < .. < X_l) as nested truncated direct sums."""
    sets = [sorted(set(s)) for s in sets]
    order = list(sets[0])
    expr: MatroidExpr = Truncate(ranks[0], DirectSum(points(len(sets[0]))))
    for k in range(1, len(sets)):
        new = [x for x in sets[k] if x not in set(sets[k - 1])]
        order += new
        expr = Truncate(ranks[k], DirectSum([expr] + points(len(new))))
    return relabel_to_order(order, expr)


def partition_expr(blocks: Sequence) -> MatroidExpr:
    """Rank-two matroid with the given parallel classes."""
    blocks = [sorted(b) for b in blocks]
    order = [x for b in blocks for x in b]
    expr = Truncate(2, DirectSum([Truncate(1, DirectSum(points(len(b)))) for b in blocks]))
    return relabel_to_order(order, expr)


# ----------------------------------------------------------------------


def _check_inputs(n: int, inputs, ctx: QuantumContext) -> list:
    inputs = list(inputs)
    if len(inputs) != n:
        raise AlgebraError(f"expected {n} inputs, got {len(inputs)}")
    out = []
    for f in inputs:
        if f.ring != ctx.coeff_vars:
            raise AlgebraError("input polynomial over the wrong coefficient ring")
        out.append(f)
    return out


def mhbar_general(m: Matroid, inputs: Sequence[UniPoly], ctx: QuantumContext) -> QuantumElement:
    """[M]_hbar through the signed flag sum of Schubert terms."""
    inputs = _check_inputs(m.n, inputs, ctx)
    n = m.n
    fbar = [reduce_mod_F(f, ctx) for f in inputs]
    full = (1 << n) - 1
    ranks = m.rank_table()
    prod = {0: ctx.one()}
    for mask in range(1, full + 1):
        low = mask & -mask
        prod[mask] = prod[mask ^ low] * fbar[low.bit_length() - 1]
    value = {0: ctx.one()}
    for y in sorted(range(1, full + 1), key=popcount):
        k = int(ranks[y])
        acc = ctx.zero()
        if k > 0:
            sub = (y - 1) & y
            while True:
                vx = value[sub]
                if vx:
                    acc = acc - mod_F_power(vx * prod[y ^ sub], k, ctx)
                if sub == 0:
                    break
                sub = (sub - 1) & y
        value[y] = acc
    total = value[full] if n % 2 == 0 else -value[full]
    return QuantumElement.from_unipoly(total, ctx)


def mhbar(m, inputs: Sequence[UniPoly], ctx: QuantumContext, *, check: bool = False) -> QuantumElement:
    """[M]_hbar(f_1, ..., f_n) for a Matroid or a MatroidExpr.

    With ``check=True`` a structured expression is also evaluated by the
    general strategy and the two results are compared.
    """
    if isinstance(m, Matroid):
        return mhbar_general(m, inputs, ctx)
    if not isinstance(m, MatroidExpr):
        raise TypeError("mhbar expects a Matroid or a MatroidExpr")
    inputs = _check_inputs(m.size, inputs, ctx)
    out = m.mhbar(inputs, ctx)
    if check and m.size <= 6:
        other = mhbar_general(m.evaluate(), inputs, ctx)
        if other != out:
            raise AssertionError("structured and general evaluations of [M]_hbar disagree")
    return out


def rank_of(m) -> int:
    return m.d if isinstance(m, Matroid) else m.evaluate().d


def kronecker_dual(m, inputs: Sequence[UniPoly], ctx: QuantumContext):
    """integral of class(M) * prod f_i(H_i): the [z^r][F^{d-1}] part of [M]_hbar."""
    d = rank_of(m)
    return mhbar(m, inputs, ctx).extract(d - 1, ctx.r)


def monomial_inputs(exps: Sequence[int], ctx: QuantumContext) -> list:
    return [ctx.z(a) for a in exps]
