"""Verification suites shared by the command line and the test suite.

Each suite builds a deterministic list of tasks from a seed, runs them
(optionally in worker processes, results kept in task order) and returns one
:class:`Finding` per task.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .algebra import ChowClass, QuantumContext, UniPoly, star
from .classes import (
    class_from_duals,
    class_via_kernel,
    class_via_permutation_formula,
    graph_closure_class,
    monomial_duals,
    nonequivariant_class,
    nonequivariant_graph_closure,
    pair_class,
    serpar_classes,
)
from .library import connected_library, nested_reduction_dual, six_point_family, small_library
from .matroid import (
    QMatrix,
    general_matrix,
    matroid_from_matrix,
    parallel_connection,
    series_connection,
)
from .poly import Poly
from .polytope import (
    brion_eval,
    closed_indicator_check,
    indicator_residual,
    interior_faces,
    lattice_points,
    lattice_transform,
    shadow_subdivision,
)
from .quantum import mhbar, partition_expr, schubert_expr, uniform_expr


@dataclass
class Finding:
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"suite": self.suite, "name": self.name, "ok": self.ok, "detail": self.detail}

    def line(self) -> str:
        tag = "ok  " if self.ok else "FAIL"
        return f"{tag} {self.suite} {self.name}" + (f"  ({self.detail})" if self.detail else "")


def run_tasks(fn, tasks, jobs: int = 1) -> list:
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


@lru_cache(maxsize=None)
def context(r: int) -> QuantumContext:
    return QuantumContext.universal(r)


@lru_cache(maxsize=4096)
def cached_class(m, r: int) -> ChowClass:
    return class_from_duals(m, context(r))


def random_input(rng: random.Random, ctx: QuantumContext, max_degree: int | None = None) -> UniPoly:
    """Polynomial in z of degree <= r+1 with small integer and linear c-coefficients."""
    top = ctx.r + 1 if max_degree is None else max_degree
    ring = ctx.coeff_vars
    coeffs = []
    for _ in range(rng.randint(0, top) + 1):
        c = Poly.const(ring, rng.randint(-3, 3))
        if ring and rng.random() < 0.4:
            c = c + Poly.var(ring, rng.choice(ring)) * rng.randint(-2, 2)
        coeffs.append(c)
    out = UniPoly(ring, coeffs)
    return out if out else UniPoly.const(ring, 1)


def class_of_matrix(m: QMatrix, ctx: QuantumContext) -> ChowClass:
    if m.rank() < m.rows:
        return ChowClass.zero(ctx, m.cols)
    return class_from_duals(matroid_from_matrix(m), ctx)


# ----------------------------------------------------------------------
# valuativity


def valuativity_tasks(seed: int = 0, samples: int = 2000, scales=(1, 2, 3)) -> list:
    tasks = []
    for name, m in connected_library().items():
        for i in range(1, m.n + 1):
            for j in range(1, m.n + 1):
                if i != j:
                    tasks.append((name, m, i, j, seed, samples, tuple(scales)))
    return tasks


def check_valuativity(task) -> Finding:
    name, m, i, j, seed, samples, scales = task
    label = f"{name} dir=({i},{j})"
    sub = shadow_subdivision(m, i, j)
    cells = sub.matroids()
    if len(cells) < 2:
        return Finding("valuativity", label, True, "single cell")
    if not indicator_residual(sub.parent, sub.cells, samples=samples, seed=seed):
        return Finding("valuativity", label, False, "indicator residual")
    for r in scales:
        total = cached_class(cells[0], r)
        for c in cells[1:]:
            total = total + cached_class(c, r)
        if total != cached_class(sub.parent, r):
            return Finding("valuativity", label, False, f"class additivity at r={r}")
    # [M]_hbar does not vanish on lower-dimensional pieces, so it needs the
    # full inclusion-exclusion over interior faces of the subdivision
    pieces = interior_faces(sub.parent, cells)
    if not closed_indicator_check(sub.parent, pieces, scales=(1, 2)):
        return Finding("valuativity", label, False, "interior-face indicator identity")
    rng = random.Random(f"{seed}:{label}")
    for r in (1, 2):
        ctx = context(r)
        inputs = [random_input(rng, ctx) for _ in range(m.n)]
        rhs = None
        for c, sign in pieces:
            term = mhbar(c, inputs, ctx).scale(sign)
            rhs = term if rhs is None else rhs + term
        if mhbar(sub.parent, inputs, ctx) != rhs:
            return Finding("valuativity", label, False, f"mhbar additivity at r={r}")
    return Finding("valuativity", label, True, f"{len(cells)} cells")


# ----------------------------------------------------------------------
# series / parallel


def _random_full_rank(rng: random.Random, d: int, n: int, generic: bool = False) -> QMatrix:
    if generic or rng.random() < 0.5:
        return general_matrix(d, n, seed=rng.randrange(1 << 30))
    while True:
        rows = [[0 if rng.random() < 0.3 else rng.randint(-3, 3) for _ in range(n)] for _ in range(d)]
        m = QMatrix(rows)
        if m.rank() == d and any(m.column(1)) and any(m.column(n)):
            return m


def serpar_tasks(seed: int = 0, count: int = 24, generic: bool = False) -> list:
    """Random pairs; with ``generic`` every matrix is a certified general one."""
    rng = random.Random(seed)
    tasks = []
    for k in range(count):
        d1, d2 = rng.randint(1, 3), rng.randint(1, 3)
        n1, n2 = rng.randint(max(d1, 1), 4), rng.randint(max(d2, 1), 4)
        m1 = _random_full_rank(rng, d1, n1, generic)
        m2 = _random_full_rank(rng, d2, n2, generic)
        tasks.append((f"pair{k} {d1}x{n1} . {d2}x{n2}", m1, m2, k % 2 + 1))
    return tasks


def check_serpar(task) -> Finding:
    name, m1, m2, r = task
    ctx = context(r)
    p_part, s_part = serpar_classes(class_of_matrix(m1, ctx), class_of_matrix(m2, ctx), ctx)
    p_ref = class_of_matrix(parallel_connection(m1, m2), ctx)
    s_ref = class_of_matrix(series_connection(m1, m2), ctx)
    label = f"{name} r={r}"
    if p_part != p_ref:
        return Finding("serpar", label, False, "parallel part")
    if s_part != s_ref:
        return Finding("serpar", label, False, "series part")
    return Finding("serpar", label, True)


# ----------------------------------------------------------------------
# [M]_hbar properties


def mhbar_prop_tasks(seed: int = 0, rs=(1, 2)) -> list:
    names = sorted(small_library())
    tasks = []
    for k, name in enumerate(names):
        for r in rs:
            tasks.append((name, r, seed * 1000003 + 7919 * k + r))
    return tasks


def structured_exprs() -> list:
    exprs = [(f"U({d},{n})", uniform_expr(d, n)) for n in range(2, 6) for d in range(1, n)]
    exprs += [
        ("Sch(1,2;{1,2},[4])", schubert_expr([1, 2], [{1, 2}, range(1, 5)])),
        ("Sch(2,3;{1,2,3},[5])", schubert_expr([2, 3], [{1, 2, 3}, range(1, 6)])),
        ("Sch(1,2,3;{2},{2,4,5},[5])", schubert_expr([1, 2, 3], [{2}, {2, 4, 5}, range(1, 6)])),
        ("Sch(1,3;{3,5,6},[6])", schubert_expr([1, 3], [{3, 5, 6}, range(1, 7)])),
        ("Part({1,3}|{2,4}|{5})", partition_expr([[1, 3], [2, 4], [5]])),
        ("Part({1}|{2}|{3,4,5})", partition_expr([[1], [2], [3, 4, 5]])),
    ]
    return exprs


def check_mhbar_props(task) -> Finding:
    name, r, seed = task
    lib = small_library()
    m = lib[name]
    ctx = context(r)
    rng = random.Random(seed)
    inputs = [random_input(rng, ctx) for _ in range(m.n)]
    label = f"{name} r={r}"
    full = mhbar(m, inputs, ctx)
    for k in range(1, m.d + 1):
        if mhbar(m.truncate(k), inputs, ctx) != full.truncate(k):
            return Finding("mhbar-props", label, False, f"truncation k={k}")
    for k in range(m.d):
        # pairing computed from an independently obtained class
        cls_ = class_via_permutation_formula(m.truncate(k + 1), ctx)
        if full.extract(k, r) != pair_class(cls_, inputs, ctx):
            return Finding("mhbar-props", label, False, f"[z^r][F^{k}] dual")
    perm = list(range(1, m.n + 1))
    rng.shuffle(perm)
    permuted = [None] * m.n
    for i, p in enumerate(perm):
        permuted[p - 1] = inputs[i]
    if mhbar(m.relabel(perm), inputs, ctx) != mhbar(m, permuted, ctx):
        return Finding("mhbar-props", label, False, f"relabeling {perm}")
    small = [v for v in lib.values() if v.n + m.n <= 6]
    if small:
        other = small[rng.randrange(len(small))]
        extra = [random_input(rng, ctx) for _ in range(other.n)]
        lhs = mhbar(m.direct_sum(other), inputs + extra, ctx)
        if lhs != star(full, mhbar(other, extra, ctx)):
            return Finding("mhbar-props", label, False, "direct sum")
    return Finding("mhbar-props", label, True)


def check_structured(task) -> Finding:
    name, expr, r, seed = task
    ctx = context(r)
    rng = random.Random(seed)
    inputs = [random_input(rng, ctx) for _ in range(expr.size)]
    ok = mhbar(expr, inputs, ctx) == mhbar(expr.evaluate(), inputs, ctx)
    return Finding("mhbar-props", f"structured {name} r={r}", ok, "" if ok else "strategies disagree")


# ----------------------------------------------------------------------
# cross-route


def crossroute_tasks(rs=(1, 2, 3), kernel: bool = False) -> list:
    return [(name, r, kernel) for name in sorted(small_library()) for r in rs]


def check_crossroute(task) -> Finding:
    name, r, kernel = task
    m = small_library()[name]
    ctx = context(r)
    label = f"{name} r={r}"
    duals = class_from_duals(m, ctx)
    if class_via_permutation_formula(m, ctx, verify=True) != duals:
        return Finding("crossroute", label, False, "permutation formula")
    if duals.specialize_nonequivariant() != nonequivariant_class(m, r):
        return Finding("crossroute", label, False, "lattice-point class")
    if kernel and r <= 2 and class_via_kernel(m, ctx) != duals:
        return Finding("crossroute", label, False, "kernel route")
    return Finding("crossroute", label, True)


def noneq_tasks() -> list:
    lib = dict(small_library())
    for k, v in six_point_family().items():
        lib[k] = v
    return [(name, m, r) for name, m in sorted(lib.items()) for r in (1, 2, 3)]


def check_noneq(task) -> Finding:
    name, m, r = task
    ok = cached_class(m, r).specialize_nonequivariant() == nonequivariant_class(m, r)
    return Finding("noneq", f"{name} r={r}", ok, "" if ok else "c -> 0 mismatch")


def graph_tasks() -> list:
    return [(name, r) for name, m in sorted(small_library().items()) if m.d <= 3 for r in (1, 2)]


def check_graph(task) -> Finding:
    name, r = task
    m = small_library()[name]
    g = graph_closure_class(m, context(r))
    got = g.specialize_zero(context(r).coeff_vars)
    want = nonequivariant_graph_closure(m, r)
    ok = got.embed(want.vars) == want
    return Finding("graph", f"{name} r={r}", ok, "" if ok else "c -> 0 mismatch")


def brion_tasks(seed: int = 0, per: int = 5) -> list:
    rng = random.Random(seed)
    tasks = []
    for name, m in sorted(small_library().items()):
        for r in (1, 2, 3):
            pts = []
            for _ in range(per):
                while True:
                    z = [random_rational(rng) for _ in range(m.n)]
                    if len(set(z)) == m.n and all(z):
                        break
                pts.append(z)
            tasks.append((name, r, pts))
    return tasks


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-40, 40), rng.randint(1, 12))


def check_brion(task) -> Finding:
    name, r, pts = task
    m = small_library()[name]
    pts_lattice = lattice_points(m, r)
    for z in pts:
        if brion_eval(m, r, z) != lattice_transform(pts_lattice, r, z):
            return Finding("brion", f"{name} r={r}", False, f"at {[str(x) for x in z]}")
    return Finding("brion", f"{name} r={r}", True)


# ----------------------------------------------------------------------
# the six-point example


def extended_example(rs=(2, 3)) -> list:
    fam = six_point_family()
    out = []
    for r in rs:
        ctx = context(r)
        c = {k: class_from_duals(v, ctx) for k, v in fam.items()}
        out.append(Finding("extended-example", f"class(A)+class(C)=class(B) r={r}", c["A"] + c["C"] == c["B"]))
        out.append(Finding("extended-example", f"class(B)+class(E)=class(D) r={r}", c["B"] + c["E"] == c["D"]))
        duals = monomial_duals(fam["A"], ctx)
        zero = Poly.zero(ctx.coeff_vars)
        bad = [a for a in product(range(r + 1), repeat=6)
               if nested_reduction_dual([ctx.z(k) for k in a], ctx) != duals.get(a, zero)]
        out.append(Finding("extended-example", f"dual of A by nested reductions r={r}", not bad,
                           f"{len(bad)} monomials differ" if bad else f"{(r + 1) ** 6} monomials"))
    return out


SUITE_NAMES = ("valuativity", "serpar", "mhbar-props", "crossroute")


def run_suite(name: str, seed: int = 0, jobs: int = 1, check: bool = False) -> list:
    if name == "valuativity":
        return run_tasks(check_valuativity, valuativity_tasks(seed), jobs)
    if name == "serpar":
        return run_tasks(check_serpar, serpar_tasks(seed), jobs)
    if name == "mhbar-props":
        out = run_tasks(check_mhbar_props, mhbar_prop_tasks(seed), jobs)
        structured = [(n, e, r, seed + k) for k, (n, e) in enumerate(structured_exprs()) for r in (1, 2)]
        return out + run_tasks(check_structured, structured, jobs)
    if name == "crossroute":
        out = run_tasks(check_crossroute, crossroute_tasks(kernel=check), jobs)
        out += run_tasks(check_noneq, noneq_tasks(), jobs)
        out += run_tasks(check_graph, graph_tasks(), jobs)
        return out + run_tasks(check_brion, brion_tasks(seed), jobs)
    raise KeyError(name)
