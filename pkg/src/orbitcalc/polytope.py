"""Rank polytopes: lattice points of shifted dilates, facets, shadow-facet and
regular subdivisions, indicator checks and the Brion-type rational sum.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .matroid import Matroid, MatroidError, from_mask, popcount, to_mask


# ----------------------------------------------------------------------
# lattice points


def lattice_points(m: Matroid, r: int, mode: str = "rank") -> list:
    """Integer e >= 0 with sum_A e <= (r+1) rk(A) - 1 for every nonempty A.

    ``mode="rank"`` additionally imposes sum(e) = (r+1) d - 1;
    ``mode="independence"`` does not.  Sorted lexicographically.
    """
    if mode not in ("rank", "independence"):
        raise ValueError(f"unknown mode {mode!r}")
    n, s = m.n, r + 1
    caps = [s * int(x) - 1 for x in m.rank_table()]
    target = s * m.d - 1 if mode == "rank" else None
    out = []
    e = [0] * n

    def rec(k, sums, total):
        if k == n:
            if target is None or total == target:
                out.append(tuple(e))
            return
        if target is not None and total + r * (n - k) < target:
            return
        bit = 1 << k
        for v in range(0, r + 1):
            if target is not None and total + v > target:
                break
            new = [x + v for x in sums]
            if any(new[a] > caps[a | bit] for a in range(len(sums))):
                # every larger v fails the same subset
                break
            e[k] = v
            rec(k + 1, sums + new, total + v)
        e[k] = 0

    rec(0, [0], 0)
    out.sort()
    return out


def lattice_transform(points: Iterable[Sequence[int]], r: int, z: Sequence) -> Fraction:
    """sum over points of prod z_i^(r - e_i)."""
    total = Fraction(0)
    for e in points:
        t = Fraction(1)
        for zi, ei in zip(z, e):
            t *= Fraction(zi) ** (r - ei)
        total += t
    return total


# ----------------------------------------------------------------------
# facets


@dataclass(frozen=True)
class Facet:
    """Inequality sum_{i in subset} x_i <= rank, facet-defining on P_M."""

    subset: tuple
    rank: int
    tight: frozenset = field(compare=False, repr=False)

    n: int = field(default=0, compare=False, repr=False)
    d: int = field(default=0, compare=False, repr=False)

    @property
    def kind(self) -> str:
        """``upper-bound`` (x_i <= 1), ``lower-bound`` (x_i >= 0, written as the
        complement of i at full rank) or ``flat``."""
        if len(self.subset) == 1 and self.rank == 1:
            return "upper-bound"
        if self.n and len(self.subset) == self.n - 1 and self.rank == self.d:
            return "lower-bound"
        return "flat"


def vertex(mask: int, n: int) -> list:
    return [(mask >> i) & 1 for i in range(n)]


def affine_dim(masks: Iterable[int], n: int) -> int:
    return linalg.affine_rank([vertex(b, n) for b in masks])


def is_full_dimensional(m: Matroid) -> bool:
    return m.n >= 1 and affine_dim(m.bases, m.n) == m.n - 1


def flacets(m: Matroid) -> list:
    """Facet-defining rank inequalities of a full-dimensional rank polytope.

    Lower bounds x_i >= 0 appear as the subset of all elements but i.
    """
    if not m.is_connected():
        raise MatroidError("facets are computed for connected matroids only")
    n = m.n
    t = m.rank_table()
    seen = {}
    order = sorted(range(1, (1 << n) - 1), key=lambda a: (popcount(a), from_mask(a)))
    for a in order:
        rk = int(t[a])
        tight = frozenset(b for b in m.bases if popcount(b & a) == rk)
        if len(tight) < n - 1 or tight in seen:
            continue
        if affine_dim(tight, n) == n - 2:
            seen[tight] = Facet(from_mask(a), rk, tight, n, m.d)
    return sorted(seen.values(), key=lambda f: (len(f.subset), f.subset))


# ----------------------------------------------------------------------
# subdivisions


@dataclass
class Subdivision:
    parent: Matroid
    cells: list  # list of (Matroid, sign)

    def to_json(self) -> dict:
        return {
            "parent": self.parent.to_json(),
            "cells": [{"matroid": c.to_json(), "sign": s} for c, s in self.cells],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Subdivision":
        return cls(
            Matroid.from_json(obj["parent"]),
            [(Matroid.from_json(c["matroid"]), int(c["sign"])) for c in obj["cells"]],
        )

    def matroids(self) -> list:
        return [c for c, _ in self.cells]


def exchange_closure(masks: Iterable[int], i: int, j: int) -> set:
    """masks together with (B - j) + i for every B containing j but not i."""
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    out = set(masks)
    for b in list(out):
        if b & bj and not b & bi:
            out.add((b & ~bj) | bi)
    return out


def shadow_facets(m: Matroid, i: int, j: int) -> list:
    """Facets of P_M whose outward normal pairs positively with e_i - e_j."""
    out = []
    for f in flacets(m):
        if i in f.subset and j not in f.subset:
            out.append(f)
    return out


def shadow_facet_subdivision(m: Matroid, i: int, j: int):
    """Subdivision of (P_M + R>=0 (e_i - e_j)) within the hypersimplex.

    Returns ``(Mbig, cells)``; ``cells[0]`` is M itself and every further cell
    comes from a shadow facet.  Cells that are not full-dimensional are dropped.
    """
    if i == j or not (1 <= i <= m.n and 1 <= j <= m.n):
        raise MatroidError("direction needs two distinct elements of the ground set")
    big = Matroid(m.n, exchange_closure(m.bases, i, j))
    if big == m:
        return big, [m]
    if not m.is_connected():
        raise MatroidError("shadow-facet subdivision needs a connected matroid")
    cells = [m]
    for f in shadow_facets(m, i, j):
        cell = Matroid(m.n, exchange_closure(f.tight, i, j))
        if cell.is_connected() and cell not in cells:
            cells.append(cell)
    return big, cells


def shadow_subdivision(m: Matroid, i: int, j: int) -> Subdivision:
    big, cells = shadow_facet_subdivision(m, i, j)
    return Subdivision(big, [(c, 1) for c in cells])


def _normalize_heights(m: Matroid, heights: Mapping) -> dict:
    out = {}
    for k, v in heights.items():
        mask = k if isinstance(k, int) else to_mask(k)
        out[mask] = Fraction(v)
    missing = [b for b in m.bases if b not in out]
    if missing:
        raise MatroidError(f"heights missing for bases {[from_mask(b) for b in missing]}")
    return out


def regular_subdivision(m: Matroid, heights: Mapping) -> Subdivision:
    """Lower-hull subdivision of P_M lifted by ``heights`` (basis -> number)."""
    if not is_full_dimensional(m):
        raise MatroidError("regular subdivision needs a full-dimensional rank polytope")
    h = _normalize_heights(m, heights)
    n = m.n
    bases = sorted(m.bases)
    coords = {b: vertex(b, n)[:-1] + [1] for b in bases}
    cells: list = []
    for combo in combinations(bases, n):
        if any(all(b in c for b in combo) for c in cells):
            continue
        sol = linalg.solve([coords[b] for b in combo], [h[b] for b in combo])
        if sol is None:
            continue
        tight = []
        ok = True
        for b in bases:
            val = sum(a * x for a, x in zip(sol, coords[b]))
            if val > h[b]:
                ok = False
                break
            if val == h[b]:
                tight.append(b)
        if not ok:
            continue
        s = frozenset(tight)
        if s not in cells and affine_dim(s, n) == n - 1:
            cells.append(s)
    out = []
    for s in sorted(cells, key=lambda c: sorted(c)):
        cell = Matroid(n, s, check=False)
        if not cell.satisfies_exchange():
            raise MatroidError("lifting produced a cell that is not a matroid polytope")
        out.append((cell, 1))
    return Subdivision(m, out)


def faces(m: Matroid) -> list:
    """Vertex sets (frozensets of basis masks) of all nonempty faces of P_M.

    Every face maximizes some weight vector, and weights with values in
    0..n-1 realize every ordered set partition of the ground set.
    """
    n = m.n
    bases = sorted(m.bases)
    vecs = np.array([vertex(b, n) for b in bases], dtype=np.int64)
    weights = np.array(list(product(range(n), repeat=n)), dtype=np.int64).reshape(-1, n)
    scores = weights @ vecs.T
    best = scores.max(axis=1, keepdims=True)
    seen = {frozenset(bases[k] for k in np.nonzero(row)[0]) for row in scores == best}
    return sorted(seen, key=lambda f: (len(f), sorted(f)))


def interior_faces(parent: Matroid, cells: Sequence[Matroid]) -> list:
    """Signed pieces (Matroid, sign) with 1_P = sum sign * 1_F over interior faces F.

    Faces of the cells that do not lie on a facet of P enter with sign
    (-1)^(dim P - dim F); the cells themselves have sign +1.
    """
    n = parent.n
    dim_p = affine_dim(parent.bases, n)
    walls = [f.tight for f in flacets(parent)]
    found = {}
    for c in cells:
        for f in faces(c):
            if f in found or any(f <= w for w in walls):
                continue
            found[f] = (-1) ** (dim_p - affine_dim(f, n))
    ordered = sorted(found, key=lambda f: (-affine_dim(f, n), sorted(f)))
    return [(Matroid(n, f, check=False), found[f]) for f in ordered]


def closed_points(m: Matroid, k: int) -> list:
    """Integer points of the closed dilate k * P_M."""
    n = m.n
    caps = [k * int(x) for x in m.rank_table()]
    target = k * m.d
    out = []
    e = [0] * n

    def rec(i, sums, total):
        if i == n:
            if total == target:
                out.append(tuple(e))
            return
        if total + k * (n - i) < target:
            return
        bit = 1 << i
        for v in range(0, k + 1):
            if total + v > target:
                break
            new = [x + v for x in sums]
            if any(new[a] > caps[a | bit] for a in range(len(sums))):
                break
            e[i] = v
            rec(i + 1, sums + new, total + v)
        e[i] = 0

    rec(0, [0], 0)
    return out


def closed_indicator_check(parent: Matroid, pieces: Sequence, scales: Sequence[int] = (1, 2, 3)) -> bool:
    """Signed indicator identity tested on every lattice point of k * P, boundaries included."""
    for k in scales:
        tally = Counter(closed_points(parent, k))
        for c, s in pieces:
            for e in closed_points(c, k):
                tally[e] -= s
        if any(tally.values()):
            return False
    return True


# ----------------------------------------------------------------------
# indicator checks


def _incidence(n: int) -> np.ndarray:
    subsets = np.arange(1 << n, dtype=np.int64)
    return np.stack([(subsets >> i) & 1 for i in range(n)], axis=1)


def _sample_points(sources: Sequence[Matroid], n: int, d: int, count: int, denom: int, rng: random.Random) -> np.ndarray:
    inc = _incidence(n)
    pools = [sorted(s.bases) for s in sources]
    # hyperplanes containing every source vertex cannot separate anything
    verts = np.array([[b >> i & 1 for i in range(n)] for pool in pools for b in pool], dtype=np.int64)
    vals = inc @ verts.T
    proper = vals.min(axis=1) != vals.max(axis=1)
    pts = []
    attempts = 0
    while len(pts) < count and attempts < 200 * count:
        attempts += 1
        pool = pools[rng.randrange(len(pools))]
        k = 2 * n + 1
        cuts = sorted(rng.sample(range(1, denom), k - 1))
        weights = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
        x = [0] * n
        for w in weights:
            b = pool[rng.randrange(len(pool))]
            for i in range(n):
                if b >> i & 1:
                    x[i] += w
        sums = inc[proper] @ np.array(x, dtype=np.int64)
        if np.any(sums % denom == 0):
            continue
        pts.append(x)
    return np.array(pts, dtype=np.int64).reshape(-1, n)


def _membership(m: Matroid, pts: np.ndarray, denom: int) -> np.ndarray:
    inc = _incidence(m.n)
    sums = pts @ inc.T
    caps = denom * m.rank_table()
    return np.all(sums <= caps[None, :], axis=1)


def indicator_residual(
    parent: Matroid,
    cells: Sequence,
    samples: int = 10000,
    seed=0,
    scales: Sequence[int] = (1, 2, 3),
    denom: int | None = None,
) -> bool:
    """True when sum sign * 1_{P_cell} agrees with 1_{P_parent} at generic
    sample points, and the signed lattice-point multisets agree at each scale."""
    cells = [(c, 1) if isinstance(c, Matroid) else (c[0], int(c[1])) for c in cells]
    n, d = parent.n, parent.d
    if any(c.n != n or c.d != d for c, _ in cells):
        return False
    if denom is None:
        denom = 97 * factorial(n)
    rng = random.Random(seed)
    if samples:
        pts = _sample_points([parent] + [c for c, _ in cells], n, d, samples, denom, rng)
        lhs = _membership(parent, pts, denom).astype(np.int64)
        rhs = np.zeros(len(pts), dtype=np.int64)
        for c, s in cells:
            rhs += s * _membership(c, pts, denom)
        if not np.array_equal(lhs, rhs):
            return False
    for r in scales:
        tally = Counter(lattice_points(parent, r))
        for c, s in cells:
            for e in lattice_points(c, r):
                tally[e] -= s
        if any(tally.values()):
            return False
    return True


# ----------------------------------------------------------------------
# Brion-type sums


def _basis_sigma_table(m: Matroid) -> list:
    return [(sigma, to_mask(m.gale_first_basis(sigma))) for sigma in permutations(range(1, m.n + 1))]


def basis_weights(m: Matroid, z: Sequence, table: list | None = None) -> dict:
    """For each basis B (mask): sum over orders with greedy basis B of
    1 / prod (z_{s(k+1)} - z_{s(k)})."""
    if table is None:
        table = _basis_sigma_table(m)
    z = [Fraction(x) for x in z]
    acc: dict = {}
    for sigma, b in table:
        den = 1
        for a, c in zip(sigma, sigma[1:]):
            den *= z[c - 1] - z[a - 1]
        acc[b] = acc.get(b, 0) + Fraction(1) / den
    return acc


def brion_eval(m: Matroid, r: int, z: Sequence) -> Fraction:
    """sum over orders of prod_{i not in B(order)} z_i^(r+1) / prod of consecutive differences."""
    z = [Fraction(x) for x in z]
    if len(z) != m.n:
        raise ValueError("one coordinate per element")
    if len(set(z)) != len(z):
        raise ValueError("coordinates must be pairwise distinct")
    if any(x == 0 for x in z):
        raise ValueError("coordinates must be nonzero")
    total = Fraction(0)
    full = (1 << m.n) - 1
    for b, w in basis_weights(m, z).items():
        t = w
        rest = full & ~b
        for i in range(m.n):
            if rest >> i & 1:
                t *= z[i] ** (r + 1)
        total += t
    return total
