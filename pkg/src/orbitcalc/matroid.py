"""Matroids stored by their bases, exact rational matrices, and the constructors
used throughout: truncation, direct sum, series and parallel connection,
uniform, Schubert and partition matroids, and degenerating matrix paths.

Ground sets are ``1..n`` in every public function.  Bases are kept internally
as bitmasks (bit ``i-1`` for element ``i``).
"""

from __future__ import annotations

import random
import threading
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .poly import Poly, format_coeff, parse_coeff, parse_poly

SEED_RANGE = 10**6
MAX_RETRIES = 16


class MatroidError(ValueError):
    pass


class RankDeficiencyError(MatroidError):
    def __init__(self, rank: int, expected: int):
        super().__init__(f"matrix has rank {rank}, expected {expected}")
        self.rank = rank
        self.expected = expected


class GenericityError(MatroidError):
    pass


def to_mask(subset: Iterable[int]) -> int:
    m = 0
    for i in subset:
        m |= 1 << (i - 1)
    return m


def from_mask(mask: int) -> tuple:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(x: int) -> int:
    return bin(x).count("1")


class Matroid:
    """A matroid on ``1..n`` given by its bases."""

    __slots__ = ("n", "d", "bases", "_rank", "_lock", "__weakref__")

    def __init__(self, n: int, bases: Iterable, *, check: bool = True):
        masks = set()
        for b in bases:
            masks.add(b if isinstance(b, int) else to_mask(b))
        if not masks:
            raise MatroidError("a matroid needs at least one basis")
        sizes = {popcount(b) for b in masks}
        if len(sizes) != 1:
            raise MatroidError("bases of different sizes")
        full = (1 << n) - 1
        if any(b & ~full for b in masks):
            raise MatroidError("basis element outside ground set")
        self.n = n
        self.d = sizes.pop()
        self.bases = frozenset(masks)
        self._rank = None
        self._lock = threading.Lock()
        if check and n <= 8 and not self.satisfies_exchange():
            raise MatroidError("basis exchange axiom fails")

    def __reduce__(self):
        return (_rebuild_matroid, (self.n, tuple(sorted(self.bases))))

    # queries ----------------------------------------------------------
    def satisfies_exchange(self) -> bool:
        bs = self.bases
        for b1 in bs:
            for b2 in bs:
                diff1 = b1 & ~b2
                diff2 = b2 & ~b1
                x = diff1
                while x:
                    low = x & -x
                    x ^= low
                    ok = False
                    y = diff2
                    while y:
                        lowy = y & -y
                        y ^= lowy
                        if (b1 ^ low) | lowy in bs:
                            ok = True
                            break
                    if not ok:
                        return False
        return True

    def basis_list(self) -> list:
        return sorted(from_mask(b) for b in self.bases)

    def rank_table(self) -> np.ndarray:
        """rk(A) for every A, indexed by bitmask."""
        if self._rank is None:
            with self._lock:
                if self._rank is None:
                    subsets = np.arange(1 << self.n, dtype=np.int64)
                    table = np.zeros(1 << self.n, dtype=np.int64)
                    for b in self.bases:
                        inter = subsets & b
                        cnt = np.zeros_like(inter)
                        for i in range(self.n):
                            cnt += (inter >> i) & 1
                        np.maximum(table, cnt, out=table)
                    table.setflags(write=False)
                    self._rank = table
        return self._rank

    def rank(self, subset) -> int:
        mask = subset if isinstance(subset, int) else to_mask(subset)
        return int(self.rank_table()[mask])

    def is_independent(self, subset) -> bool:
        mask = subset if isinstance(subset, int) else to_mask(subset)
        return self.rank(mask) == popcount(mask)

    def is_basis(self, subset) -> bool:
        mask = subset if isinstance(subset, int) else to_mask(subset)
        return mask in self.bases

    def loops(self) -> tuple:
        return tuple(i for i in range(1, self.n + 1) if self.rank(1 << (i - 1)) == 0)

    def is_connected(self) -> bool:
        """P_M is full-dimensional in the hypersimplex, i.e. no additive splitting."""
        t = self.rank_table()
        full = (1 << self.n) - 1
        for a in range(1, full):
            if a & 1 and t[a] + t[full ^ a] == self.d:
                return False
        return self.n >= 1

    def components(self) -> list:
        """Connected components as sorted tuples."""
        t = self.rank_table()
        full = (1 << self.n) - 1
        remaining = full
        comps = []
        while remaining:
            low = remaining & -remaining
            # smallest separator containing the lowest remaining element
            best = remaining
            sub = remaining
            while sub:
                if sub & low and t[sub] + t[remaining ^ sub] == t[remaining] and popcount(sub) < popcount(best):
                    best = sub
                sub = (sub - 1) & remaining
            comps.append(from_mask(best))
            remaining ^= best
        return comps

    def gale_first_basis(self, order: Sequence[int]) -> tuple:
        """Greedy basis scanning ``order``; the order-lexicographically first basis."""
        t = self.rank_table()
        cur = 0
        picked = []
        for e in order:
            nxt = cur | (1 << (e - 1))
            if t[nxt] > t[cur]:
                cur = nxt
                picked.append(e)
        return tuple(picked)

    # constructions ----------------------------------------------------
    def truncate(self, k: int) -> "Matroid":
        if k <= 0:
            raise MatroidError("truncation rank must be positive")
        if k >= self.d:
            return self
        t = self.rank_table()
        new = [to_mask(c) for c in combinations(range(1, self.n + 1), k)]
        return Matroid(self.n, [m for m in new if t[m] == k], check=False)

    def direct_sum(self, other: "Matroid") -> "Matroid":
        return Matroid(self.n + other.n, [b | (c << self.n) for b in self.bases for c in other.bases], check=False)

    def delete(self, i: int) -> "Matroid":
        """Deletion of element i (elements above i shift down)."""
        bit = 1 << (i - 1)
        low = bit - 1

        def squeeze(m):
            return (m & low) | ((m >> 1) & ~low)

        keep = [b for b in self.bases if not b & bit]
        if keep:
            return Matroid(self.n - 1, [squeeze(b) for b in keep], check=False)
        return Matroid(self.n - 1, [squeeze(b & ~bit) for b in self.bases], check=False)

    def relabel(self, perm: Sequence[int]) -> "Matroid":
        """Element ``i`` of the result is element ``perm[i-1]`` of self."""
        inv = {p: i + 1 for i, p in enumerate(perm)}
        return Matroid(self.n, [to_mask(inv[e] for e in from_mask(b)) for b in self.bases], check=False)

    def add_coloop(self) -> "Matroid":
        """Direct sum with a single free point, appended as element n+1."""
        return self.direct_sum(uniform(1, 1, realize=False))

    # protocol ---------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Matroid) and self.n == other.n and self.bases == other.bases

    def __hash__(self):
        return hash((self.n, self.bases))

    def __repr__(self):
        return f"Matroid(n={self.n}, d={self.d}, bases={len(self.bases)})"

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "bases": [list(b) for b in self.basis_list()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Matroid":
        try:
            n = int(obj["n"])
            bases = [tuple(int(x) for x in b) for b in obj["bases"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MatroidError("matroid JSON needs 'n' and 'bases'") from exc
        m = cls(n, bases)
        if "d" in obj and int(obj["d"]) != m.d:
            raise MatroidError("declared rank does not match bases")
        return m


def _rebuild_matroid(n, bases):
    return Matroid(n, bases, check=False)


# ----------------------------------------------------------------------
# matrices


class QMatrix:
    """A d x n matrix with rational entries."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(Fraction(x) for x in row) for row in entries)
        if rows and len({len(r) for r in rows}) != 1:
            raise MatroidError("ragged matrix")
        self.entries = rows

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def column(self, j: int) -> tuple:
        """Column j (1-indexed)."""
        return tuple(row[j - 1] for row in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(1, self.cols + 1)]

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "QMatrix":
        if not cols:
            return cls([])
        d = len(cols[0])
        return cls([[c[i] for c in cols] for i in range(d)])

    def rank(self) -> int:
        return linalg.rank(self.entries)

    def left_multiply(self, g: Sequence[Sequence]) -> "QMatrix":
        g = [[Fraction(x) for x in row] for row in g]
        return QMatrix([[sum(gi[k] * self.entries[k][j] for k in range(self.rows)) for j in range(self.cols)] for gi in g])

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols})"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[format_coeff(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "QMatrix":
        try:
            m = cls([[parse_coeff(x) for x in row] for row in obj["entries"]])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MatroidError("matrix JSON needs 'entries' of rational strings") from exc
        if ("rows" in obj and int(obj["rows"]) != m.rows) or ("cols" in obj and int(obj["cols"]) != m.cols):
            raise MatroidError("declared shape does not match entries")
        return m


def matroid_from_matrix(m: QMatrix, *, check: bool = False) -> Matroid:
    """Column matroid; bases are the d-subsets with nonzero minor."""
    d, n = m.rows, m.cols
    rk = m.rank()
    if rk < d or d == 0:
        raise RankDeficiencyError(rk, d)
    rows = linalg.integer_rows(m.entries)
    bases = []
    for c in combinations(range(n), d):
        if linalg.det_int([[row[j] for j in c] for row in rows]):
            bases.append(sum(1 << j for j in c))
    return Matroid(n, bases, check=check)


def direct_sum_matrix(m1: QMatrix, m2: QMatrix) -> QMatrix:
    z = Fraction(0)
    top = [list(r) + [z] * m2.cols for r in m1.entries]
    bot = [[z] * m1.cols + list(r) for r in m2.entries]
    return QMatrix(top + bot)


def parallel_connection(m1: QMatrix, m2: QMatrix) -> QMatrix:
    """Glue the last column of m1 to the first of m2 (quotient of the direct sum)."""
    x, y = m1.column(m1.cols), m2.column(1)
    if not any(x) or not any(y):
        raise MatroidError("glued columns must be nonzero")
    total = direct_sum_matrix(m1, m2)
    w = list(x) + [-a for a in y]
    p = next(i for i, a in enumerate(w) if a)

    def proj(col):
        f = col[p] / w[p]
        v = [a - f * b for a, b in zip(col, w)]
        return v[:p] + v[p + 1:]

    cols = total.columns()
    keep = cols[: m1.cols] + cols[m1.cols + 1:]
    return QMatrix.from_columns([proj(c) for c in keep])


def series_connection(m1: QMatrix, m2: QMatrix) -> QMatrix:
    """Direct sum with the last column of m1 and first of m2 replaced by their sum."""
    x, y = m1.column(m1.cols), m2.column(1)
    if not any(x) or not any(y):
        raise MatroidError("glued columns must be nonzero")
    cols = direct_sum_matrix(m1, m2).columns()
    glued = [a + b for a, b in zip(cols[m1.cols - 1], cols[m1.cols])]
    return QMatrix.from_columns(cols[: m1.cols - 1] + [glued] + cols[m1.cols + 1:])


def series_parallel(m1: QMatrix, m2: QMatrix, mode: str) -> QMatrix:
    if mode in ("parallel", "P"):
        return parallel_connection(m1, m2)
    if mode in ("series", "S"):
        return series_connection(m1, m2)
    raise MatroidError(f"unknown connection mode {mode!r}")


# ----------------------------------------------------------------------
# constructors with certified generic realizations


def _rng(seed) -> random.Random:
    return random.Random(seed)


def _entry(rng: random.Random) -> int:
    while True:
        x = rng.randint(-SEED_RANGE, SEED_RANGE)
        if x:
            return x


def certify(build, expected: Matroid, seed=0, retries: int = MAX_RETRIES) -> QMatrix:
    """Draw matrices from ``build(rng)`` until one realizes ``expected`` exactly."""
    rng = _rng(seed)
    for _ in range(retries):
        m = build(rng)
        try:
            got = matroid_from_matrix(m)
        except RankDeficiencyError:
            continue
        if got == expected:
            return m
    raise GenericityError(f"no generic realization found after {retries} attempts")


def uniform(d: int, n: int, *, realize: bool = False, seed=0) -> Matroid:
    if not 0 < d <= n:
        raise MatroidError("uniform matroid needs 0 < d <= n")
    m = Matroid(n, [to_mask(c) for c in combinations(range(1, n + 1), d)], check=False)
    if realize:
        uniform_matrix(d, n, seed)
    return m


def uniform_matrix(d: int, n: int, seed=0) -> QMatrix:
    expected = uniform(d, n)
    return certify(lambda g: QMatrix([[_entry(g) for _ in range(n)] for _ in range(d)]), expected, seed)


def general_matrix(d: int, n: int, seed=0) -> QMatrix:
    """A certified-general d x n matrix (its matroid is uniform)."""
    return uniform_matrix(d, n, seed)


def _check_chain(ranks: Sequence[int], sets: Sequence[Iterable[int]]):
    if len(ranks) != len(sets) or not ranks:
        raise MatroidError("Schubert data needs one rank per set")
    sets = [frozenset(s) for s in sets]
    if any(b < a for a, b in zip(ranks, ranks[1:])) or ranks[0] < 0:
        raise MatroidError("ranks must be nondecreasing and nonnegative")
    for a, b in zip(sets, sets[1:]):
        if not a < b:
            raise MatroidError("sets must be strictly nested")
    if not sets[0]:
        raise MatroidError("sets must be nonempty")
    n = max(sets[-1])
    if sets[-1] != frozenset(range(1, n + 1)):
        raise MatroidError("last set must be the whole ground set 1..n")
    return sets, n


def schubert(ranks: Sequence[int], sets: Sequence[Iterable[int]], *, realize: bool = True, seed=0) -> Matroid:
    """Sch(r_1..r_l; X_1 < .. < X_l): d-subsets S with |S & X_i| <= r_i."""
    sets, n = _check_chain(ranks, sets)
    d = ranks[-1]
    masks = [to_mask(s) for s in sets]
    bases = []
    for c in combinations(range(1, n + 1), d):
        m = to_mask(c)
        if all(popcount(m & x) <= r for x, r in zip(masks, ranks)):
            bases.append(m)
    if not bases:
        raise MatroidError("Schubert data admits no basis")
    mat = Matroid(n, bases, check=False)
    if realize:
        schubert_matrix(ranks, sets, seed, expected=mat)
    return mat


def schubert_matrix(ranks, sets, seed=0, expected: Matroid | None = None) -> QMatrix:
    sets, n = _check_chain(ranks, sets)
    if expected is None:
        expected = schubert(ranks, sets, realize=False)
    d = ranks[-1]
    level = {}
    for j in range(1, n + 1):
        level[j] = next(i for i, s in enumerate(sets) if j in s)

    def build(g):
        cols = []
        for j in range(1, n + 1):
            k = ranks[level[j]]
            cols.append([_entry(g) if i < k else 0 for i in range(d)])
        return QMatrix.from_columns(cols)

    return certify(build, expected, seed)


def _check_blocks(blocks: Sequence[Iterable[int]]):
    blocks = [tuple(sorted(b)) for b in blocks]
    if len(blocks) < 2 or any(not b for b in blocks):
        raise MatroidError("a partition matroid needs at least two nonempty blocks")
    flat = sorted(x for b in blocks for x in b)
    n = len(flat)
    if flat != list(range(1, n + 1)):
        raise MatroidError("blocks must partition 1..n")
    return blocks, n


def partition(blocks: Sequence[Iterable[int]], *, realize: bool = True, seed=0) -> Matroid:
    """Rank-2 matroid whose parallel classes are the blocks."""
    blocks, n = _check_blocks(blocks)
    owner = {x: k for k, b in enumerate(blocks) for x in b}
    bases = [to_mask((i, j)) for i, j in combinations(range(1, n + 1), 2) if owner[i] != owner[j]]
    mat = Matroid(n, bases, check=False)
    if realize:
        partition_matrix(blocks, seed, expected=mat)
    return mat


def partition_matrix(blocks, seed=0, expected: Matroid | None = None) -> QMatrix:
    blocks, n = _check_blocks(blocks)
    if expected is None:
        expected = partition(blocks, realize=False)
    owner = {x: k for k, b in enumerate(blocks) for x in b}

    def build(g):
        dirs = [(_entry(g), _entry(g)) for _ in blocks]
        cols = []
        for j in range(1, n + 1):
            lam = _entry(g)
            v = dirs[owner[j]]
            cols.append([lam * v[0], lam * v[1]])
        return QMatrix.from_columns(cols)

    return certify(build, expected, seed)


def identity_matroid(n: int) -> Matroid:
    return Matroid(n, [(1 << n) - 1], check=False)


def random_matrix_with_pattern(d: int, n: int, rng: random.Random, zero_prob: float = 0.3, small: bool = True) -> QMatrix:
    """Random integer matrix with sporadic zeros and small entries, for
    producing non-uniform matroids in randomized tests."""
    hi = 3 if small else SEED_RANGE
    rows = [[0 if rng.random() < zero_prob else rng.randint(-hi, hi) for _ in range(n)] for _ in range(d)]
    return QMatrix(rows)


# ----------------------------------------------------------------------
# degenerating paths


class PathMatrix:
    """A d x n matrix with entries in Q[t]."""

    __slots__ = ("entries",)
    VARS = ("t",)

    def __init__(self, entries: Sequence[Sequence]):
        rows = []
        for row in entries:
            cur = []
            for x in row:
                if isinstance(x, Poly):
                    cur.append(x.embed(self.VARS))
                elif isinstance(x, str):
                    cur.append(parse_poly(x, self.VARS))
                else:
                    cur.append(Poly.const(self.VARS, Fraction(x)))
            rows.append(tuple(cur))
        if rows and len({len(r) for r in rows}) != 1:
            raise MatroidError("ragged matrix")
        self.entries = tuple(rows)

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0]) if self.entries else 0

    def minor(self, cols: Sequence[int]) -> Poly:
        return linalg.det_poly([[row[j] for j in cols] for row in self.entries])

    def at(self, t) -> QMatrix:
        return QMatrix([[x.evaluate({"t": Fraction(t)}) for x in row] for row in self.entries])

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": [[str(x) for x in row] for row in self.entries]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "PathMatrix":
        try:
            return cls([[str(x) for x in row] for row in obj["entries"]])
        except (KeyError, TypeError) as exc:
            raise MatroidError("path matrix JSON needs 'entries'") from exc


def path_heights(md: PathMatrix) -> tuple:
    """(generic matroid, {basis tuple: ord_t det}) for a matrix path."""
    d, n = md.rows, md.cols
    heights = {}
    for c in combinations(range(n), d):
        det = md.minor(c)
        if det:
            heights[tuple(j + 1 for j in c)] = min(e[0] for e in det.terms)
    if not heights:
        raise RankDeficiencyError(linalg.rank([[x.constant_term() for x in r] for r in md.entries]), d)
    mat = Matroid(n, list(heights), check=False)
    return mat, heights


def all_permutations(n: int):
    return permutations(range(1, n + 1))
