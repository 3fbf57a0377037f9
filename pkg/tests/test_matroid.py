import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from orbitcalc.library import matrix_A, matrix_D, six_point_family, small_library
from orbitcalc.matroid import (
    Matroid,
    MatroidError,
    PathMatrix,
    QMatrix,
    RankDeficiencyError,
    from_mask,
    general_matrix,
    identity_matroid,
    matroid_from_matrix,
    parallel_connection,
    partition,
    path_heights,
    random_matrix_with_pattern,
    schubert,
    series_connection,
    uniform,
)

A = six_point_family()["A"]
LIB = small_library()


def test_identity_matrix_bases():
    assert matroid_from_matrix(QMatrix([[1, 0], [0, 1]])).basis_list() == [(1, 2)]


def test_matrix_A_has_17_bases():
    assert len(matroid_from_matrix(matrix_A()).bases) == 17
    assert matroid_from_matrix(matrix_A()) == A


def test_generic_2x3():
    assert len(matroid_from_matrix(general_matrix(2, 3)).bases) == 3


def test_rank_deficiency_carries_rank():
    with pytest.raises(RankDeficiencyError) as info:
        matroid_from_matrix(QMatrix([[1, 2], [2, 4]]))
    assert "1" in str(info.value)


def test_rank_examples():
    assert uniform(2, 3).rank({1, 3}) == 2
    assert A.rank({1, 2, 4}) == 2
    assert A.rank(set()) == 0


def test_connectivity_examples():
    assert uniform(2, 3).is_connected()
    assert not identity_matroid(2).is_connected()
    assert A.is_connected()


def test_truncation_examples():
    assert uniform(3, 4).truncate(2) == uniform(2, 4)
    assert A.truncate(3) == A
    assert A.truncate(2) == uniform(2, 6)
    with pytest.raises(MatroidError):
        A.truncate(0)


def test_direct_sum_and_connections():
    pt = uniform(1, 1)
    assert pt.direct_sum(pt).basis_list() == [(1, 2)]
    g = general_matrix(1, 2)
    par = matroid_from_matrix(parallel_connection(g, general_matrix(1, 2, seed=1)))
    assert (par.n, par.d) == (3, 1) and len(par.bases) == 3
    assert matroid_from_matrix(series_connection(g, general_matrix(1, 2, seed=1))) == uniform(2, 3)


def test_zero_glued_column_rejected():
    with pytest.raises(MatroidError):
        parallel_connection(QMatrix([[1, 0]]), QMatrix([[1, 1]]))
    with pytest.raises(MatroidError):
        series_connection(QMatrix([[1, 1]]), QMatrix([[0, 1]]))


def test_constructors():
    d = schubert([2, 3], [[4, 5, 6], [1, 2, 3, 4, 5, 6]])
    assert d == six_point_family()["D"] == matroid_from_matrix(matrix_D())
    three = uniform(1, 1).direct_sum(uniform(1, 1)).direct_sum(uniform(1, 1))
    assert uniform(2, 3) == three.truncate(2)
    p = partition([[1, 2], [3], [4, 5]])
    assert len(p.bases) == 8
    assert {(1, 2), (4, 5)}.isdisjoint(p.basis_list())


def test_schubert_basis_rule():
    ranks, sets = [1, 2, 3], [[1, 2], [1, 2, 3, 4], [1, 2, 3, 4, 5]]
    m = schubert(ranks, sets)
    expected = [
        s for s in combinations(range(1, 6), 3) if all(len(set(s) & set(x)) <= k for k, x in zip(ranks, sets))
    ]
    assert m.basis_list() == expected


def test_malformed_chain_and_partition():
    with pytest.raises(MatroidError):
        schubert([2, 1], [[1, 2], [1, 2, 3]])
    with pytest.raises(MatroidError):
        schubert([1, 2], [[1, 2], [1, 3]])
    with pytest.raises(MatroidError):
        partition([[1, 2], [2, 3]])
    with pytest.raises(MatroidError):
        partition([[1, 2, 3]])


def test_bad_basis_sets_rejected():
    with pytest.raises(MatroidError):
        Matroid(4, [(1, 2), (3, 4)])
    with pytest.raises(MatroidError):
        Matroid(3, [(1, 2), (3,)])


def test_gale_examples():
    assert uniform(2, 3).gale_first_basis([1, 2, 3]) == (1, 2)
    assert A.gale_first_basis([1, 2, 3, 4, 5, 6]) == (1, 2, 3)
    assert A.gale_first_basis([4, 2, 1, 3, 5, 6]) == (4, 2, 3)


def test_path_heights_examples():
    _, h = path_heights(PathMatrix([["1", "t"]]))
    assert h == {(1,): 0, (2,): 1}
    m, h = path_heights(PathMatrix([["1", "0", "1", "1"], ["0", "1", "1", "t"]]))
    assert m == uniform(2, 4)
    assert h == {(1, 2): 0, (1, 3): 0, (1, 4): 1, (2, 3): 0, (2, 4): 0, (3, 4): 0}
    _, h = path_heights(PathMatrix([["1", "2", "0"], ["0", "1", "3"]]))
    assert set(h.values()) == {0}


def test_path_heights_rank_deficient():
    with pytest.raises(RankDeficiencyError):
        path_heights(PathMatrix([["t", "2*t"], ["1", "2"]]))


def test_json_round_trips():
    for m in list(LIB.values())[:10]:
        assert Matroid.from_json(m.to_json()) == m
    q = matrix_A()
    assert QMatrix.from_json(q.to_json()) == q
    pm = PathMatrix([["1", "3 - 2*t + t^2"]])
    assert PathMatrix.from_json(pm.to_json()).entries == pm.entries


def test_realizations_are_seeded():
    assert general_matrix(2, 4, seed=5) == general_matrix(2, 4, seed=5)
    assert general_matrix(2, 4, seed=5) != general_matrix(2, 4, seed=6)


# ---- properties ---------------------------------------------------------

lib_matroids = st.sampled_from(sorted(LIB.values(), key=lambda m: (m.n, sorted(m.bases))))


@given(st.integers(0, 10**6))
def test_row_operations_preserve_matroid(seed):
    rng = random.Random(seed)
    d, n = rng.randint(1, 3), rng.randint(3, 6)
    q = random_matrix_with_pattern(d, n, rng)
    if q.rank() < d:
        return
    g = [[rng.randint(-5, 5) for _ in range(d)] for _ in range(d)]
    if QMatrix(g).rank() < d:
        return
    assert matroid_from_matrix(q.left_multiply(g)) == matroid_from_matrix(q)


@given(lib_matroids, st.integers(1, 4), st.integers(1, 4))
def test_truncation_composes(m, k, j):
    assert m.truncate(k).truncate(j) == m.truncate(min(j, k))


@given(lib_matroids, st.randoms(use_true_random=False))
def test_gale_basis_is_lexicographic_minimum(m, rnd):
    order = list(range(1, m.n + 1))
    rnd.shuffle(order)
    b = m.gale_first_basis(order)
    assert m.is_basis(b)
    pos = {e: k for k, e in enumerate(order)}
    key = lambda s: sorted(pos[e] for e in s)
    assert key(b) == min(key(from_mask(x)) for x in m.bases)


@given(lib_matroids, lib_matroids)
def test_direct_sum_never_connected(m1, m2):
    assert not m1.direct_sum(m2).is_connected()


@given(lib_matroids)
def test_rank_axioms(m):
    full = range(1, m.n + 1)
    subsets = [set(s) for k in range(m.n + 1) for s in combinations(full, k)]
    assert m.rank(set()) == 0
    for s in subsets:
        assert m.rank(s) <= len(s)
        for t in subsets:
            if s <= t:
                assert m.rank(s) <= m.rank(t)
            assert m.rank(s | t) + m.rank(s & t) <= m.rank(s) + m.rank(t)


def test_rank_is_max_intersection_with_bases():
    for m in LIB.values():
        for k in range(m.n + 1):
            for s in combinations(range(1, m.n + 1), k):
                assert m.rank(set(s)) == max(len(set(s) & set(from_mask(b))) for b in m.bases)


def test_relabel_matches_permuted_matrix():
    q = matrix_A()
    for perm in list(permutations(range(1, 7)))[::97]:
        cols = q.columns()
        permuted = QMatrix.from_columns([cols[p - 1] for p in perm])
        assert matroid_from_matrix(permuted) == A.relabel(perm)


def test_concurrent_rank_queries():
    from concurrent.futures import ThreadPoolExecutor

    m = Matroid.from_json(A.to_json())
    subsets = [set(s) for s in combinations(range(1, 7), 3)]
    with ThreadPoolExecutor(4) as pool:
        got = list(pool.map(m.rank, subsets))
    assert got == [A.rank(s) for s in subsets]
