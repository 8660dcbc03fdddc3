import itertools

import numpy as np
import pytest

from cyclestop.graphs import (
    complete,
    complete_bipartite,
    cycle,
    d_split_table,
    path,
    star,
    two_triangles,
)
from cyclestop.matroids import (
    IntPolynomial,
    Matroid,
    MatrixParseError,
    beta_invariant,
    char_poly,
    char_poly_deriv_at_1,
    d_matroid,
    enumerate_flats,
    expected_stop_matroid,
    gf_rank,
    graphic,
    lemma_flat_sum,
    linear_gf,
    parse_linear_text,
    prop_mu_contraction,
    prop_mu_intermediate,
    prop_mu_prank,
    theorem_avg_matroid,
    uniform,
)

U23_GF2_ROWS = [[1, 0, 1], [0, 1, 1]]


def _check_rank_axioms(m: Matroid):
    n = len(m)
    full = 1 << n
    rank = m.rank_mask
    for mask in range(full):
        r = rank(mask)
        assert 0 <= r <= mask.bit_count()
        for i in range(n):
            bit = 1 << i
            if mask & bit:
                continue
            up = rank(mask | bit)
            assert r <= up <= r + 1
    # submodularity on all pairs for small ground sets
    if n <= 5:
        for a in range(full):
            for b in range(full):
                assert rank(a) + rank(b) >= rank(a | b) + rank(a & b)


# ---------------------------------------------------------------------------
# constructors and rank oracles

def test_uniform_ranks():
    m = uniform(2, 4)
    assert m.rank([]) == 0
    assert m.rank([0]) == 1
    assert m.rank([0, 1]) == 2
    assert m.rank([0, 1, 2]) == 2
    assert m.full_rank == 2
    _check_rank_axioms(m)


def test_uniform_validation():
    with pytest.raises(ValueError):
        uniform(3, 2)
    with pytest.raises(ValueError):
        uniform(-1, 2)


def test_graphic_ranks():
    g = complete(4)
    m = graphic(g)
    assert m.elements == g.edges
    assert m.full_rank == 3
    assert m.rank([(1, 2), (3, 4)]) == 2
    assert m.rank([(1, 2), (1, 3), (2, 3)]) == 2  # triangle has rank 2
    _check_rank_axioms(m)


def test_linear_gf_ranks():
    m = linear_gf(2, U23_GF2_ROWS)
    assert m.full_rank == 2
    assert m.rank([0, 2]) == 2
    assert m.rank([0, 1, 2]) == 2
    _check_rank_axioms(m)
    # third column is the mod-2 sum of the first two
    assert m.closure([0, 1]) == frozenset({0, 1, 2})


def test_submodularity_random_triples_large_ground_sets():
    # ground sets too big for the exhaustive pair scan get sampled triples
    rng = np.random.default_rng(404)
    for m in (graphic(complete_bipartite(3, 4)), graphic(complete(6))):
        n = len(m)
        full = (1 << n) - 1
        for _ in range(1000):
            x = int(rng.integers(0, full + 1))
            free = [i for i in range(n) if not x >> i & 1]
            if len(free) < 2:
                continue
            i, j = rng.choice(len(free), size=2, replace=False)
            e, f = 1 << free[int(i)], 1 << free[int(j)]
            lhs = m.rank_mask(x | e) + m.rank_mask(x | f)
            assert lhs >= m.rank_mask(x | e | f) + m.rank_mask(x)


def test_linear_gf_gf3():
    # four pairwise independent columns over GF(3): a copy of U(2,4)
    m = linear_gf(3, [[1, 0, 1, 1], [0, 1, 1, 2]])
    u = uniform(2, 4)
    for mask in range(1 << 4):
        assert m.rank_mask(mask) == u.rank_mask(mask)


def test_linear_gf_validation():
    with pytest.raises(ValueError):
        linear_gf(4, [[1, 0]])
    with pytest.raises(ValueError):
        linear_gf(2, [[1, 0], [1]])
    with pytest.raises(ValueError):
        linear_gf(2, [])


def test_gf_rank_values():
    assert gf_rank([], 2) == 0
    assert gf_rank([[0, 0]], 2) == 0
    assert gf_rank([[1, 1], [1, 1]], 2) == 1
    assert gf_rank([[1, 2], [2, 4]], 5) == 1  # second row is twice the first
    assert gf_rank([[1, 2], [2, 3]], 5) == 2


def test_matrix_parser():
    m = parse_linear_text("2 2 3\n1 0 1\n0 1 1\n")
    assert m.full_rank == 2
    with pytest.raises(MatrixParseError) as err:
        parse_linear_text("2 2 3\n1 0 1\n0 1\n")
    assert err.value.line == 3
    with pytest.raises(MatrixParseError):
        parse_linear_text("6 1 1\n1\n")


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        Matroid([0, 0, 1], lambda mask: mask.bit_count())


# ---------------------------------------------------------------------------
# closure and flats

def test_closure_uniform():
    m = uniform(2, 4)
    assert m.closure([]) == frozenset()
    assert m.closure([1]) == frozenset({1})
    assert m.closure([0, 3]) == frozenset({0, 1, 2, 3})


def test_closure_graphic():
    m = graphic(complete(4))
    # a spanning path closes to everything
    assert m.closure([(1, 2), (2, 3), (3, 4)]) == frozenset(complete(4).edges)
    # one edge closes to itself
    assert m.closure([(1, 2)]) == frozenset({(1, 2)})


def test_flat_counts():
    assert len(enumerate_flats(uniform(2, 3))) == 5
    assert len(enumerate_flats(uniform(2, 4))) == 6
    assert len(enumerate_flats(uniform(3, 3))) == 8   # free: all subsets
    assert len(enumerate_flats(graphic(complete(3)))) == 5
    assert len(enumerate_flats(graphic(complete(4)))) == 15


def test_flats_against_direct_closure_scan(small_connected):
    # every distinct closure must appear in the lattice, and vice versa
    sample = [g for g in small_connected if g.m <= 8][:40]
    for g in sample:
        m = graphic(g)
        expected = {m.closure_mask(mask) for mask in range(1 << g.m)}
        assert set(m.lattice().flats) == expected, g


def test_lattice_sorted_by_rank():
    lat = enumerate_flats(graphic(two_triangles()))
    assert list(lat.ranks) == sorted(lat.ranks)
    assert lat.ranks[0] == 0 and lat.flats[0] == 0


def test_lattice_cap():
    m = graphic(complete(7))  # 21 edges
    with pytest.raises(ValueError):
        m.lattice()


# ---------------------------------------------------------------------------
# Moebius values and the characteristic polynomial

def test_mobius_u23():
    lat = enumerate_flats(uniform(2, 3))
    assert lat.mobius([], []) == 1
    assert lat.mobius([], [1]) == -1
    assert lat.mobius([], [0, 1, 2]) == 2
    assert lat.mobius([1], [0, 1, 2]) == -1
    assert lat.mobius([1], [1]) == 1


def test_mobius_not_a_flat():
    lat = enumerate_flats(uniform(2, 3))
    with pytest.raises(ValueError):
        lat.mobius([], [0, 1])


def test_mobius_defining_identity():
    # sum of mu(A, C) over flats A <= C <= B vanishes whenever A < B
    for m in (uniform(2, 4), graphic(complete(4)), linear_gf(2, U23_GF2_ROWS)):
        lat = m.lattice()
        k = len(lat)
        for i in range(k):
            fi = lat.flats[i]
            for j in range(k):
                fj = lat.flats[j]
                if i == j or fi & ~fj:
                    continue
                total = sum(
                    lat.mobius_idx(i, kk) for kk in range(k)
                    if not (fi & ~lat.flats[kk]) and not (lat.flats[kk] & ~fj))
                assert total == 0, (m.name, i, j)


def test_char_poly_values():
    assert char_poly(uniform(2, 3)).coeffs == (2, -3, 1)
    assert char_poly(uniform(2, 4)).coeffs == (3, -4, 1)
    assert char_poly(graphic(complete(4))).coeffs == (-6, 11, -6, 1)
    assert char_poly(graphic(path(3))).coeffs == (1, -2, 1)


def test_char_poly_matches_chromatic_for_graphs():
    # for a connected graph, p(x) * x is the chromatic polynomial; check by
    # counting proper colorings directly
    for g in (complete(3), path(4), cycle(4), complete(4)):
        p = char_poly(graphic(g))
        for colors in range(1, 6):
            proper = 0
            for assignment in itertools.product(range(colors), repeat=g.n):
                if all(assignment[u - 1] != assignment[v - 1] for u, v in g.edges):
                    proper += 1
            assert p.evaluate(colors) * colors == proper, (g, colors)


def test_char_poly_monic():
    for m in (uniform(1, 1), uniform(3, 6), graphic(cycle(5)),
              linear_gf(2, U23_GF2_ROWS)):
        p = char_poly(m)
        assert p.degree == m.full_rank
        assert p.coeffs[-1] == 1


def test_char_poly_rejects_loops():
    loopy = linear_gf(2, [[1, 0], [0, 0]])
    assert not loopy.is_loopless
    with pytest.raises(ValueError):
        char_poly(loopy)


def test_deriv_and_beta():
    assert char_poly_deriv_at_1(uniform(2, 3)) == -1
    assert beta_invariant(uniform(2, 3)) == 1
    assert beta_invariant(uniform(2, 4)) == 2
    assert beta_invariant(graphic(complete(4))) == 2
    # an isthmus forces beta to 0 (|E| > 1)
    assert beta_invariant(graphic(path(3))) == 0


def test_int_polynomial_ops():
    p = IntPolynomial.from_coeffs([2, -3, 1, 0])
    assert p.coeffs == (2, -3, 1)
    assert p.degree == 2
    assert p.evaluate(3) == 2
    assert p.derivative().coeffs == (-3, 2)
    assert str(p) == "x^2 - 3*x + 2"
    assert str(IntPolynomial.from_coeffs([0])) == "0"


# ---------------------------------------------------------------------------
# contraction

def test_contract_uniform():
    m = uniform(2, 4)
    c = m.contract([3])
    assert c.elements == (0, 1, 2)
    assert c.full_rank == 1
    # two remaining elements together still have rank 1 more than the flat
    assert c.rank([0, 1]) == 1


def test_contract_requires_flat():
    m = graphic(complete(4))
    with pytest.raises(ValueError):
        m.contract([(1, 2), (1, 3)])  # closure adds (2,3)


def test_contract_by_flat_is_loopless():
    for m in (uniform(2, 4), graphic(complete(4)), graphic(two_triangles()),
              linear_gf(2, U23_GF2_ROWS)):
        for fs in m.lattice().flat_sets():
            assert m.contract(fs).is_loopless, (m.name, fs)


def test_contract_rank_formula():
    m = graphic(complete(4))
    flat = [(1, 2), (1, 3), (2, 3)]
    c = m.contract(flat)
    amask = m.mask_of(flat)
    ra = m.rank_mask(amask)
    for mask in range(1 << len(c)):
        subset = [c.elements[i] for i in range(len(c)) if (mask >> i) & 1]
        expect = m.rank_mask(m.mask_of(subset) | amask) - ra
        assert c.rank_mask(mask) == expect


def test_deriv_interval_vs_contraction_route():
    # p'_{M/A}(1) read off the parent lattice must match differentiating
    # the contraction's own characteristic polynomial
    for m in (uniform(2, 5), graphic(complete(4)), graphic(cycle(5)),
              graphic(star(4)), linear_gf(2, [[1, 0, 1, 1], [0, 1, 1, 0], [0, 0, 1, 1]])):
        lat = m.lattice()
        for i, fs in enumerate(lat.flat_sets()):
            via_interval = lat.deriv_at_1_from(i)
            sub = m.contract(fs)
            if len(sub) == 0:
                via_poly = 0  # empty matroid: p = 1
            else:
                via_poly = char_poly_deriv_at_1(sub)
            assert via_interval == via_poly, (m.name, sorted(fs))


# ---------------------------------------------------------------------------
# the Moebius-sum identities

def _identity_corpus(gf2_matroids):
    mats = [uniform(k, n) for n in range(1, 7) for k in range(1, n + 1)]
    mats += [graphic(g) for g in (complete(3), complete(4), cycle(5), star(5),
                                  path(4), two_triangles())]
    mats += gf2_matroids[:8]
    return mats


def test_prop_mu_pair_sum(gf2_matroids):
    for m in _identity_corpus(gf2_matroids):
        assert prop_mu_intermediate(m) == len(m), m.name


def test_prop_mu_contraction_all_flats(gf2_matroids):
    for m in _identity_corpus(gf2_matroids):
        for fs in m.lattice().flat_sets():
            assert prop_mu_contraction(m, fs) == len(m) - len(fs), (m.name, fs)


def test_prop_mu_contraction_requires_flat():
    with pytest.raises(ValueError):
        prop_mu_contraction(uniform(2, 4), [0, 1])


def test_prop_mu_prank(gf2_matroids):
    for m in _identity_corpus(gf2_matroids):
        assert prop_mu_prank(m) == m.full_rank, m.name


def test_prop_sums_reject_loops():
    loopy = linear_gf(2, [[0, 1], [0, 1]])
    with pytest.raises(ValueError):
        prop_mu_intermediate(loopy)
    with pytest.raises(ValueError):
        prop_mu_prank(loopy)


# ---------------------------------------------------------------------------
# stopping-time counts on matroids

def test_d_matroid_uniform():
    m = uniform(2, 4)
    for e in m.elements:
        assert [d_matroid(m, e, t) for t in range(4)] == [1, 3, 0, 0]


def test_d_matroid_free():
    m = uniform(3, 3)
    for e in m.elements:
        assert [d_matroid(m, e, t) for t in range(3)] == [1, 2, 1]


def test_d_matroid_tolerates_loops():
    m = linear_gf(2, [[1, 0, 1], [0, 0, 1]])  # column 1 is a loop
    assert not m.is_loopless
    # d counts for a non-loop element are still well-defined
    assert d_matroid(m, 0, 0) == 1
    # the loop never escapes any closure
    assert all(d_matroid(m, 1, t) == 0 for t in range(3))


def test_lemma_flat_sum_matches_brute(gf2_matroids):
    for m in _identity_corpus(gf2_matroids):
        for t in range(len(m)):
            brute = sum(d_matroid(m, e, t) for e in m.elements)
            assert lemma_flat_sum(m, t) == brute, (m.name, t)


def test_expected_stop_matroid_values():
    assert expected_stop_matroid(uniform(2, 4), 0) == 2
    assert expected_stop_matroid(uniform(3, 5), 4) == 3
    assert expected_stop_matroid(uniform(4, 4), 1) == 4


def test_theorem_avg_matroid_values():
    assert theorem_avg_matroid(uniform(2, 4)) == 2
    assert theorem_avg_matroid(uniform(1, 5)) == 1
    assert theorem_avg_matroid(graphic(complete(4))) == 3
    assert theorem_avg_matroid(graphic(two_triangles())) == 4
    assert theorem_avg_matroid(linear_gf(2, U23_GF2_ROWS)) == 2


def test_theorem_avg_rejects_loops_and_empty():
    loopy = linear_gf(3, [[0, 1], [0, 2]])
    with pytest.raises(ValueError):
        theorem_avg_matroid(loopy)
    with pytest.raises(ValueError):
        theorem_avg_matroid(uniform(0, 0))


# ---------------------------------------------------------------------------
# cross-representation checks

def test_graphic_matches_graph_route():
    for g in (complete(4), cycle(5), star(5), two_triangles()):
        m = graphic(g)
        table = d_split_table(g)
        for i, e in enumerate(g.edges):
            assert tuple(d_matroid(m, e, t) for t in range(g.m)) == table[i]


def test_u23_gf2_full_agreement():
    u = uniform(2, 3)
    rep = linear_gf(2, U23_GF2_ROWS)
    assert len(u.lattice()) == len(rep.lattice())
    assert [frozenset(fs) for fs in u.lattice().flat_sets()] == \
        [frozenset(fs) for fs in rep.lattice().flat_sets()]
    assert char_poly(u) == char_poly(rep)
    assert beta_invariant(u) == beta_invariant(rep)
    for e in range(3):
        assert [d_matroid(u, e, t) for t in range(3)] == \
            [d_matroid(rep, e, t) for t in range(3)]
        assert expected_stop_matroid(u, e) == expected_stop_matroid(rep, e)
    assert theorem_avg_matroid(u) == theorem_avg_matroid(rep)


def test_contraction_of_corpus_graphs(small_connected):
    # rank formula and looplessness across a varied sample
    sample = [g for g in small_connected if 2 <= g.m <= 7][::60]
    for g in sample:
        m = graphic(g)
        for fs in m.lattice().flat_sets():
            sub = m.contract(fs)
            assert sub.is_loopless
            assert sub.full_rank == m.full_rank - m.rank(fs)
