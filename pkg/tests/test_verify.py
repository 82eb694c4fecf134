from fractions import Fraction

import numpy as np
import pytest
from conftest import build, edge_lists, graph_edges
from hypothesis import given
from hypothesis import strategies as st
from oracles import floyd_warshall, hop_diameter, min_plus_hops, warshall

from hopsets.augment import AugmentSet
from hopsets.boolmat import closure_matrix
from hopsets.errors import OracleCapError
from hopsets.graph import from_edge_list, gen_path, gen_random_dag, gen_random_digraph, randomize_weights
from hopsets.hopset import HopsetParams, cfr_build, folklore_hopset
from hopsets.search import dijkstra
from hopsets.shortcut import BuildParams, build_shortcut, folklore_shortcut, jls_build
from hopsets.verify import (SweepRow, density_sweep, eps_bound, hopbound_by_search, tc_oracle,
                            verify_hopset, verify_shortcut)


def wchain(n):
    return from_edge_list([(i, i + 1) for i in range(n - 1)], n, weights=[1] * (n - 1))


def test_tc_oracle_examples():
    assert np.array_equal(tc_oracle(gen_path(3)), np.triu(np.ones((3, 3), dtype=bool)))
    assert np.array_equal(tc_oracle(from_edge_list([], 4)), np.eye(4, dtype=bool))
    with pytest.raises(OracleCapError):
        tc_oracle(gen_path(10), cap=9)


@pytest.mark.parametrize("seed", range(50))
def test_tc_oracle_agrees_with_matrix_closure(seed):
    g = gen_random_digraph(40, 90, seed)
    assert np.array_equal(tc_oracle(g), closure_matrix(g).to_dense())


def test_verify_shortcut_examples():
    g = gen_path(4)
    assert verify_shortcut(g, AugmentSet()).beta_meas == 3
    tc = AugmentSet.from_pairs([(a, b) for a in range(4) for b in range(a + 1, 4)])
    r = verify_shortcut(g, tc)
    assert r.beta_meas == 1 and r.ok and r.worst_pair == (0, 1)


def test_invalid_edge_detected():
    g = gen_path(4)
    r = verify_shortcut(g, AugmentSet.from_pairs([(3, 0)]))
    assert not r.edges_valid and not r.reach_preserved
    assert r.failures() == ["edges_valid", "reach_preserved"]


@given(edge_lists(max_n=30))
def test_empty_set_beta_is_hop_diameter(data):
    n, edges, _ = data
    g = build(n, edges)
    r = verify_shortcut(g, AugmentSet())
    assert r.beta_meas == hop_diameter(n, edges)
    assert r.ok


@pytest.mark.parametrize("seed", range(30))
def test_jls_corpus_and_matrix_power_cross_check(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 65))
    g = gen_random_dag(n, int(rng.integers(0, min(4 * n, n * (n - 1) // 2) + 1)), seed)
    h, _ = jls_build(g, BuildParams.for_graph(g.n, g.m, seed=seed))
    r = verify_shortcut(g, h)
    assert r.ok
    edges, _ = graph_edges(g)
    assert r.beta_meas == hop_diameter(n, edges + sorted(h.pairs()))


@pytest.mark.parametrize("seed", range(10))
def test_beta_monotone_under_superset(seed):
    g = gen_random_dag(40, 80, seed)
    h, _ = jls_build(g, BuildParams.for_graph(40, 80, seed=seed))
    tc = tc_oracle(g)
    rng = np.random.default_rng(seed)
    extra = AugmentSet()
    extra.update(h)
    pairs = np.argwhere(tc & ~np.eye(40, dtype=bool))
    for u, v in pairs[rng.choice(len(pairs), size=min(30, len(pairs)), replace=False)]:
        extra.add(int(u), int(v))
    assert verify_shortcut(g, extra).beta_meas <= verify_shortcut(g, h).beta_meas


def test_sampled_mode_above_cap():
    g = gen_path(200)
    h = folklore_shortcut(g, 20, 1)
    exact = verify_shortcut(g, h)
    sampled = verify_shortcut(g, h, cap=100, pairs_sample=300, seed=4)
    assert sampled.mode == "sampled" and exact.mode == "exact"
    assert 0 < sampled.pairs_checked <= 300
    assert sampled.beta_meas <= exact.beta_meas
    assert sampled.ok
    again = verify_shortcut(g, h, cap=100, pairs_sample=300, seed=4)
    assert again.worst_pair == sampled.worst_pair
    bad = AugmentSet.from_pairs([(150, 3)])
    assert not verify_shortcut(g, bad, cap=100).edges_valid


def test_eps_bound_is_exact_ceiling():
    d = np.array([0, 1, 3, 4, 10, 2**40])
    assert eps_bound(d, Fraction(1, 4)).tolist() == [0, 2, 4, 5, 13, 2**40 + 2**38]
    assert eps_bound(d, Fraction(1, 10)).tolist()[:5] == [0, 2, 4, 5, 11]


def test_verify_hopset_examples():
    g = wchain(4)
    assert verify_hopset(g, AugmentSet(weighted=True), Fraction(9, 10)).beta_meas == 3
    h = folklore_hopset(g, 4, 0)
    r = verify_hopset(g, h, Fraction(1, 4))
    assert r.beta_meas == 1 and r.dist_preserved and r.ok


def test_verify_hopset_detects_shortening():
    g = wchain(4)
    bad = AugmentSet.from_triples([(0, 3, 2)])
    r = verify_hopset(g, bad, Fraction(1, 2))
    assert not r.dist_preserved and not r.edges_valid
    assert set(r.failures()) == {"edges_valid", "reach_preserved", "dist_preserved"}


@pytest.mark.parametrize("seed", range(10))
def test_hopset_beta_against_min_plus_and_search(seed):
    g = randomize_weights(gen_random_dag(36, 110, seed), 12, seed)
    eps = Fraction(1, 4)
    h, _ = cfr_build(g, HopsetParams.for_graph(36, 110, seed=seed, eps=eps, rounds=1))
    r = verify_hopset(g, h, eps)
    assert r.ok
    edges, w = graph_edges(g)
    hs = h.sorted()
    e2 = edges + [(a, b) for a, b, _ in hs]
    w2 = list(w) + [c for _, _, c in hs]
    exact = floyd_warshall(36, edges, w)
    assert np.array_equal(floyd_warshall(36, e2, w2), exact)
    fin = np.isfinite(exact) & ~np.eye(36, dtype=bool)
    bound = np.where(fin, exact + np.ceil(exact * 0.25 - 1e-9), 0)
    best = 0
    for hh in range(0, 36):
        if (min_plus_hops(36, e2, w2, hh)[fin] <= bound[fin]).all():
            best = hh
            break
    assert r.beta_meas == best
    if r.worst_pair is not None:
        s, t = r.worst_pair
        assert hopbound_by_search(g, h, s, t, int(bound[s, t])) == r.beta_meas


def test_hopbound_by_search_on_chain():
    g = wchain(10)
    assert hopbound_by_search(g, AugmentSet(weighted=True), 0, 9, 9) == 9
    assert hopbound_by_search(g, AugmentSet(weighted=True), 0, 9, 8) == -1


def test_density_sweep_rows():
    rows = density_sweep(32, [32], lambda g, s, m: folklore_shortcut(g, 6, s, m), [0])
    assert len(rows) == 1 and isinstance(rows[0], SweepRow)
    assert rows[0].m == 32 and len(rows[0].per_seed) == 1
    again = density_sweep(32, [32], lambda g, s, m: folklore_shortcut(g, 6, s, m), [0])
    assert again == rows
