import numpy as np
import pytest
from conftest import build, edge_lists, graph_edges
from hypothesis import given
from hypothesis import strategies as st
from oracles import longest_path_dag, scc_classes, warshall

from hopsets.errors import InputError
from hopsets.graph import (DiGraph, VertexSubset, from_edge_list, gen_layered, gen_path, gen_random_dag,
                           gen_random_digraph, gen_spined_dag, induced, is_dag, randomize_weights,
                           scc_condense, topological_order, union)
from hopsets.augment import AugmentSet
from hopsets.search import bfs


def test_from_edge_list_basic():
    g = from_edge_list([(0, 1), (1, 2)], 3)
    assert g.m == 2
    assert g.successors(0).tolist() == [1]
    assert g.predecessors(2).tolist() == [1]


def test_duplicates_and_self_loops_are_dropped():
    assert from_edge_list([(0, 1), (0, 1)], 2).m == 1
    assert from_edge_list([(0, 0)], 1).m == 0


def test_weighted_duplicates_keep_lightest():
    g = from_edge_list([(0, 1), (0, 1), (1, 2)], 3, weights=[5, 3, 7])
    assert g.edge_list() == [(0, 1, 3), (1, 2, 7)]
    assert g.W == 7


@pytest.mark.parametrize("pairs,weights", [([(0, 3)], None), ([(-1, 0)], None), ([(0, 1)], [-2])])
def test_bad_input_rejected(pairs, weights):
    with pytest.raises(InputError):
        from_edge_list(pairs, 3, weights=weights)


def test_weight_bound_checked():
    with pytest.raises(InputError):
        from_edge_list([(0, 1)], 2, weights=[2**4 + 1])
    assert from_edge_list([(0, 1)], 2, weights=[2**4 + 1], weight_exponent=None).W == 17


@given(edge_lists(weighted=True))
def test_out_and_in_adjacency_agree(data):
    n, edges, w = data
    g = build(n, edges, w)
    fwd = {(u, int(v)) for u in range(n) for v in g.successors(u)}
    bwd = {(int(u), v) for v in range(n) for u in g.predecessors(v)}
    assert fwd == bwd == set(edges)
    for u in range(n):
        assert list(g.successors(u)) == sorted(g.successors(u))
    ptr, idx, ww = g.csr("bwd")
    lookup = dict(zip(edges, w))
    for v in range(n):
        for e in range(ptr[v], ptr[v + 1]):
            assert ww[e] == lookup[(idx[e], v)]


def test_induced_examples():
    g = gen_path(3)
    assert induced(g, VertexSubset([0, 2], 3)).m == 0
    h = induced(g, VertexSubset([0, 1], 3))
    assert h.edge_list() == [(0, 1)]


def test_induced_even_vertices_matches_filtering():
    g = gen_random_dag(32, 96, seed=7)
    even = VertexSubset(np.arange(0, 32, 2), 32)
    expected = sum(1 for u, v in g.edge_list() if u % 2 == 0 and v % 2 == 0)
    assert induced(g, even).m == expected


@given(edge_lists(weighted=True))
def test_induced_full_subset_is_identity(data):
    n, edges, w = data
    g = build(n, edges, w)
    assert induced(g, VertexSubset.full(n)) == g
    s = VertexSubset(np.arange(0, n, 2), n)
    once = induced(g, s)
    assert induced(once, VertexSubset.full(once.n)) == once


def test_vertex_subset_maps_are_inverse():
    s = VertexSubset([5, 1, 3, 3], 8)
    assert s.members.tolist() == [1, 3, 5]
    assert s.to_local[s.to_global].tolist() == [0, 1, 2]
    with pytest.raises(InputError):
        VertexSubset([8], 8)


def test_scc_on_dag_is_identity():
    g = gen_random_dag(20, 50, seed=1)
    r = scc_condense(g)
    assert r.count == 20
    assert len(r.star_edges) == 0
    assert r.condensed == g
    assert r.component_of.tolist() == list(range(20))


def test_scc_two_cycle_star():
    g = from_edge_list([(0, 1), (1, 0), (1, 2)], 3)
    r = scc_condense(g)
    assert r.count == 2
    assert r.star_edges.pairs() == {(1, 0), (0, 1)}
    assert r.centers.tolist() == [0, 2]


def _plant_cycles(n, m, seed, cycles=3):
    g = gen_random_digraph(n, m, seed)
    rng = np.random.default_rng(seed)
    extra = []
    for _ in range(cycles):
        ring = rng.choice(n, size=4, replace=False).tolist()
        extra += list(zip(ring, ring[1:] + ring[:1]))
    edges, _ = graph_edges(g)
    return from_edge_list(edges + extra, n)


@pytest.mark.parametrize("seed", range(5))
def test_scc_count_matches_mutual_reachability(seed):
    g = _plant_cycles(64, 70, seed)
    edges, _ = graph_edges(g)
    assert scc_condense(g).count == scc_classes(64, edges)


@given(edge_lists(max_n=20))
def test_scc_properties(data):
    n, edges, _ = data
    g = build(n, edges)
    r = scc_condense(g)
    tc = warshall(n, edges)
    same = r.component_of[:, None] == r.component_of[None, :]
    assert np.array_equal(same, tc & tc.T)
    assert is_dag(r.condensed)
    # stars: exactly v<->center for non-centre members
    expected = set()
    for v in range(n):
        c = int(r.centers[r.component_of[v]])
        if c != v:
            expected |= {(v, c), (c, v)}
        assert c == int(np.flatnonzero(r.component_of == r.component_of[v]).min())
    assert r.star_edges.pairs() == expected
    # every intra-SCC pair within two hops inside the SCC
    gu = union(g, r.star_edges)
    for comp in range(r.count):
        members = np.flatnonzero(r.component_of == comp)
        sub = induced(gu, VertexSubset(members, n))
        for s in range(sub.n):
            d = bfs(sub, s).dist
            assert d.max() <= 2


@pytest.mark.parametrize("seed", range(100))
def test_generators_promise_acyclicity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 40))
    m = int(rng.integers(0, n * (n - 1) // 2 + 1))
    assert topological_order(gen_random_dag(n, m, seed)) is not None
    assert is_dag(gen_spined_dag(n, max(m, n - 1), seed))
    assert is_dag(gen_layered(5, 3, 0.4, seed))
    cyc = gen_random_digraph(n, min(m, n * (n - 1)), seed)
    edges, _ = graph_edges(cyc)
    assert is_dag(cyc) == (scc_classes(n, edges) == n)


def test_generator_examples():
    p = gen_path(4)
    assert p.edge_list() == [(0, 1), (1, 2), (2, 3)]
    assert bfs(p, 0).dist.tolist() == [0, 1, 2, 3]
    assert gen_random_dag(8, 0, seed=3).m == 0
    g = gen_layered(64, 4, 0.5, seed=1)
    edges, _ = graph_edges(g)
    assert longest_path_dag(g.n, edges) >= 63
    with pytest.raises(InputError):
        gen_random_dag(4, 7, seed=0)


def test_generators_are_deterministic():
    assert gen_random_dag(30, 80, 5) == gen_random_dag(30, 80, 5)
    assert gen_random_dag(30, 80, 5) != gen_random_dag(30, 80, 6)
    a = randomize_weights(gen_layered(8, 4, 0.5, 2), 9, 4)
    assert a == randomize_weights(gen_layered(8, 4, 0.5, 2), 9, 4)
    assert 1 <= a.weights().min() and a.weights().max() <= 9


def test_spined_dag_has_hamiltonian_path():
    g = gen_spined_dag(50, 120, 3)
    edges, _ = graph_edges(g)
    assert longest_path_dag(50, edges) == 49
    assert g.m == 120


def test_union_weighted_requires_weights():
    g = randomize_weights(gen_path(3), 5, 0)
    with pytest.raises(InputError):
        union(g, AugmentSet.from_pairs([(0, 2)]))
    gu = union(g, AugmentSet.from_triples([(0, 2, 1)]))
    assert (0, 2, 1) in gu.edge_list()


def test_graph_is_immutable():
    g = gen_path(4)
    with pytest.raises(ValueError):
        g.out_idx[0] = 3
    assert isinstance(g, DiGraph)
