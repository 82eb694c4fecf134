import threading

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopsets.graph import gen_path, gen_random_dag, union
from hopsets.hopset import HopsetParams, cfr_build
from hopsets.parexec import CostMeter, barrier_units, scoped_parallel, set_workers, workers
from hopsets.search import bfs, par_bfs
from hopsets.shortcut import BuildParams, jls_build


def spend(work):
    def task(m):
        m.charge(work)
        return work
    return task


@pytest.fixture
def threads():
    def use(k):
        set_workers(k)
    yield use
    set_workers(1)


def test_single_and_parallel_tasks():
    m = CostMeter(barrier=3)
    assert scoped_parallel([spend(10)], m) == [10]
    assert (m.work, m.span) == (10, 13)
    m = CostMeter(barrier=3)
    scoped_parallel([spend(10)] * 8, m)
    assert (m.work, m.span) == (80, 13)


def test_sequential_composition_adds():
    m = CostMeter()
    m.charge(5)
    m.charge(7, span=2)
    assert (m.work, m.span) == (12, 7)
    scoped_parallel([], m)
    assert (m.work, m.span) == (12, 7)


@given(st.lists(st.lists(st.integers(0, 50), min_size=1, max_size=5), min_size=1, max_size=6),
       st.integers(0, 5))
def test_nested_join_arithmetic(groups, barrier):
    m = CostMeter(barrier)

    def outer(ws):
        return lambda sub: scoped_parallel([spend(w) for w in ws], sub)

    scoped_parallel([outer(ws) for ws in groups], m)
    assert m.work == sum(map(sum, groups))
    assert m.span == max(max(ws) + barrier for ws in groups) + barrier
    assert m.span <= m.work + 2 * barrier


def test_par_bfs_replay_on_path():
    g = gen_path(64)
    m = CostMeter(barrier=barrier_units(64))
    d = par_bfs(g, 0, m)
    # replay: each level scans the frontier vertex and its one out-edge
    levels = bfs(g, 0).levels
    assert levels == d.levels == 64
    assert m.span == 64 * (1 + 6)
    assert m.work == 64 + 63


def test_results_in_order_and_exceptions_after_join(threads):
    for k in (1, 4):
        threads(k)
        assert scoped_parallel([lambda m, i=i: i for i in range(20)]) == list(range(20))
        done = []

        def boom(m):
            raise ValueError("x")

        def ok(m):
            done.append(1)

        with pytest.raises(ValueError):
            scoped_parallel([boom, ok, ok])
        assert len(done) == 2


def test_threads_actually_used(threads):
    threads(4)
    assert workers() == 4
    seen = set()
    barrier = threading.Barrier(2, timeout=5)

    def task(m):
        seen.add(threading.current_thread().name)
        barrier.wait()

    scoped_parallel([task, task])
    assert len(seen) == 2


@pytest.mark.parametrize("k", [1, 4, 8])
def test_meter_independent_of_thread_count(threads, k):
    g = gen_random_dag(48, 150, 3)
    threads(1)
    ref = CostMeter(2)
    h_ref, _ = jls_build(g, BuildParams.for_graph(48, 150, seed=3), meter=ref)
    href2 = CostMeter(2)
    hop_ref, _ = cfr_build(g, HopsetParams.for_graph(48, 150, seed=3, rounds=1), meter=href2)
    threads(k)
    m = CostMeter(2)
    h, _ = jls_build(g, BuildParams.for_graph(48, 150, seed=3), meter=m)
    m2 = CostMeter(2)
    hop, _ = cfr_build(g, HopsetParams.for_graph(48, 150, seed=3, rounds=1), meter=m2)
    assert h == h_ref and hop == hop_ref
    assert (m.snapshot(), m.phases) == (ref.snapshot(), ref.phases)
    assert (m2.snapshot(), m2.phases) == (href2.snapshot(), href2.phases)


@pytest.mark.parametrize("seed", range(20))
def test_par_bfs_span_equals_levels(seed):
    g = gen_random_dag(60, 200, seed)
    h, _ = jls_build(g, BuildParams.for_graph(60, 200, seed=seed))
    gu = union(g, h)
    for s in range(0, 60, 7):
        m = CostMeter(barrier=4)
        d = par_bfs(gu, s, m)
        finite = d.dist[d.reached()]
        assert d.levels == int(finite.max()) + 1
        assert m.span == d.levels * 5


def test_barrier_units():
    assert barrier_units(1) == 1 and barrier_units(2) == 1
    assert barrier_units(256) == 8 and barrier_units(257) == 9


@given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)), max_size=6),
       st.lists(st.integers(0, 50), max_size=6), st.integers(1, 4))
def test_leaves_join_like_single_charge_tasks(charges, traced, barrier):
    def task(w, s, phase=None):
        return lambda m: m.charge(w, s, phase)

    a, b = CostMeter(barrier), CostMeter(barrier)
    scoped_parallel([task(w, s) for w, s in charges] + [task(w, None, "p") for w in traced], a)
    leaves = [(np.array([w for w, _ in charges]), np.array([s for _, s in charges]), None),
              (np.array(traced), np.array(traced), "p")]
    scoped_parallel([], b, leaves)
    assert (a.work, a.span) == (b.work, b.span)
    assert a.phases.get("p", 0) == b.phases.get("p", 0)
