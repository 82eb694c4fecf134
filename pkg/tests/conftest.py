import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from hopsets._kernels import available_backends  # noqa: E402
from hopsets.graph import DiGraph  # noqa: E402

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")


@st.composite
def edge_lists(draw, max_n=24, acyclic=False, weighted=False, max_w=20, min_w=1):
    n = draw(st.integers(1, max_n))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    raw = draw(st.lists(pairs, max_size=3 * n))
    if acyclic:
        perm = draw(st.permutations(range(n)))
        rank = {v: i for i, v in enumerate(perm)}
        raw = [(u, v) if rank[u] < rank[v] else (v, u) for u, v in raw]
    edges = sorted({(u, v) for u, v in raw if u != v})
    weights = [draw(st.integers(min_w, max_w)) for _ in edges] if weighted else None
    return n, edges, weights


def build(n, edges, weights=None):
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return DiGraph.from_arrays(n, e[:, 0], e[:, 1], weights)


def graph_edges(g):
    src, dst = g.edges()
    return list(zip(src.tolist(), dst.tolist())), (g.weights().tolist() if g.weighted else None)


@pytest.fixture(scope="module", params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]
