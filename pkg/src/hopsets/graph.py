"""Immutable CSR digraphs, induced subgraphs, SCC condensation and generators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from ._kernels import backend as _kernels
from .augment import AugmentSet
from .errors import InputError

DEFAULT_WEIGHT_EXPONENT = 4


def _csr(n, keys_src, keys_dst, order):
    src = keys_src[order]
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    return ptr, keys_dst[order].astype(np.int64, copy=False)


class DiGraph:
    """Simple digraph on ``[0, n)`` with sorted out- and in-adjacency in CSR form."""

    weighted = False

    def __init__(self, n, src, dst, w=None):
        # src/dst must already be deduplicated, loop-free and sorted by (src, dst)
        self.n = int(n)
        self.m = int(src.shape[0])
        self._src = src
        self._dst = dst
        self.out_ptr, self.out_idx = _csr(self.n, src, dst, slice(None))
        rev = np.lexsort((src, dst))
        self._rev = rev
        self.in_ptr, self.in_idx = _csr(self.n, dst, src, rev)
        self._kcache = {}
        for a in (self.out_ptr, self.out_idx, self.in_ptr, self.in_idx, src, dst):
            a.setflags(write=False)

    @classmethod
    def from_arrays(cls, n, src, dst, w=None, *, weight_bound=None):
        """Build from raw endpoint arrays: validates, drops loops, deduplicates."""
        n = int(n)
        if n < 0:
            raise InputError("vertex count must be non-negative")
        src = np.asarray(src, dtype=np.int64).reshape(-1)
        dst = np.asarray(dst, dtype=np.int64).reshape(-1)
        if src.shape != dst.shape:
            raise InputError("endpoint arrays differ in length")
        if src.size and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            bad = np.flatnonzero((src < 0) | (dst < 0) | (src >= n) | (dst >= n))[0]
            raise InputError(f"edge ({src[bad]}, {dst[bad]}) has an endpoint outside [0, {n})")
        if w is not None:
            w = np.asarray(w, dtype=np.int64).reshape(-1)
            if w.shape != src.shape:
                raise InputError("weight array differs in length from edge arrays")
            if w.size and w.min() < 0:
                raise InputError(f"negative weight {int(w.min())}")
            if weight_bound is not None and w.size and w.max() > weight_bound:
                raise InputError(f"max weight {int(w.max())} exceeds bound {weight_bound}")
        keep = src != dst
        src, dst = src[keep], dst[keep]
        if w is None:
            order = np.lexsort((dst, src))
            src, dst = src[order], dst[order]
            if src.size:
                first = np.ones(src.size, dtype=bool)
                first[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
                src, dst = src[first], dst[first]
            return DiGraph(n, src, dst)
        w = w[keep]
        # parallel edges keep the lightest weight
        order = np.lexsort((w, dst, src))
        src, dst, w = src[order], dst[order], w[order]
        if src.size:
            first = np.ones(src.size, dtype=bool)
            first[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
            src, dst, w = src[first], dst[first], w[first]
        return WDiGraph(n, src, dst, w)

    # -- adjacency -------------------------------------------------------

    def successors(self, u):
        return self.out_idx[self.out_ptr[u]:self.out_ptr[u + 1]]

    def predecessors(self, v):
        return self.in_idx[self.in_ptr[v]:self.in_ptr[v + 1]]

    def out_degree(self):
        return np.diff(self.out_ptr)

    def edges(self):
        """Endpoint arrays sorted by (u, v)."""
        return self._src, self._dst

    def edge_list(self):
        return list(zip(self._src.tolist(), self._dst.tolist()))

    def weights(self):
        return None

    def csr(self, direction="fwd"):
        """(ptr, idx, w) prepared for the active kernel backend; unit weights if unweighted."""
        hit = self._kcache.get(direction)
        if hit is None:
            if direction == "fwd":
                ptr, idx, w = self.out_ptr, self.out_idx, self._out_w()
            elif direction == "bwd":
                ptr, idx, w = self.in_ptr, self.in_idx, self._in_w()
            else:
                raise InputError(f"unknown direction {direction!r}")
            hit = (_kernels.prepare(ptr), _kernels.prepare(idx), _kernels.prepare(w))
            self._kcache[direction] = hit
        return hit

    def _out_w(self):
        return np.ones(self.m, dtype=np.int64)

    def _in_w(self):
        return np.ones(self.m, dtype=np.int64)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, DiGraph) or type(self) is not type(other):
            return NotImplemented
        same = self.n == other.n and np.array_equal(self._src, other._src) and np.array_equal(self._dst, other._dst)
        if same and self.weighted:
            same = np.array_equal(self.w, other.w)
        return same

    __hash__ = None


class WDiGraph(DiGraph):
    """DiGraph with a non-negative integer weight per edge."""

    weighted = True

    def __init__(self, n, src, dst, w):
        super().__init__(n, src, dst)
        self.w = np.asarray(w, dtype=np.int64)
        self.w.setflags(write=False)
        self.out_w = self.w
        self.in_w = self.w[self._rev]
        self.W = int(self.w.max()) if self.m else 0

    def weights(self):
        return self.w

    def edge_list(self):
        return list(zip(self._src.tolist(), self._dst.tolist(), self.w.tolist()))

    def _out_w(self):
        return self.out_w

    def _in_w(self):
        return self.in_w


def weight_bound(n, exponent=DEFAULT_WEIGHT_EXPONENT):
    return max(n, 2) ** exponent


def from_edge_list(pairs, n, weights=None, *, weight_exponent=DEFAULT_WEIGHT_EXPONENT):
    """Build a DiGraph, or a WDiGraph when ``weights`` is given.

    Self-loops are dropped and duplicate pairs collapse to one edge (the
    lightest, when weighted).  ``weight_exponent`` bounds W by ``n**exponent``;
    pass None to disable the check.
    """
    pairs = list(pairs)
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2) if pairs else np.empty((0, 2), dtype=np.int64)
    bound = None if weight_exponent is None else weight_bound(n, weight_exponent)
    return DiGraph.from_arrays(n, arr[:, 0], arr[:, 1], None if weights is None else list(weights),
                               weight_bound=bound)


def union(g, extra):
    """G ∪ H as a new graph; H is an AugmentSet (weighted iff g is)."""
    hs, hd, hw = extra.arrays()
    gs, gd = g.edges()
    src = np.concatenate([gs, hs])
    dst = np.concatenate([gd, hd])
    if g.weighted:
        if hw is None:
            raise InputError("weighted graph needs a weighted augment set")
        return DiGraph.from_arrays(g.n, src, dst, np.concatenate([g.w, hw]))
    return DiGraph.from_arrays(g.n, src, dst)


# -- vertex subsets and induced subgraphs ------------------------------------


class VertexSubset:
    """Sorted member list plus global/local index maps for an induced subgraph."""

    __slots__ = ("n", "members", "_local")

    def __init__(self, members, n):
        members = np.unique(np.asarray(members, dtype=np.int64).reshape(-1))
        if members.size and (members[0] < 0 or members[-1] >= n):
            raise InputError(f"subset member outside [0, {n})")
        self.n = int(n)
        self.members = members
        self._local = None

    @classmethod
    def from_sorted(cls, members, n):
        """Trusted constructor: ``members`` already sorted, distinct and in range."""
        out = cls.__new__(cls)
        out.n, out.members, out._local = int(n), members, None
        return out

    @classmethod
    def full(cls, n):
        return cls(np.arange(n), n)

    def __len__(self):
        return int(self.members.size)

    @property
    def to_global(self):
        return self.members

    @property
    def to_local(self):
        if self._local is None:
            loc = np.full(self.n, -1, dtype=np.int64)
            loc[self.members] = np.arange(self.members.size)
            self._local = loc
        return self._local


def induced(g, s):
    """G[s] relabeled to local ids ``0..len(s)-1`` (weights carried over)."""
    if s.n != g.n:
        raise InputError("subset was built for a different vertex count")
    loc = s.to_local
    src, dst = g.edges()
    ls, ld = loc[src], loc[dst]
    keep = (ls >= 0) & (ld >= 0)
    ls, ld = ls[keep], ld[keep]
    # relabeling is monotone, so (src, dst) order is preserved
    if g.weighted:
        return WDiGraph(len(s), ls, ld, g.w[keep])
    return DiGraph(len(s), ls, ld)


# -- strongly connected components -------------------------------------------


def tarjan_scc(g):
    """Component index per vertex (iterative Tarjan, emission order)."""
    n = g.n
    ptr = g.out_ptr.tolist()
    idx = g.out_idx.tolist()
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, ptr[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, e = work[-1]
            if e < ptr[v + 1]:
                work[-1] = (v, e + 1)
                u = idx[e]
                if index[u] < 0:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, ptr[u]))
                elif on_stack[u] and index[u] < low[v]:
                    low[v] = index[u]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp[u] = ncomp
                    if u == v:
                        break
                ncomp += 1
    return comp, ncomp


@dataclass(frozen=True)
class SccResult:
    component_of: np.ndarray
    condensed: DiGraph
    star_edges: AugmentSet
    centers: np.ndarray

    @property
    def count(self):
        return self.condensed.n


def scc_condense(g):
    """Condense SCCs; component ids follow the minimum member id.

    Each non-singleton SCC contributes a bidirected star centred on its
    smallest vertex, so any intra-SCC pair is two hops apart.
    """
    raw, k = tarjan_scc(g)
    raw = np.asarray(raw, dtype=np.int64)
    mins = np.full(k, g.n, dtype=np.int64)
    np.minimum.at(mins, raw, np.arange(g.n, dtype=np.int64))
    rank = np.empty(k, dtype=np.int64)
    rank[np.argsort(mins, kind="stable")] = np.arange(k)
    comp = rank[raw] if g.n else raw
    centers = np.sort(mins)
    src, dst = g.edges()
    cs, cd = comp[src], comp[dst]
    condensed = DiGraph.from_arrays(k, cs, cd)
    star = AugmentSet()
    center_of = centers[comp] if g.n else comp
    for v in np.flatnonzero(center_of != np.arange(g.n)).tolist():
        c = int(center_of[v])
        star.add(v, c)
        star.add(c, v)
    return SccResult(comp, condensed, star, centers)


def topological_order(g):
    """Kahn order, or None if g has a cycle."""
    indeg = np.diff(g.in_ptr).tolist()
    ptr = g.out_ptr.tolist()
    idx = g.out_idx.tolist()
    order = [v for v in range(g.n) if indeg[v] == 0]
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for e in range(ptr[u], ptr[u + 1]):
            v = idx[e]
            indeg[v] -= 1
            if indeg[v] == 0:
                order.append(v)
    return order if len(order) == g.n else None


def is_dag(g):
    return topological_order(g) is not None


# -- generators ---------------------------------------------------------------


def _decode_pairs(n, t):
    """Map indices in [0, n(n-1)/2) to position pairs a < b (row-major)."""
    rows = np.arange(n, dtype=np.int64)
    starts = rows * (2 * n - rows - 1) // 2
    a = np.searchsorted(starts, t, side="right") - 1
    b = a + 1 + (t - starts[a])
    return a, b


def gen_path(n):
    src = np.arange(max(n - 1, 0), dtype=np.int64)
    return DiGraph.from_arrays(n, src, src + 1)


def gen_random_dag(n, m, seed):
    """m distinct pairs oriented along a random topological permutation."""
    total = n * (n - 1) // 2
    if m < 0 or m > total:
        raise InputError(f"cannot place {m} edges in a DAG on {n} vertices (max {total})")
    g = _rng.stream(seed, "gen_random_dag", n, m)
    order = g.permutation(n)
    t = np.sort(g.choice(total, size=m, replace=False)) if m else np.empty(0, dtype=np.int64)
    a, b = _decode_pairs(n, t.astype(np.int64))
    return DiGraph.from_arrays(n, order[a], order[b])


def gen_spined_dag(n, m, seed):
    """Random DAG containing a Hamiltonian path along its topological order.

    ``m`` is clamped to ``[n-1, n(n-1)/2]``.  Used by density sweeps so every
    density keeps a long path to shortcut.
    """
    total = n * (n - 1) // 2
    m = min(max(m, n - 1), total)
    g = _rng.stream(seed, "gen_spined_dag", n, m)
    order = g.permutation(n)
    rows = np.arange(n - 1, dtype=np.int64)
    spine = rows * (2 * n - rows - 1) // 2  # index of pair (a, a+1)
    extra = m - (n - 1)
    if extra:
        mask = np.ones(total, dtype=bool)
        mask[spine] = False
        pool = np.flatnonzero(mask)
        t = np.concatenate([spine, g.choice(pool, size=extra, replace=False)])
    else:
        t = spine
    a, b = _decode_pairs(n, np.sort(t))
    return DiGraph.from_arrays(n, order[a], order[b])


def gen_random_digraph(n, m, seed):
    """m distinct ordered pairs sampled uniformly (cycles allowed)."""
    total = n * (n - 1)
    if m < 0 or m > total:
        raise InputError(f"cannot place {m} edges on {n} vertices (max {total})")
    g = _rng.stream(seed, "gen_random_digraph", n, m)
    t = g.choice(total, size=m, replace=False) if m else np.empty(0, dtype=np.int64)
    u = t // (n - 1)
    v = t % (n - 1)
    v = v + (v >= u)
    return DiGraph.from_arrays(n, u, v)


def gen_layered(layers, width, extra_density, seed):
    """Layered DAG of depth ``layers``; ids are layer-major.

    Every vertex past layer 0 gets one random predecessor in the previous
    layer, so a path of ``layers - 1`` hops exists; other consecutive-layer
    pairs appear independently with probability ``extra_density``.
    """
    if layers < 1 or width < 1 or not 0 <= extra_density <= 1:
        raise InputError("layers, width must be >= 1 and density in [0, 1]")
    g = _rng.stream(seed, "gen_layered", layers, width)
    n = layers * width
    src, dst = [], []
    for layer in range(layers - 1):
        base, nxt = layer * width, (layer + 1) * width
        parents = base + g.integers(0, width, size=width)
        src.append(parents)
        dst.append(nxt + np.arange(width))
        pu, pv = np.divmod(np.flatnonzero(g.random(width * width) < extra_density), width)
        src.append(base + pu)
        dst.append(nxt + pv)
    if not src:
        return DiGraph.from_arrays(n, [], [])
    return DiGraph.from_arrays(n, np.concatenate(src), np.concatenate(dst))


def randomize_weights(g, wmax, seed, wmin=1):
    """Attach i.i.d. integer weights uniform on ``[wmin, wmax]``."""
    if wmin < 0 or wmax < wmin:
        raise InputError("need 0 <= wmin <= wmax")
    w = _rng.stream(seed, "randomize_weights", g.n, g.m).integers(wmin, wmax + 1, size=g.m)
    src, dst = g.edges()
    return WDiGraph(g.n, src, dst, w.astype(np.int64))
