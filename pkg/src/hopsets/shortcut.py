"""Shortcut sets: folklore sampling and the recursive pivot construction with TC-pruning."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import rng as _rng
from .augment import AugmentSet
from .boolmat import transitive_closure
from .errors import InputError, PreconditionError
from .graph import VertexSubset, induced, is_dag, scc_condense
from .parexec import CostMeter, scoped_parallel
from .search import bfs, par_bfs

DEFAULT_OMEGA = 2.371339


def log2n(n):
    return math.log2(max(n, 2))


def shortcut_rho_preset(n, m, omega=DEFAULT_OMEGA):
    """max(1, floor((m/n) ** (1 / (2*omega - 2))))."""
    if n < 1:
        raise InputError("need n >= 1")
    return _root_floor(max(m, n) / n, 2 * omega - 2)


def _root_floor(x, e):
    r = max(1, int(math.floor(x ** (1.0 / e) + 1e-9)))
    while r > 1 and r ** e > x * (1 + 1e-12):
        r -= 1
    return r


@dataclass(frozen=True)
class BuildParams:
    k: int = 4
    rho: int = 1
    sample_c: float = 1.0
    tc_threshold_c: float = 1.0
    omega: float = DEFAULT_OMEGA
    preset: str = "desk"
    seed: int = 0
    repeats: int = 1
    force_prob: float | None = None  # testing hook: fixed sampling probability at every level

    def __post_init__(self):
        if self.k < 2:
            raise InputError("k must be >= 2")
        if self.rho < 1:
            raise InputError("rho must be >= 1")
        if self.sample_c <= 0 or self.tc_threshold_c <= 0 or self.repeats < 1:
            raise InputError("sampling and pruning constants must be positive")
        if not 2 <= self.omega <= 3:
            raise InputError("omega must lie in [2, 3]")
        if self.preset not in ("desk", "paper"):
            raise InputError(f"unknown preset {self.preset!r}")

    @classmethod
    def for_graph(cls, n, m, preset="desk", seed=0, rho=None, omega=DEFAULT_OMEGA, **overrides):
        """Resolve a preset for an n-vertex, m-edge input; ``rho`` overrides the formula."""
        rho = shortcut_rho_preset(n, m, omega) if rho is None else int(rho)
        if preset == "paper":
            k = max(2, math.ceil(log2n(n)))
            base = dict(k=k, sample_c=100.0, tc_threshold_c=float(k * k * log2n(n) ** 2),
                        repeats=math.ceil(log2n(n)))
        elif preset == "desk":
            base = dict(k=4, sample_c=1.0, tc_threshold_c=1.0, repeats=1)
        else:
            raise InputError(f"unknown preset {preset!r}")
        base.update(overrides)
        return cls(rho=rho, omega=omega, preset=preset, seed=seed, **base)

    def level_prob(self, r, n):
        if self.force_prob is not None:
            p = self.force_prob
        else:
            p = self.sample_c * self.k ** (r + 1) * log2n(n) / max(n, 1)
        if r >= max_level(n, self.k):
            p = 1.0
        return min(1.0, p)

    def tc_threshold(self):
        return self.tc_threshold_c * self.rho ** 2

    def with_(self, **kw):
        return replace(self, **kw)


def max_level(n, k):
    """ceil(log_k n): the deepest recursion level (where sampling saturates)."""
    if n <= 1:
        return 0
    lvl = 0
    while k ** lvl < n:
        lvl += 1
    return lvl


@dataclass
class LevelStats:
    subproblems: int = 0
    pivots: int = 0
    max_ball: int = 0
    prune_calls: int = 0
    edges_added: int = 0


@dataclass
class RecursionTrace:
    levels: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def level(self, r):
        while len(self.levels) <= r:
            self.levels.append(LevelStats())
        return self.levels[r]

    @property
    def depth(self):
        return len(self.levels)

    def total_edges(self):
        return sum(s.edges_added for s in self.levels)

    def rows(self):
        return [(r, s.subproblems, s.pivots, s.max_ball, s.prune_calls, s.edges_added)
                for r, s in enumerate(self.levels)]


def _count_first_level(level_keys, trace):
    """Attribute each distinct edge key to the first level emitting it."""
    seen = np.empty(0, dtype=np.int64)
    for r, chunks in enumerate(level_keys):
        keys = np.unique(np.concatenate(chunks)) if chunks else np.empty(0, dtype=np.int64)
        fresh = np.setdiff1d(keys, seen, assume_unique=True)
        trace.level(r).edges_added += int(fresh.size)
        seen = np.union1d(seen, fresh)
    return seen


# -- folklore ----------------------------------------------------------------


def sample_vertices(n, sample_size, seed, name):
    if not 0 <= sample_size <= n:
        raise InputError(f"sample size {sample_size} outside [0, {n}]")
    return np.sort(_rng.stream(seed, name, n).choice(n, size=sample_size, replace=False))


def folklore_shortcut(g, sample_size, seed, meter=None):
    """All pairs (u, v) of sampled vertices with u reaching v."""
    sample = sample_vertices(g.n, sample_size, seed, "folklore_shortcut")
    mark = np.zeros(g.n, dtype=bool)
    mark[sample] = True
    out = AugmentSet()
    for u in sample.tolist():
        d = bfs(g, u).reached()
        if meter is not None:
            meter.charge(g.m + g.n)
        v = np.flatnonzero(d & mark)
        out.add_arrays(np.full(v.size, u, dtype=np.int64), v)
    return out


# -- recursive construction ----------------------------------------------------


@dataclass
class _Sub:
    graph: object
    glob: np.ndarray
    path: tuple


def _partition(nl, rel_bits):
    """Group vertices with identical label rows; parts ordered by label row."""
    if rel_bits.shape[1] == 0:
        return [np.arange(nl)]
    packed = np.ascontiguousarray(np.packbits(rel_bits, axis=1))
    # one opaque byte string per row; ordering matches row-wise lexicographic order
    rows = packed.view(np.dtype((np.void, packed.shape[1]))).reshape(-1)
    _, inverse = np.unique(rows, return_inverse=True)
    inverse = inverse.reshape(-1)
    order = np.argsort(inverse, kind="stable")
    cuts = np.flatnonzero(np.diff(inverse[order])) + 1
    return np.split(order, cuts)


def _jls_subproblem(sub, r, params, n_base, tc_prune, meter, rep):
    gl = sub.graph
    nl = gl.n
    p = params.level_prob(r, n_base)
    pivots = np.flatnonzero(_rng.stream(params.seed, "jls", rep, r, *sub.path).random(nl) < p)
    stats = dict(pivots=int(pivots.size), max_ball=0, prune_calls=0)

    def pivot_task(piv):
        def run(m):
            fwd = par_bfs(gl, piv, m, "fwd").reached()
            bwd = par_bfs(gl, piv, m, "bwd").reached()
            ball = fwd | bwd
            tc = None
            if tc_prune and ball.sum() <= params.tc_threshold():
                tm = m.child()
                tc = transitive_closure(gl, VertexSubset(np.flatnonzero(ball), nl), tm)
                m.charge(tm.work, tm.span, phase="tc_prune")
            return fwd, bwd, tc
        return run

    results = scoped_parallel([pivot_task(int(q)) for q in pivots], meter)
    keys = []
    rel = np.zeros((nl, 2 * len(results)), dtype=bool)
    glob = sub.glob
    for i, (piv, (fwd, bwd, tc)) in enumerate(zip(pivots.tolist(), results)):
        gp = int(glob[piv])
        anc = glob[np.flatnonzero(bwd)]
        desc = glob[np.flatnonzero(fwd)]
        anc = anc[anc != gp]
        desc = desc[desc != gp]
        keys.append(anc * n_base + gp)
        keys.append(gp * n_base + desc)
        rel[:, 2 * i] = bwd
        rel[:, 2 * i + 1] = fwd
        ball = int((fwd | bwd).sum())
        stats["max_ball"] = max(stats["max_ball"], ball)
        if tc is not None:
            stats["prune_calls"] += 1
            s, d, _ = tc.arrays()
            keys.append(glob[s] * n_base + glob[d])
    meter.charge(int(rel.sum()) + nl, span=1 + meter.barrier)

    children = []
    if p < 1.0:
        for j, part in enumerate(_partition(nl, rel)):
            if part.size > 1:
                children.append(_Sub(induced(gl, VertexSubset(part, nl)), glob[part], sub.path + (j,)))
    return keys, children, stats


def jls_build(g, params, tc_prune=True, meter=None):
    """Recursive pivot shortcut set on a DAG, optionally with TC-pruning.

    Returns (H, trace).  H holds pairs in g's vertex ids; self-pairs are
    dropped.  Raises PreconditionError on cyclic input.
    """
    if not is_dag(g):
        raise PreconditionError("jls_build needs a DAG; condense SCCs first")
    meter = meter if meter is not None else CostMeter()
    n = g.n
    trace = RecursionTrace()
    level_keys = []
    top = max_level(n, params.k)
    for rep in range(params.repeats):
        frontier = [_Sub(g, np.arange(n, dtype=np.int64), ())] if n > 1 else []
        r = 0
        while frontier:
            if r > top:
                raise AssertionError(f"recursion reached level {r} > ceil(log_k n) = {top}")
            out = scoped_parallel(
                [lambda m, s=s: _jls_subproblem(s, r, params, n, tc_prune, m, rep) for s in frontier],
                meter,
            )
            st = trace.level(r)
            while len(level_keys) <= r:
                level_keys.append([])
            nxt = []
            for keys, children, stats in out:
                st.subproblems += 1
                st.pivots += stats["pivots"]
                st.max_ball = max(st.max_ball, stats["max_ball"])
                st.prune_calls += stats["prune_calls"]
                level_keys[r].extend(keys)
                nxt.extend(children)
            frontier = nxt
            r += 1
    keys = _count_first_level(level_keys, trace)
    h = AugmentSet()
    h.add_arrays(keys // max(n, 1), keys % max(n, 1))
    assert trace.total_edges() == len(h)
    assert trace.depth <= top + 1
    return h, trace


def build_shortcut(g, params, tc_prune=True, meter=None):
    """Shortcut set for any digraph: SCC stars plus jls_build on the condensation.

    Condensed edges map to the SCC centres (smallest member ids).
    """
    meter = meter if meter is not None else CostMeter()
    scc = scc_condense(g)
    meter.charge(g.n + g.m)
    hc, trace = jls_build(scc.condensed, params, tc_prune, meter)
    h = AugmentSet()
    h.update(scc.star_edges)
    s, d, _ = hc.arrays()
    h.add_arrays(scc.centers[s], scc.centers[d])
    trace.notes["scc_count"] = scc.count
    trace.notes["star_edges"] = len(scc.star_edges)
    return h, trace
