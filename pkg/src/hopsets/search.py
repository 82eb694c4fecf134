"""Single-source searches used by the constructions and the oracles.

Distances are int64 arrays; ``UNREACHED`` is larger than any legal distance so
comparisons against caps and bounds need no special casing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import INF
from ._kernels import backend as _k
from .augment import AugmentSet
from .errors import InputError

UNREACHED = INF


@dataclass(frozen=True)
class HopDistances:
    source: int
    dist: np.ndarray
    levels: int = 0

    def reached(self):
        return self.dist != UNREACHED

    def __getitem__(self, v):
        return int(self.dist[v])


@dataclass(frozen=True)
class WeightedDistances:
    source: int
    dist: np.ndarray
    unit: int = 1
    levels: int = 0

    def reached(self):
        return self.dist != UNREACHED

    def __getitem__(self, v):
        return int(self.dist[v])


def _check_source(g, s):
    if not 0 <= s < g.n:
        raise InputError(f"source {s} outside [0, {g.n})")


def floor_cap(cap):
    """Integer cap from an int/Fraction/float/None (None or inf -> unbounded)."""
    if cap is None:
        return INF
    if isinstance(cap, float):
        if math.isinf(cap):
            return INF if cap > 0 else -1
        cap = Fraction(cap)
    if cap < 0:
        return -1
    return min(int(math.floor(cap)), INF - 1)


def bfs(g, s, direction="fwd", hop_cap=None):
    _check_source(g, s)
    ptr, idx, _ = g.csr(direction)
    dist, levels, _work = _k.bfs(ptr, idx, s, -1 if hop_cap is None else int(hop_cap))
    dist[dist < 0] = UNREACHED
    return HopDistances(s, dist, levels)


def par_bfs(g, s, meter, direction="fwd"):
    """Level-synchronous BFS metered as one fork-join per frontier.

    Each frontier vertex is a task that scans its adjacency and claims
    unvisited neighbours (first claim wins).  Per level the meter gains the
    scanned work and ``1 + barrier`` span.
    """
    _check_source(g, s)
    ptr, idx, _ = g.csr(direction)
    dist, levels, work = _k.bfs(ptr, idx, s, -1)
    dist[dist < 0] = UNREACHED
    meter.charge(work, span=levels * (1 + meter.barrier))
    return HopDistances(s, dist, levels)


def dijkstra(g, s, direction="fwd", dist_cap=None, meter=None):
    """Exact distances up to ``dist_cap``; vertices beyond it are UNREACHED.

    The search stops expanding at the cap rather than filtering afterwards.
    Unweighted graphs are searched with unit weights.
    """
    _check_source(g, s)
    cap = floor_cap(dist_cap)
    ptr, idx, w = g.csr(direction)
    if cap < 0:
        dist = np.full(g.n, UNREACHED, dtype=np.int64)
        return WeightedDistances(s, dist)
    dist, work = _k.dijkstra(ptr, idx, w, s, cap)
    if meter is not None:
        meter.charge(work)
    return WeightedDistances(s, dist)


def dijkstra_many(g, sources, direction="fwd", dist_cap=None, meter=None):
    """(source, target, dist) arrays for every target t != source within the cap."""
    cap = floor_cap(dist_cap)
    ptr, idx, w = g.csr(direction)
    sources = [int(s) for s in sources]
    if cap < 0 or not sources:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy(), e.copy()
    src, dst, dd, work = _k.dijkstra_many(ptr, idx, w, sources, cap)
    if meter is not None:
        meter.charge(work)
    return src, dst, dd


def trunc_nearest(g, v, y, direction="fwd", meter=None):
    """The ``y`` nearest t != v as (targets, dists), ordered by (dist, id)."""
    ptr, idx, w = g.csr(direction)
    t, d, work = _k.trunc_dijkstra(ptr, idx, w, int(v), int(y))
    if meter is not None:
        meter.charge(work)
    return t, d


def trunc_sssp(g, v, y, meter=None):
    """Edges v->t and t->v weighted by distance, for the y nearest in each direction.

    Ties on distance go to the smaller vertex id.
    """
    _check_source(g, v)
    out = AugmentSet(weighted=True)
    t, d = trunc_nearest(g, v, y, "fwd", meter)
    out.add_arrays(np.full(t.size, v, dtype=np.int64), t, d)
    t, d = trunc_nearest(g, v, y, "bwd", meter)
    out.add_arrays(t, np.full(t.size, v, dtype=np.int64), d)
    return out


def trunc_sssp_all(g, y, sources=None, meter=None, per_source=False):
    """(src, dst, dist) arrays of TruncSSSP(g, v, y) for every v in ``sources``.

    With ``per_source`` a fourth array gives each source's search work.
    """
    sources = np.arange(g.n, dtype=np.int64) if sources is None else np.asarray(sources, dtype=np.int64)
    ptr, idx, w = g.csr("fwd")
    fs, ft, fd, w1 = _k.trunc_many(ptr, idx, w, sources, int(y))
    ptr, idx, w = g.csr("bwd")
    bs, bt, bd, w2 = _k.trunc_many(ptr, idx, w, sources, int(y))
    if meter is not None:
        meter.charge(int(w1.sum() + w2.sum()))
    out = np.concatenate([fs, bt]), np.concatenate([ft, bs]), np.concatenate([fd, bd])
    return out + (np.asarray(w1) + np.asarray(w2),) if per_source else out


def hop_limited_bf(g, s, h, meter=None):
    """bdist^h from s: h synchronous rounds of edge relaxation."""
    _check_source(g, s)
    if h < 0:
        raise InputError("hop limit must be non-negative")
    ptr, idx, w = g.csr("fwd")
    dist, work = _k.bf_hops(ptr, idx, w, s, int(h))
    if meter is not None:
        meter.charge(work)
    return WeightedDistances(s, dist)


def hops_within(g, s, bound, hmax=None):
    """Per vertex, the least h with bdist^h(s, .) <= bound (-1 if none by hmax)."""
    _check_source(g, s)
    ptr, idx, w = g.csr("fwd")
    hmax = g.n if hmax is None else int(hmax)
    hops, _work = _k.hops_within(ptr, idx, w, s, np.asarray(bound, dtype=np.int64), hmax)
    return hops


def rounding_unit(delta, eps, h0):
    """Integer rounding unit max(1, floor(eps * delta / (9 * h0)))."""
    q = Fraction(eps) * Fraction(delta) / (9 * int(h0))
    return max(1, math.floor(q))


def rounded_weights(g, unit):
    """Weights rounded up to multiples of ``unit``, expressed in units."""
    w = g.weights() if g.weighted else np.ones(g.m, dtype=np.int64)
    return -((-w) // unit)


def rounded_bounded_search(g, s, delta, eps, h0, meter=None, direction="fwd"):
    """Distances in G with weights rounded up to multiples of the unit.

    Explores level by level, one unit per level, up to ``4 * delta``.  Values
    never underestimate the true distance; a path of at most h0 hops is
    overestimated by at most ``h0 * unit``.
    """
    _check_source(g, s)
    delta = Fraction(delta)
    eps = Fraction(eps)
    if delta <= 0:
        raise InputError("distance guess must be positive")
    if not 0 < eps < 1:
        raise InputError("eps must lie in (0, 1)")
    if h0 < 1:
        raise InputError("hopbound must be >= 1")
    unit = rounding_unit(delta, eps, h0)
    level_cap = math.ceil(4 * delta / unit)
    ptr, idx, _ = g.csr(direction)
    key = ("units", direction, unit)
    wu = g._kcache.get(key)
    if wu is None:
        base = g.weights() if g.weighted else np.ones(g.m, dtype=np.int64)
        if direction == "bwd" and g.weighted:
            base = g.in_w
        wu = _k.prepare(-((-np.asarray(base)) // unit))
        g._kcache[key] = wu
    dist, levels, work = _k.dial(ptr, idx, wu, s, level_cap)
    reached = dist != UNREACHED
    dist[reached] *= unit
    if meter is not None:
        meter.charge(work, span=levels * (1 + meter.barrier))
    return WeightedDistances(s, dist, unit=unit, levels=levels)


def unit_search(g, s, direction="fwd", level_cap=None, meter=None):
    """Level-synchronous search on integer weights treated as unit counts.

    Span is charged per explored level, including empty ones, as a
    frontier-per-level BFS would pay.
    """
    _check_source(g, s)
    cap = floor_cap(level_cap)
    if cap < 0:
        return WeightedDistances(s, np.full(g.n, UNREACHED, dtype=np.int64))
    ptr, idx, w = g.csr(direction)
    dist, levels, work = _k.dial(ptr, idx, w, s, cap)
    if meter is not None:
        meter.charge(work, span=levels * (1 + meter.barrier))
    return WeightedDistances(s, dist, levels=levels)
