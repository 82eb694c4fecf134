"""Brute-force oracles and the measurement harness for shortcut sets and hopsets."""
from __future__ import annotations

import statistics
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import rng as _rng
from ._kernels import backend as _k
from .errors import OracleCapError
from .graph import gen_spined_dag, union
from .parexec import CostMeter
from .search import UNREACHED, bfs, dijkstra, hops_within, par_bfs

DEFAULT_ORACLE_CAP = 512
DEFAULT_PAIRS_SAMPLE = 512


@dataclass
class VerifyReport:
    reach_preserved: bool
    edges_valid: bool
    beta_meas: int
    size_H: int
    eps_used: Fraction | None = None
    worst_pair: tuple | None = None
    dist_preserved: bool | None = None
    mode: str = "exact"
    pairs_checked: int = 0
    work: int = 0
    span: int = 0

    def failures(self):
        bad = [name for name in ("edges_valid", "reach_preserved", "dist_preserved")
               if getattr(self, name) is False]
        return bad

    @property
    def ok(self):
        return not self.failures()

    def as_dict(self):
        d = asdict(self)
        d["eps_used"] = None if self.eps_used is None else str(self.eps_used)
        d["worst_pair"] = None if self.worst_pair is None else list(self.worst_pair)
        return d


def _guard(g, cap):
    if g.n > cap:
        raise OracleCapError(f"n = {g.n} exceeds the oracle cap {cap}")


def tc_oracle(g, cap=DEFAULT_ORACLE_CAP):
    """Reflexive reachability matrix from a BFS per vertex."""
    _guard(g, cap)
    ptr, idx, _ = g.csr("fwd")
    out = np.zeros((g.n, g.n), dtype=bool)
    for s in range(g.n):
        dist, _levels, _work = _k.bfs(ptr, idx, s, -1)
        out[s] = dist >= 0
    return out


def eps_bound(dist, eps):
    """dist + ceil(eps * dist) on int64 arrays, exactly; UNREACHED stays UNREACHED."""
    eps = Fraction(eps)
    d = np.asarray(dist, dtype=np.int64)
    out = d.copy()
    fin = d != UNREACHED
    out[fin] = d[fin] + (-((-eps.numerator * d[fin]) // eps.denominator))
    return out


def _pick(worst, best_val, s, t, val):
    """Track the maximum value and its lexicographically smallest (s, t)."""
    if val > best_val or (val == best_val and (worst is None or (s, t) < worst)):
        return (s, t), val
    return worst, best_val


def _sampled_pairs(g, count, seed):
    """Up to ``count`` distinct related pairs (s, t), s != t, drawn by seeded sampling."""
    gen = _rng.stream(seed, "verify_pairs", g.n)
    cache = {}
    pairs = set()
    attempts = 0
    while len(pairs) < count and attempts < 20 * count:
        attempts += 1
        s = int(gen.integers(g.n))
        if s not in cache:
            r = np.flatnonzero(bfs(g, s).reached())
            cache[s] = r[r != s]
        if cache[s].size:
            pairs.add((s, int(cache[s][gen.integers(cache[s].size)])))
    by_src = {}
    for s, t in sorted(pairs):
        by_src.setdefault(s, []).append(t)
    return by_src


def verify_shortcut(g, h, cap=DEFAULT_ORACLE_CAP, pairs_sample=DEFAULT_PAIRS_SAMPLE, seed=0, meter=None):
    """Validity, reachability preservation and the measured hopbound of G ∪ H.

    Above ``cap`` vertices the hopbound and preservation checks run over a
    seeded sample of related pairs; every H edge is still checked.
    """
    gu = union(g, h)
    hs, hd, _ = h.arrays()
    worst, beta = None, 0
    if g.n <= cap:
        tc = tc_oracle(g, cap)
        edges_valid = bool(tc[hs, hd].all()) if hs.size else True
        ptr, idx, _ = gu.csr("fwd")
        preserved = True
        for s in range(g.n):
            dist, _l, _w = _k.bfs(ptr, idx, s, -1)
            reach = dist >= 0
            if not np.array_equal(reach, tc[s]):
                preserved = False
            related = np.flatnonzero(tc[s] & reach)
            related = related[related != s]
            if related.size:
                d = dist[related]
                t = int(related[np.argmax(d)])
                worst, beta = _pick(worst, beta, s, t, int(d.max()))
        mode, checked = "exact", g.n * g.n
    else:
        edges_valid = True
        for u in np.unique(hs).tolist():
            reach = bfs(g, u).reached()
            if not reach[hd[hs == u]].all():
                edges_valid = False
                break
        by_src = _sampled_pairs(g, pairs_sample, seed)
        preserved = True
        checked = 0
        for s, ts in by_src.items():
            dg = bfs(g, s).reached()
            du = bfs(gu, s)
            if not np.array_equal(dg, du.reached()):
                preserved = False
            for t in ts:
                checked += 1
                worst, beta = _pick(worst, beta, s, t, du[t])
        mode = "sampled"
    m = meter or CostMeter()
    return VerifyReport(preserved, edges_valid, beta, len(h), None, worst, None, mode, checked, m.work, m.span)


def verify_hopset(g, h, eps, cap=DEFAULT_ORACLE_CAP, pairs_sample=DEFAULT_PAIRS_SAMPLE, seed=0, meter=None):
    """Exact distance preservation and the (1+eps) hopbound of G ∪ H.

    beta_meas is the maximum over related pairs of the least h with
    bdist^h(s, t) <= dist(s, t) + ceil(eps * dist(s, t)).
    """
    eps = Fraction(eps)
    gu = union(g, h)
    hs, hd, hw = h.arrays()
    worst, beta = None, 0
    edges_valid = True
    preserved = True
    if g.n <= cap:
        sources = {s: None for s in range(g.n)}
        mode = "exact"
    else:
        sources = _sampled_pairs(g, pairs_sample, seed)
        mode = "sampled"
        for u in np.unique(hs).tolist():
            sel = hs == u
            d = dijkstra(g, u).dist[hd[sel]]
            if (d == UNREACHED).any() or (hw[sel] < d).any():
                edges_valid = False
    checked = 0
    for s, targets in sources.items():
        dg = dijkstra(g, s).dist
        du = dijkstra(gu, s).dist
        if not np.array_equal(dg, du):
            preserved = False
        if mode == "exact":
            sel = hs == s
            d = dg[hd[sel]]
            if (d == UNREACHED).any() or (hw[sel] < d).any():
                edges_valid = False
        bound = eps_bound(dg, eps)
        hops = hops_within(gu, s, bound, g.n)
        ts = np.flatnonzero(dg != UNREACHED) if targets is None else np.asarray(targets)
        ts = ts[ts != s]
        checked += int(ts.size)
        if ts.size:
            hv = hops[ts]
            if (hv < 0).any():
                # not within n hops: only possible if H distorted distances
                hv = np.where(hv < 0, g.n, hv)
            t = int(ts[np.argmax(hv)])
            worst, beta = _pick(worst, beta, s, t, int(hv.max()))
    m = meter or CostMeter()
    return VerifyReport(preserved, edges_valid, beta, len(h), eps, worst, preserved, mode, checked, m.work, m.span)


def hopbound_by_search(g, h, s, t, bound):
    """Least hop count with bdist^h(s, t) <= bound, by doubling then binary search."""
    from .search import hop_limited_bf

    gu = union(g, h)
    hi = 1
    while hop_limited_bf(gu, s, hi).dist[t] > bound:
        if hi >= g.n:
            return -1
        hi = min(2 * hi, g.n)
    lo = hi // 2  # fails at lo (or lo == 0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if hop_limited_bf(gu, s, mid).dist[t] <= bound:
            hi = mid
        else:
            lo = mid
    return hi


def max_bfs_span(g, barrier, sources=None):
    """Largest par_bfs span over ``sources`` (all vertices by default)."""
    best = 0
    for s in range(g.n) if sources is None else sources:
        m = CostMeter(barrier)
        par_bfs(g, s, m)
        best = max(best, m.span)
    return best


@dataclass
class SweepRow:
    density: int
    m: int
    beta_meas: float
    size_H: float
    work: float
    span: float
    mode: str
    per_seed: list = field(default_factory=list)


def density_sweep(n, densities, builder, seeds, cap=DEFAULT_ORACLE_CAP, pairs_sample=DEFAULT_PAIRS_SAMPLE,
                  generator=gen_spined_dag, barrier=None):
    """Median hopbound, |H|, build work and par_bfs span per density.

    ``builder(g, seed, meter)`` returns H.  The span column is the largest
    par_bfs span over all sources of G ∪ H.
    """
    from .parexec import barrier_units

    barrier = barrier_units(n) if barrier is None else barrier
    rows = []
    for m_req in densities:
        per = []
        m_used = None
        for seed in seeds:
            g = generator(n, m_req, seed)
            m_used = g.m
            meter = CostMeter(barrier)
            h = builder(g, seed, meter)
            rep = verify_shortcut(g, h, cap, pairs_sample, seed)
            span = max_bfs_span(union(g, h), barrier)
            per.append(dict(seed=seed, beta=rep.beta_meas, size=len(h), work=meter.work, span=span))
            mode = rep.mode
        med = {key: statistics.median(r[key] for r in per) for key in ("beta", "size", "work", "span")}
        rows.append(SweepRow(m_req, m_used, med["beta"], med["size"], med["work"], med["span"], mode, per))
    return rows
