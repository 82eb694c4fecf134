"""End-to-end uses: low-span reachability and (1+eps)-approximate SSSP."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import WDiGraph, union
from .hopset import cfr_build, guess_range
from .parexec import CostMeter, scoped_parallel
from .search import UNREACHED, dijkstra, hops_within, par_bfs, rounded_bounded_search
from .shortcut import build_shortcut


@dataclass
class ReachResult:
    reachable: np.ndarray  # sorted vertex ids
    levels: int
    size_H: int
    build: CostMeter
    query: CostMeter


def reach(g, s, params, tc_prune=True, barrier=1):
    """Vertices reachable from s, by a parallel BFS over G ∪ H."""
    build = CostMeter(barrier)
    h, _trace = build_shortcut(g, params, tc_prune, build)
    query = CostMeter(barrier)
    d = par_bfs(union(g, h), s, query)
    return ReachResult(np.flatnonzero(d.reached()), d.levels, len(h), build, query)


def floor_bound(dist, eps):
    """dist + floor(eps * dist), exactly; UNREACHED stays UNREACHED."""
    eps = Fraction(eps)
    out = np.asarray(dist, dtype=np.int64).copy()
    fin = out != UNREACHED
    out[fin] += (eps.numerator * out[fin]) // eps.denominator
    return out


def source_hopbound(gu, s, eps_half, exact):
    """Least h such that every t reachable from s has bdist^h <= dist + floor(eps_half * dist)."""
    hops = hops_within(gu, s, floor_bound(exact, eps_half), gu.n)
    fin = exact != UNREACHED
    fin[s] = False
    return max(1, int(hops[fin].max())) if fin.any() else 1


@dataclass
class SsspResult:
    dist: np.ndarray
    h0: int
    size_H: int
    guesses: int
    build: CostMeter
    query: CostMeter
    exact: np.ndarray | None = None

    def max_ratio(self):
        """max dist / exact over reached t with exact > 0, as a Fraction (1 if none)."""
        if self.exact is None:
            return None
        best = Fraction(1)
        fin = (self.exact != UNREACHED) & (self.exact > 0)
        for a, b in zip(self.dist[fin].tolist(), self.exact[fin].tolist()):
            best = max(best, Fraction(a, b))
        return best

    def consistent(self):
        """Same reachable set as the oracle and no value below it."""
        if self.exact is None:
            return True
        return bool(np.array_equal(self.dist == UNREACHED, self.exact == UNREACHED)
                    and (self.dist >= self.exact).all())


def approx_sssp(g, s, hparams, trunc_prune=True, h0=None, barrier=1, with_oracle=True):
    """(1+eps)-approximate distances from s.

    Builds a hopset H, then runs rounded level-synchronous searches on
    G ∪ H for every distance guess 2^j and keeps the per-vertex minimum.
    ``h0`` defaults to the measured (1+eps/2) hopbound of G ∪ H from s.
    """
    if not g.weighted:
        g = WDiGraph(g.n, g._src, g._dst, np.ones(g.m, dtype=np.int64))
    eps = Fraction(hparams.eps)
    build = CostMeter(barrier)
    h, _trace = cfr_build(g, hparams, trunc_prune, build)
    gu = union(g, h)
    exact = dijkstra(g, s).dist if (with_oracle or h0 is None) else None
    if h0 is None:
        h0 = source_hopbound(gu, s, eps / 2, exact)
    query = CostMeter(barrier)
    best = np.full(g.n, UNREACHED, dtype=np.int64)
    guesses = guess_range(g.n, max(g.W, 1))
    runs = scoped_parallel(
        [lambda m, j=j: rounded_bounded_search(gu, s, Fraction(2) ** j, eps, h0, m).dist for j in guesses], query)
    for d in runs:
        np.minimum(best, d, out=best)
    return SsspResult(best, h0, len(h), len(guesses), build, query, exact if with_oracle else None)
