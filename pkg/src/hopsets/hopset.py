"""(1+eps)-hopsets: folklore sampling and the distance-guessing recursion with
fringe/core subproblems and truncated-search pruning."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import rng as _rng
from .augment import AugmentSet
from .errors import InputError
from .graph import VertexSubset, WDiGraph, induced, weight_bound
from .parexec import CostMeter, scoped_parallel
from ._kernels import backend as _k
from .search import UNREACHED, dijkstra, rounding_unit, trunc_sssp_all, unit_search
from .shortcut import RecursionTrace, _partition, _root_floor, log2n, max_level, sample_vertices


def hopset_rho_preset(n, m):
    """max(1, floor((m/n) ** (1/4)))."""
    if n < 1:
        raise InputError("need n >= 1")
    return _root_floor(max(m, n) / n, 4)


@dataclass(frozen=True)
class HopsetParams:
    k: int = 4
    lam: int = 2
    L: int = 2
    kc: Fraction = Fraction(1)  # the value of k**c dividing each distance guess
    eps: Fraction = Fraction(1, 4)
    eta_min: int = 7
    eta_max: int = 16
    sigma_max: int = 4
    rho: int = 1
    rounds: int = 3
    preset: str = "desk"
    seed: int = 0
    parallel: bool = False
    h0: int | None = None
    force_level_prob: float | None = None  # testing hook: same probability at every level

    def __post_init__(self):
        object.__setattr__(self, "kc", Fraction(self.kc))
        object.__setattr__(self, "eps", Fraction(self.eps).limit_denominator(10**6))
        if self.k < 2 or self.lam < 1 or self.L < 0:
            raise InputError("need k >= 2, lam >= 1, L >= 0")
        if self.kc <= 0:
            raise InputError("k**c must be positive")
        if not 0 < self.eps < 1:
            raise InputError("eps must lie in (0, 1)")
        if self.eta_max != 2 * (self.eta_min + 1):
            raise InputError("eta_max must equal 2 * (eta_min + 1)")
        if self.eta_min < 1 or not 1 <= self.sigma_max <= self.eta_min + 1:
            raise InputError("need eta_min >= 1 and 1 <= sigma_max <= eta_min + 1")
        if self.rho < 1 or self.rounds < 1:
            raise InputError("rho and rounds must be >= 1")
        if self.parallel and (self.h0 is None or self.h0 < 1):
            raise InputError("parallel mode needs a hopbound h0 >= 1")
        if self.preset not in ("desk", "paper"):
            raise InputError(f"unknown preset {self.preset!r}")

    @classmethod
    def for_graph(cls, n, m, preset="desk", seed=0, eps=Fraction(1, 4), rho=None, **overrides):
        rho = hopset_rho_preset(n, m) if rho is None else int(rho)
        eps = Fraction(eps).limit_denominator(10**6)
        if preset == "paper":
            k = max(2, math.ceil(log2n(n)))
            lam = 100
            ln2 = log2n(n) ** 2
            eta_min = math.ceil(16 * lam * lam * k * k * ln2) - 1
            base = dict(k=k, lam=lam, L=math.ceil(15 - 2 * math.log(eps, k)),
                        eta_min=eta_min, eta_max=2 * (eta_min + 1),
                        sigma_max=math.ceil(4 * lam * lam * k * ln2), rounds=math.ceil(log2n(n)))
        elif preset == "desk":
            base = dict(k=4, lam=2, L=2, eta_min=7, eta_max=16, sigma_max=4, rounds=3)
        else:
            raise InputError(f"unknown preset {preset!r}")
        base.update(overrides)
        return cls(rho=rho, eps=eps, preset=preset, seed=seed, **base)

    def level_prob(self, r, n):
        if self.force_level_prob is not None:
            return min(1.0, max(0.0, self.force_level_prob))
        return min(1.0, self.lam * self.k ** (r + 1) * log2n(n) / max(n, 1))

    @property
    def eta_step(self):
        return (self.eta_min + 1) // self.sigma_max

    def eta_window(self, sigma):
        """Integer candidates eta_min + 1 + step * [(sigma - 1), sigma]."""
        lo = self.eta_min + 1 + self.eta_step * (sigma - 1)
        return lo, lo + self.eta_step

    def with_(self, **kw):
        return replace(self, **kw)


# -- level assignment ----------------------------------------------------------

NONE = -1


@dataclass(frozen=True)
class LevelAssignment:
    levels: np.ndarray  # NONE (-1) where every trial failed

    def count(self, r):
        return int(np.count_nonzero(self.levels == r))


def assign_levels(n, p, seed=None, round_=0, guess=0):
    """ell(v) = first r in [0, ceil(log_k n)] whose Bernoulli trial succeeds."""
    seed = p.seed if seed is None else seed
    top = max_level(n, p.k)
    probs = np.array([p.level_prob(r, n) for r in range(top + 1)])
    hits = _rng.stream(seed, "cfr_levels", round_, guess).random((n, top + 1)) < probs
    first = np.argmax(hits, axis=1)
    return LevelAssignment(np.where(hits.any(axis=1), first, NONE).astype(np.int64))


# -- exact radius arithmetic ----------------------------------------------------


def radius_cap(x, kr=1, unit=1):
    """Largest integer d with (d * unit) ** 2 * kr <= x ** 2, i.e. d * unit <= x / sqrt(kr)."""
    x = Fraction(x)
    if x < 0:
        return -1
    return math.isqrt((x.numerator ** 2) // (x.denominator ** 2 * kr * unit * unit))


@dataclass(frozen=True)
class _Ctx:
    p: HopsetParams
    n: int
    levels: np.ndarray
    D: Fraction
    unit: int
    trunc_prune: bool
    audit: bool
    round_: int
    guess: int
    top: int
    _caps: dict = field(default_factory=dict, compare=False)

    def cap(self, eta, r):
        """Integer radius (in units) for eta * D_r at level r."""
        got = self._caps.get((eta, r))
        if got is None:
            got = self._caps[(eta, r)] = radius_cap(eta * self.D / self.p.lam ** r, self.p.k ** r, self.unit)
        return got

    def radii(self, r):
        """(caps, base) with caps[e - base] = cap(e, r) for every eta a window can touch."""
        got = self._caps.get(("radii", r))
        if got is None:
            base = self.p.eta_min
            top = self.p.eta_window(self.p.sigma_max)[1] + 1
            got = self._caps[("radii", r)] = (
                np.array([self.cap(e, r) for e in range(base, top + 1)], dtype=np.int64), base)
        return got

    def search(self, g, v, direction, cap, meter):
        if self.p.parallel:
            return unit_search(g, v, direction, cap, meter).dist
        return dijkstra(g, v, direction, cap, meter).dist

    def rows(self, g, sources, direction, caps, barrier):
        """Capped searches from many sources: (distance rows, work, span) per source.

        Charges match what ``search`` would put on one meter per source.
        """
        ptr, idx, w = g.csr(direction)
        caps = np.asarray(caps, dtype=np.int64)
        if not self.p.parallel:
            rows, work = _k.dijkstra_rows(ptr, idx, w, np.asarray(sources, dtype=np.int64), caps)
            return rows, work, work
        rows = np.full((len(sources), g.n), UNREACHED, dtype=np.int64)
        work = np.zeros(len(sources), dtype=np.int64)
        span = np.zeros(len(sources), dtype=np.int64)
        for i, (s, cap) in enumerate(zip(np.asarray(sources).tolist(), caps.tolist())):
            if cap >= 0:
                rows[i], levels, work[i] = _k.dial(ptr, idx, w, s, cap)
                span[i] = levels * (1 + barrier)
        return rows, work, span


_ROW_BUDGET = 1 << 22  # distance entries held at once
_DENSE_PAIRS = 1 << 24  # above this many pairs the final reduction sorts instead


def _batched(ctx, g, sources, caps, barrier, build):
    """Run both-direction searches in chunks; ``build(a, df, db)`` handles the
    rows for ``sources[a:a + len(df)]``.

    Returns per-source work and span arrays.
    """
    works, spans = [np.zeros(0, dtype=np.int64)], [np.zeros(0, dtype=np.int64)]
    step = max(1, _ROW_BUDGET // max(g.n, 1))
    for a in range(0, len(sources), step):
        src, cap = sources[a:a + step], caps[a:a + step]
        df, wf, sf = ctx.rows(g, src, "fwd", cap, barrier)
        db, wb, sb = ctx.rows(g, src, "bwd", cap, barrier)
        build(a, df, db)
        works.append(wf + wb)
        spans.append(sf + sb)
    return np.concatenate(works), np.concatenate(spans)


# -- fringe selection -------------------------------------------------------------


@dataclass(frozen=True)
class FringeSpec:
    v: int
    sigma: int
    eta: int
    fringe: VertexSubset
    counts: tuple = ()


def choose_eta(g, v, r, D, p, sigma, meter=None, unit=1):
    """Pick eta in the sigma window minimizing the fringe annulus around v.

    Distances come from two capped searches at the outermost radius.  Ties go
    to the smallest eta.
    """
    if not 1 <= sigma <= p.sigma_max:
        raise InputError(f"sigma {sigma} outside [1, {p.sigma_max}]")
    ctx = _Ctx(p, g.n, None, Fraction(D), unit, False, False, 0, 0, 0)
    lo, hi = p.eta_window(sigma)
    outer = ctx.cap(hi + 1, r)
    df = ctx.search(g, v, "fwd", outer, meter)
    db = ctx.search(g, v, "bwd", outer, meter)
    radii, base = ctx.radii(r)
    eta, _ball, counts, mask, _anc, _desc = _k.annulus_select(df[None], db[None], [lo], hi - lo + 1, radii, base)
    return FringeSpec(v, sigma, int(eta[0]), VertexSubset(np.flatnonzero(mask[0]), g.n),
                      tuple(counts[0].tolist()))


# -- recursion ----------------------------------------------------------------


@dataclass
class _Sub:
    graph: object
    glob: np.ndarray
    path: tuple
    trunc: tuple = None  # truncated-search result for this exact graph, when known


@dataclass
class AuditRecord:
    kind: str  # outer, shortcutter, trunc, pivot, cores
    level: int
    members: object  # global ids of the creation subgraph, None for the whole graph
    data: dict = field(default_factory=dict)


def _emit(out, glob, src, dst, w, unit):
    out.append((glob[src], glob[dst], np.asarray(w, dtype=np.int64) * unit))


def _star_rows(vs, df, db):
    """Edges v->u weighted df[u] and u->v weighted db[u] for each center v = vs[i]
    (row i) and every u != v it reached; ``owner`` gives the row of each edge."""
    k = np.arange(len(vs))
    fm, bm = df != UNREACHED, db != UNREACHED
    fm[k, vs] = bm[k, vs] = False
    fr, fc = np.nonzero(fm)
    br, bc = np.nonzero(bm)
    src = np.concatenate([vs[fr], bc])
    dst = np.concatenate([fc, vs[br]])
    return src, dst, np.concatenate([df[fr, fc], db[br, bc]]), np.concatenate([fr, br])


def _audit_stars(audit, kind, r, members, glob, vs, src, dst, w, owner, unit):
    order = np.argsort(owner, kind="stable")
    bounds = np.searchsorted(owner[order], np.arange(len(vs) + 1))
    for i, v in enumerate(vs.tolist()):
        sel = order[bounds[i]:bounds[i + 1]]
        audit.append(AuditRecord(kind, r, members, dict(
            v=int(glob[v]), src=glob[src[sel]], dst=glob[dst[sel]], w=w[sel] * unit)))


def _subproblem(sub, r, ctx, meter):
    p = ctx.p
    gl, glob = sub.graph, sub.glob
    nl = gl.n
    lv = ctx.levels[glob]
    emitted, audit = [], []
    members = None if len(sub.path) == 0 else glob
    stats = dict(pivots=0, max_ball=0, prune_calls=0, fringe=0, cores=0)

    leaves, results = [], []
    if ctx.trunc_prune and nl > 1:
        # one kernel call per direction; each vertex stays a separate metered branch
        if sub.trunc is None:
            sub.trunc = trunc_sssp_all(gl, p.rho ** 2, per_source=True)
        src, dst, w, per_vertex = sub.trunc
        leaves.append((per_vertex, per_vertex, "trunc_prune"))
        _emit(emitted, glob, src, dst, w, ctx.unit)
        if ctx.audit:
            audit.append(AuditRecord("trunc", r, members, dict(
                v=None, src=glob[src], dst=glob[dst], w=np.asarray(w) * ctx.unit)))
        stats["prune_calls"] = nl

    sc = np.flatnonzero(lv == r + p.L)
    pivots = np.flatnonzero(lv == r)
    sigmas = []
    if pivots.size:
        sigmas = _rng.small_ints(1, p.sigma_max + 1, pivots.size, p.seed, "cfr_sigma",
                                 ctx.round_, ctx.guess, r, *sub.path).tolist()
    windows = [p.eta_window(sg) for sg in sigmas]
    sources = np.concatenate([sc, pivots])

    width = p.eta_step + 1
    radii = ctx.radii(r)
    piv_lo = np.array([lo for lo, _hi in windows], dtype=np.int64)
    chunks = []

    def build(a, df, db):
        ns = max(0, min(sc.size - a, len(df)))
        if ns:
            vs = sources[a:a + ns]
            src, dst, w, owner = _star_rows(vs, df[:ns], db[:ns])
            _emit(emitted, glob, src, dst, w, ctx.unit)
            if ctx.audit:
                _audit_stars(audit, "shortcutter", r, members, glob, vs, src, dst,
                             w, owner, ctx.unit)
        if ns < len(df):
            i0 = a + ns - sc.size
            df, db = df[ns:], db[ns:]
            lo = piv_lo[i0:i0 + len(df)]
            eta, _ball, counts, fmask, anc, desc = _k.annulus_select(df, db, lo, width, *radii)
            chunks.append((i0, eta, fmask, anc, desc, counts))

    if sources.size:
        # searches run batched; each source remains its own metered branch
        caps = [ctx.cap(p.eta_max, r)] * sc.size + [ctx.cap(hi + 1, r) for _lo, hi in windows]
        work, span = _batched(ctx, gl, sources, caps, meter.barrier, build)
        leaves.append((work, span, None))
    scoped_parallel([], meter, leaves)

    children = []
    rel, cross = [], np.zeros(nl, dtype=bool)
    for i0, eta, fmask, anc, desc, counts in chunks:
        stats["pivots"] += len(eta)
        stats["max_ball"] = max(stats["max_ball"], int((anc | desc).sum(axis=1).max()))
        both = anc & desc
        cross |= both.any(axis=0)
        pair = np.empty((2 * len(eta), nl), dtype=bool)
        pair[0::2], pair[1::2] = anc & ~both, desc & ~both
        rel.append(pair)
        sizes = fmask.sum(axis=1)
        for i in range(len(eta)):
            v = int(pivots[i0 + i])
            fringe = np.flatnonzero(fmask[i]) if ctx.audit or sizes[i] > 1 else None
            if ctx.audit:
                audit.append(AuditRecord("pivot", r, members, dict(
                    v=int(glob[v]), sigma=sigmas[i0 + i], eta=int(eta[i]), D=ctx.D,
                    counts=tuple(counts[i].tolist()), fringe=glob[fringe],
                    anc=glob[np.flatnonzero(anc[i])], desc=glob[np.flatnonzero(desc[i])])))
            if sizes[i] > 1 and r < ctx.top:
                stats["fringe"] += 1
                children.append(_Sub(induced(gl, VertexSubset.from_sorted(fringe, nl)), glob[fringe],
                                     sub.path + (1, int(glob[v]))))
    rel = np.concatenate(rel) if rel else np.zeros((0, nl), dtype=bool)

    meter.charge(nl * (len(rel) + 1), span=1 + meter.barrier)
    keep = np.flatnonzero(~cross)
    parts = []
    if keep.size and r < ctx.top:
        bits = np.ascontiguousarray(rel[:, keep].T)
        for j, part in enumerate(_partition(keep.size, bits)):
            part = keep[part]
            parts.append(glob[part])
            if part.size == nl:
                # nothing split off: the child is this same graph, search results included
                stats["cores"] += 1
                children.append(_Sub(gl, glob, sub.path + (0, j), sub.trunc))
            elif part.size > 1:
                stats["cores"] += 1
                children.append(_Sub(induced(gl, VertexSubset.from_sorted(part, nl)), glob[part], sub.path + (0, j)))
    if ctx.audit and pivots.size:
        audit.append(AuditRecord("cores", r, members, dict(parts=parts, crossed=glob[np.flatnonzero(cross)])))
    return emitted, children, stats, audit


def _outer(g, ctx, meter, j):
    """Shortcutters with ell(v) <= L on the whole graph within radius 2^(j+1)."""
    p = ctx.p
    cap = radius_cap(Fraction(2) ** (j + 1), 1, ctx.unit)
    chosen = np.flatnonzero((ctx.levels >= 0) & (ctx.levels <= p.L))
    emitted, audit = [], []
    ident = np.arange(g.n, dtype=np.int64)

    def build(a, df, db):
        vs = chosen[a:a + len(df)]
        src, dst, w, owner = _star_rows(vs, df, db)
        _emit(emitted, ident, src, dst, w, ctx.unit)
        if ctx.audit:
            _audit_stars(audit, "outer", 0, None, ident, vs, src, dst, w, owner, ctx.unit)

    work, span = _batched(ctx, g, chosen, [cap] * chosen.size, meter.barrier, build)
    scoped_parallel([], meter, [(work, span, None)])
    return emitted, audit


def guess_range(n, W):
    """Exponents j in [-1, floor(log2(n * W))]."""
    nw = n * W
    return list(range(-1, nw.bit_length())) if nw >= 1 else [-1]


def _rounded(g, unit):
    if unit == 1:
        return g
    return WDiGraph(g.n, g._src, g._dst, -((-g.w) // unit))


def _one_guess(g, p, trunc_prune, audit, round_, j, meter):
    n = g.n
    delta = Fraction(2) ** j
    unit = rounding_unit(delta, p.eps, p.h0) if p.parallel else 1
    gd = _rounded(g, unit)
    levels = assign_levels(n, p, p.seed, round_, j + 1).levels
    ctx = _Ctx(p, n, levels, delta / p.kc, unit, trunc_prune, audit, round_, j + 1, max_level(n, p.k))
    emitted, records = _outer(gd, ctx, meter, j)
    per_level = [[(emitted, dict(pivots=0, max_ball=0, prune_calls=0, fringe=0, cores=0, outer=True))]]
    frontier = [_Sub(gd, np.arange(n, dtype=np.int64), ())]
    r = 0
    while frontier:
        if r > ctx.top:
            raise AssertionError(f"recursion reached level {r} > ceil(log_k n) = {ctx.top}")
        outs = scoped_parallel([lambda m, s=s: _subproblem(s, r, ctx, m) for s in frontier], meter)
        while len(per_level) <= r:
            per_level.append([])
        nxt = []
        for em, children, stats, rec in outs:
            per_level[r].append((em, stats))
            records.extend(rec)
            nxt.extend(children)
        frontier = nxt
        r += 1
    return per_level, records, unit


def cfr_build(g, p, trunc_prune=True, meter=None, audit=False):
    """Weighted hopset for a non-negatively weighted digraph.

    Returns (H, trace).  Every edge weight is an exact distance in the
    subgraph where the edge was emitted (the rounded graph in parallel
    mode), so adding H never shortens a distance.
    """
    if not g.weighted:
        g = WDiGraph(g.n, g._src, g._dst, np.ones(g.m, dtype=np.int64))
    if g.m and g.W > weight_bound(g.n):
        raise InputError(f"max weight {g.W} exceeds the bound {weight_bound(g.n)}")
    meter = meter if meter is not None else CostMeter()
    n = g.n
    trace = RecursionTrace()
    trace.notes["mode"] = "parallel-rounded" if p.parallel else "sequential-exact"
    if n <= 1:
        trace.level(0)
        return AugmentSet(weighted=True), trace
    jobs = [(rd, j) for rd in range(p.rounds) for j in guess_range(n, g.W)]
    outs = scoped_parallel(
        [lambda m, rd=rd, j=j: _one_guess(g, p, trunc_prune, audit, rd, j, m) for rd, j in jobs], meter)

    level_keys, level_w = [], []
    fringe_counts, core_counts, units, records = [], [], [], []
    for per_level, rec, unit in outs:
        units.append(unit)
        records.extend(rec)
        for r, items in enumerate(per_level):
            st = trace.level(r)
            while len(level_keys) <= r:
                level_keys.append([])
                level_w.append([])
                fringe_counts.append(0)
                core_counts.append(0)
            for em, stats in items:
                if not stats.get("outer"):
                    st.subproblems += 1
                st.pivots += stats["pivots"]
                st.max_ball = max(st.max_ball, stats["max_ball"])
                st.prune_calls += stats["prune_calls"]
                fringe_counts[r] += stats["fringe"]
                core_counts[r] += stats["cores"]
                for src, dst, w in em:
                    level_keys[r].append(src * n + dst)
                    level_w[r].append(w)
    h = AugmentSet(weighted=True)
    keys = np.concatenate([k for ks in level_keys for k in ks] or [np.empty(0, dtype=np.int64)])
    if keys.size:
        ws = np.concatenate([w for wl in level_w for w in wl])
        lvl = np.concatenate([np.full(sum(k.size for k in ks), r, dtype=np.int64)
                              for r, ks in enumerate(level_keys)])
        if n * n <= _DENSE_PAIRS:
            # dense tables: lightest weight per pair and the first level that emitted it
            best = np.full(n * n, UNREACHED, dtype=np.int64)
            np.minimum.at(best, keys, ws)
            lvl_of = np.full(n * n, len(level_keys), dtype=np.int64)
            np.minimum.at(lvl_of, keys, lvl)
            uniq = np.flatnonzero(best != UNREACHED)
            keys, ws, first = uniq, best[uniq], lvl_of[uniq]
        else:
            order = np.lexsort((ws, keys))
            keys, ws, lvl = keys[order], ws[order], lvl[order]
            starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
            first = np.minimum.reduceat(lvl, starts)
            keys, ws = keys[starts], ws[starts]
        for r, c in enumerate(np.bincount(first, minlength=len(level_keys)).tolist()):
            trace.level(r).edges_added += c
        h.add_arrays(keys // n, keys % n, ws)
    assert trace.total_edges() == len(h)
    assert trace.depth <= max_level(n, p.k) + 1
    trace.notes.update(fringe_subproblems=fringe_counts, core_subproblems=core_counts,
                       guesses=len(jobs), units=sorted(set(units)))
    if audit:
        trace.notes["audit"] = records
    return h, trace


# -- folklore -------------------------------------------------------------------


def folklore_hopset(g, sample_size, seed, meter=None):
    """Exact-distance edges between sampled related pairs (both directions searched)."""
    sample = sample_vertices(g.n, sample_size, seed, "folklore_hopset")
    mark = np.zeros(g.n, dtype=bool)
    mark[sample] = True
    out = AugmentSet(weighted=True)
    for u in sample.tolist():
        for direction in ("fwd", "bwd"):
            d = dijkstra(g, u, direction, meter=meter).dist
            v = np.flatnonzero((d != UNREACHED) & mark)
            uu = np.full(v.size, u, dtype=np.int64)
            if direction == "fwd":
                out.add_arrays(uu, v, d[v])
            else:
                out.add_arrays(v, uu, d[v])
    return out
