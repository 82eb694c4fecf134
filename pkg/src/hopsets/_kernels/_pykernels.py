"""Pure-Python search and bit-matrix kernels.

Same signatures and results as the compiled ``_ckernels`` module, including the
work counters, so the cost meter is backend independent.  CSR inputs are plain
lists produced by :func:`prepare`.
"""
from heapq import heappop, heappush

import numpy as np

INF = np.iinfo(np.int64).max
NAME = "python"


def prepare(arr):
    return np.asarray(arr).tolist()


def _out(values):
    return np.array(values, dtype=np.int64)


def bfs(ptr, idx, s, hop_cap):
    n = len(ptr) - 1
    dist = [-1] * n
    dist[s] = 0
    frontier = [s]
    levels = 0
    work = 0
    depth = 0
    while frontier and (hop_cap < 0 or depth < hop_cap):
        levels += 1
        nxt = []
        for u in frontier:
            lo, hi = ptr[u], ptr[u + 1]
            work += 1 + hi - lo
            for e in range(lo, hi):
                v = idx[e]
                if dist[v] < 0:
                    dist[v] = depth + 1
                    nxt.append(v)
        frontier = nxt
        depth += 1
    return _out(dist), levels, work


def dijkstra(ptr, idx, w, s, cap):
    n = len(ptr) - 1
    dist = [INF] * n
    dist[s] = 0
    heap = [(0, s)]
    work = 0
    while heap:
        d, u = heappop(heap)
        work += 1
        if d != dist[u]:
            continue
        for e in range(ptr[u], ptr[u + 1]):
            work += 1
            v = idx[e]
            nd = d + w[e]
            if nd < dist[v] and nd <= cap:
                dist[v] = nd
                heappush(heap, (nd, v))
    return _out(dist), work


def dijkstra_rows(ptr, idx, w, sources, caps):
    """One capped search per source; returns a (sources x n) distance matrix and per-source work."""
    n = len(ptr) - 1
    rows = np.full((len(sources), n), INF, dtype=np.int64)
    work = np.zeros(len(sources), dtype=np.int64)
    for i, (s, cap) in enumerate(zip(sources, caps)):
        if cap >= 0:
            rows[i], work[i] = dijkstra(ptr, idx, w, int(s), int(cap))
    return rows, work


def annulus_select(df, db, lo, width, radii, base):
    """Per row i, the eta in lo[i] .. lo[i] + width - 1 minimizing
    |{u : radii[eta-1-base] < min(df, db)[u] <= radii[eta+1-base]}| (smallest eta on ties).

    Returns eta, the ball radius radii[eta-base], the candidate counts, and the
    annulus, ancestor (db <= ball) and descendant (df <= ball) masks.
    """
    k, n = len(df), (len(df[0]) if len(df) else 0)
    eta = np.zeros(k, dtype=np.int64)
    ball = np.zeros(k, dtype=np.int64)
    counts = np.zeros((k, width), dtype=np.int64)
    fmask = np.zeros((k, n), dtype=bool)
    anc = np.zeros((k, n), dtype=bool)
    desc = np.zeros((k, n), dtype=bool)
    radii = [int(x) for x in radii]
    for i in range(k):
        f, b = [int(x) for x in df[i]], [int(x) for x in db[i]]
        dmin = [min(x, y) for x, y in zip(f, b)]
        best = None
        for c in range(width):
            e = int(lo[i]) + c
            a, z = radii[e - 1 - base], radii[e + 1 - base]
            counts[i, c] = sum(1 for d in dmin if d != INF and a < d <= z)
            if best is None or counts[i, c] < counts[i, best]:
                best = c
        e = int(lo[i]) + best
        eta[i], ball[i] = e, radii[e - base]
        a, z = radii[e - 1 - base], radii[e + 1 - base]
        for u in range(n):
            fmask[i, u] = dmin[u] != INF and a < dmin[u] <= z
            anc[i, u] = b[u] <= ball[i]
            desc[i, u] = f[u] <= ball[i]
    return eta, ball, counts, fmask, anc, desc


def dijkstra_many(ptr, idx, w, sources, cap):
    src, dst, dd = [], [], []
    work = 0
    for s in sources:
        dist, wk = dijkstra(ptr, idx, w, s, cap)
        work += wk
        for t in np.flatnonzero(dist != INF).tolist():
            if t != s:
                src.append(s)
                dst.append(t)
                dd.append(int(dist[t]))
    return _out(src), _out(dst), _out(dd), work


def trunc_dijkstra(ptr, idx, w, s, y):
    if y <= 0:
        return _out([]), _out([]), 0
    n = len(ptr) - 1
    dist = [INF] * n
    dist[s] = 0
    heap = [(0, s)]
    settled = []
    bound = INF
    work = 0
    while heap:
        if heap[0][0] > bound:
            break
        d, u = heappop(heap)
        work += 1
        if d != dist[u]:
            continue
        if u != s:
            settled.append((d, u))
            if len(settled) == y:
                bound = d
        for e in range(ptr[u], ptr[u + 1]):
            work += 1
            v = idx[e]
            nd = d + w[e]
            if nd < dist[v]:
                dist[v] = nd
                heappush(heap, (nd, v))
    settled.sort()
    settled = settled[:y]
    return _out([u for _, u in settled]), _out([d for d, _ in settled]), work


def trunc_many(ptr, idx, w, sources, y):
    """Truncated searches from every source; work is reported per source."""
    src, dst, dd = [], [], []
    work = []
    for s in sources:
        t, d, wk = trunc_dijkstra(ptr, idx, w, s, y)
        work.append(wk)
        src.extend([s] * len(t))
        dst.extend(t.tolist())
        dd.extend(d.tolist())
    return _out(src), _out(dst), _out(dd), _out(work)


def bf_hops(ptr, idx, w, s, h):
    n = len(ptr) - 1
    dist = [INF] * n
    dist[s] = 0
    frontier = [s]
    work = 0
    for _ in range(h):
        if not frontier:
            break
        new = dist[:]
        changed = []
        for u in frontier:
            du = dist[u]
            for e in range(ptr[u], ptr[u + 1]):
                work += 1
                v = idx[e]
                nd = du + w[e]
                if nd < new[v]:
                    if new[v] == dist[v]:
                        changed.append(v)
                    new[v] = nd
        dist = new
        frontier = sorted(set(changed))
    return _out(dist), work


def hops_within(ptr, idx, w, s, bound, hmax):
    """Smallest h with bdist^h(s, t) <= bound[t], or -1 if none up to hmax."""
    n = len(ptr) - 1
    bound = list(bound)
    dist = [INF] * n
    dist[s] = 0
    hops = [-1] * n
    if bound[s] >= 0:
        hops[s] = 0
    frontier = [s]
    work = 0
    h = 0
    while frontier and h < hmax:
        h += 1
        new = dist[:]
        changed = []
        for u in frontier:
            du = dist[u]
            for e in range(ptr[u], ptr[u + 1]):
                work += 1
                v = idx[e]
                nd = du + w[e]
                if nd < new[v]:
                    if new[v] == dist[v]:
                        changed.append(v)
                    new[v] = nd
        dist = new
        frontier = sorted(set(changed))
        for v in frontier:
            if hops[v] < 0 and dist[v] <= bound[v]:
                hops[v] = h
    return _out(hops), work


def dial(ptr, idx, wu, s, level_cap):
    """Bucketed search on integer unit weights, one bucket per level."""
    n = len(ptr) - 1
    dist = [INF] * n
    dist[s] = 0
    buckets = {0: [s]}
    pending = 1
    work = 0
    last = 0
    level = 0
    while pending and level <= level_cap:
        bucket = buckets.pop(level, None)
        if bucket:
            pending -= len(bucket)
            i = 0
            while i < len(bucket):
                u = bucket[i]
                i += 1
                work += 1
                if dist[u] != level:
                    continue
                last = level
                for e in range(ptr[u], ptr[u + 1]):
                    work += 1
                    v = idx[e]
                    nd = level + wu[e]
                    if nd < dist[v] and nd <= level_cap:
                        dist[v] = nd
                        if nd == level:
                            bucket.append(v)
                        else:
                            buckets.setdefault(nd, []).append(v)
                            pending += 1
        level = min(buckets) if buckets else level + 1
    return _out(dist), last + 1, work


def bool_matmul(a, b):
    """Row-blocked OR-of-rows product on uint64 word rows."""
    a = np.ascontiguousarray(a, dtype=np.uint64)
    b = np.ascontiguousarray(b, dtype=np.uint64)
    dim, words = a.shape
    arows = a.tolist()
    brows = [int.from_bytes(r.tobytes(), "little") for r in b]
    out = []
    work = 0
    for i in range(dim):
        acc = 0
        row = arows[i]
        for wi in range(words):
            word = row[wi]
            work += 1
            while word:
                low = word & -word
                k = wi * 64 + low.bit_length() - 1
                acc |= brows[k]
                work += words
                word ^= low
        out.append(acc)
    c = np.zeros((dim, words), dtype=np.uint64)
    for i, acc in enumerate(out):
        c[i] = np.frombuffer(acc.to_bytes(words * 8, "little"), dtype=np.uint64)
    return c, work
