# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search and bit-matrix kernels (see _pykernels for the reference)."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

INF = np.iinfo(np.int64).max
NAME = "cython"

cdef int64_t CINF = 0x7FFFFFFFFFFFFFFF

ctypedef const int64_t[::1] ivec


def prepare(arr):
    return np.ascontiguousarray(arr, dtype=np.int64)


# ---------------------------------------------------------------- binary heap

cdef struct Heap:
    int64_t *key
    int64_t *vert
    Py_ssize_t size
    Py_ssize_t cap


cdef inline bint _less(Heap *h, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    if h.key[i] != h.key[j]:
        return h.key[i] < h.key[j]
    return h.vert[i] < h.vert[j]


cdef inline void _swap(Heap *h, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef int64_t t = h.key[i]
    h.key[i] = h.key[j]
    h.key[j] = t
    t = h.vert[i]
    h.vert[i] = h.vert[j]
    h.vert[j] = t


cdef int heap_init(Heap *h, Py_ssize_t cap) noexcept nogil:
    if cap < 16:
        cap = 16
    h.key = <int64_t *> malloc(cap * sizeof(int64_t))
    h.vert = <int64_t *> malloc(cap * sizeof(int64_t))
    h.size = 0
    h.cap = cap
    return 0 if (h.key != NULL and h.vert != NULL) else -1


cdef void heap_free(Heap *h) noexcept nogil:
    free(h.key)
    free(h.vert)


cdef int heap_push(Heap *h, int64_t k, int64_t v) noexcept nogil:
    cdef Py_ssize_t i, parent
    if h.size == h.cap:
        h.cap *= 2
        h.key = <int64_t *> realloc(h.key, h.cap * sizeof(int64_t))
        h.vert = <int64_t *> realloc(h.vert, h.cap * sizeof(int64_t))
        if h.key == NULL or h.vert == NULL:
            return -1
    i = h.size
    h.key[i] = k
    h.vert[i] = v
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _less(h, i, parent):
            _swap(h, i, parent)
            i = parent
        else:
            break
    return 0


cdef void heap_pop(Heap *h, int64_t *k, int64_t *v) noexcept nogil:
    cdef Py_ssize_t i = 0, l, r, m
    k[0] = h.key[0]
    v[0] = h.vert[0]
    h.size -= 1
    h.key[0] = h.key[h.size]
    h.vert[0] = h.vert[h.size]
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < h.size and _less(h, l, m):
            m = l
        if r < h.size and _less(h, r, m):
            m = r
        if m == i:
            break
        _swap(h, i, m)
        i = m


# ---------------------------------------------------------------- BFS

def bfs(ivec ptr, ivec idx, int64_t s, int64_t hop_cap):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    dist_arr = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    queue_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, level_end, e
    cdef int64_t u, v, depth = 0, levels = 0, work = 0
    with nogil:
        dist[s] = 0
        queue[tail] = s
        tail += 1
        while head < tail and (hop_cap < 0 or depth < hop_cap):
            levels += 1
            level_end = tail
            while head < level_end:
                u = queue[head]
                head += 1
                work += 1 + ptr[u + 1] - ptr[u]
                for e in range(ptr[u], ptr[u + 1]):
                    v = idx[e]
                    if dist[v] < 0:
                        dist[v] = depth + 1
                        queue[tail] = v
                        tail += 1
            depth += 1
    return dist_arr, levels, work


# ---------------------------------------------------------------- Dijkstra

cdef int64_t _dijkstra(ivec ptr, ivec idx, ivec w, int64_t s, int64_t cap,
                       int64_t[::1] dist) except -1 nogil:
    cdef Heap h
    cdef int64_t d, u, v, nd, work = 0
    cdef Py_ssize_t e
    if heap_init(&h, 64) != 0:
        with gil:
            raise MemoryError()
    dist[s] = 0
    heap_push(&h, 0, s)
    while h.size > 0:
        heap_pop(&h, &d, &u)
        work += 1
        if d != dist[u]:
            continue
        for e in range(ptr[u], ptr[u + 1]):
            work += 1
            v = idx[e]
            nd = d + w[e]
            if nd < dist[v] and nd <= cap:
                dist[v] = nd
                if heap_push(&h, nd, v) != 0:
                    heap_free(&h)
                    with gil:
                        raise MemoryError()
    heap_free(&h)
    return work


def dijkstra(ivec ptr, ivec idx, ivec w, int64_t s, int64_t cap):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    dist_arr = np.full(n, CINF, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    cdef int64_t work
    with nogil:
        work = _dijkstra(ptr, idx, w, s, cap, dist)
    return dist_arr, work


def dijkstra_rows(ivec ptr, ivec idx, ivec w, sources, caps):
    """One capped search per source; returns a (sources x n) distance matrix and per-source work."""
    cdef Py_ssize_t n = ptr.shape[0] - 1
    cdef Py_ssize_t k = len(sources), i
    rows_arr = np.full((k, n), CINF, dtype=np.int64)
    work_arr = np.zeros(k, dtype=np.int64)
    cdef int64_t[:, ::1] rows = rows_arr
    cdef int64_t[::1] work = work_arr
    cdef int64_t[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    cdef int64_t[::1] cap = np.ascontiguousarray(caps, dtype=np.int64)
    for i in range(k):
        if cap[i] < 0:
            continue
        with nogil:
            work[i] = _dijkstra(ptr, idx, w, src[i], cap[i], rows[i])
    return rows_arr, work_arr


def annulus_select(const int64_t[:, ::1] df, const int64_t[:, ::1] db, lo_in, Py_ssize_t width,
                   radii_in, int64_t base):
    cdef Py_ssize_t k = df.shape[0], n = df.shape[1], i, u, c, j
    cdef int64_t[::1] lo = np.ascontiguousarray(lo_in, dtype=np.int64)
    cdef int64_t[::1] radii = np.ascontiguousarray(radii_in, dtype=np.int64)
    cdef Py_ssize_t nr = radii.shape[0]
    eta_arr = np.zeros(k, dtype=np.int64)
    ball_arr = np.zeros(k, dtype=np.int64)
    counts_arr = np.zeros((k, width), dtype=np.int64)
    f_arr = np.zeros((k, n), dtype=np.uint8)
    a_arr = np.zeros((k, n), dtype=np.uint8)
    d_arr = np.zeros((k, n), dtype=np.uint8)
    below_arr = np.zeros(nr + 1, dtype=np.int64)
    cdef int64_t[::1] eta = eta_arr, ball = ball_arr, below = below_arr
    cdef int64_t[:, ::1] counts = counts_arr
    cdef unsigned char[:, ::1] fm = f_arr, an = a_arr, de = d_arr
    cdef int64_t d, lo_r, hi_r, bl, best
    with nogil:
        for i in range(k):
            # below[j] = |{u : dmin(u) <= radii[j]}| via bucket counts
            for j in range(nr + 1):
                below[j] = 0
            for u in range(n):
                d = df[i, u] if df[i, u] < db[i, u] else db[i, u]
                if d == CINF:
                    continue
                j = 0
                while j < nr and radii[j] < d:
                    j += 1
                below[j] += 1
            for j in range(1, nr):
                below[j] += below[j - 1]
            best = 0
            for c in range(width):
                j = lo[i] + c - base
                counts[i, c] = below[j + 1] - below[j - 1]
                if counts[i, c] < counts[i, best]:
                    best = c
            eta[i] = lo[i] + best
            j = eta[i] - base
            lo_r, hi_r, bl = radii[j - 1], radii[j + 1], radii[j]
            ball[i] = bl
            for u in range(n):
                d = df[i, u] if df[i, u] < db[i, u] else db[i, u]
                fm[i, u] = d != CINF and d > lo_r and d <= hi_r
                an[i, u] = db[i, u] <= bl
                de[i, u] = df[i, u] <= bl
    return eta_arr, ball_arr, counts_arr, f_arr.view(bool), a_arr.view(bool), d_arr.view(bool)


def dijkstra_many(ivec ptr, ivec idx, ivec w, sources, int64_t cap):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    dist_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    cdef int64_t work = 0, s
    src, dst, dd = [], [], []
    for s in sources:
        dist[:] = CINF
        with nogil:
            work += _dijkstra(ptr, idx, w, s, cap, dist)
        t = np.flatnonzero(dist_arr != CINF)
        t = t[t != s]
        src.append(np.full(t.shape[0], s, dtype=np.int64))
        dst.append(t.astype(np.int64))
        dd.append(dist_arr[t])
    if not src:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy(), work
    return np.concatenate(src), np.concatenate(dst), np.concatenate(dd), work


# ---------------------------------------------------------------- truncated Dijkstra

cdef int64_t _trunc(ivec ptr, ivec idx, ivec w, int64_t s, int64_t y,
                    int64_t[::1] dist, int64_t *sd, int64_t *sv,
                    Py_ssize_t *count) except -1 nogil:
    cdef Heap h
    cdef int64_t d, u, v, nd, work = 0, bound = CINF
    cdef Py_ssize_t e, cnt = 0
    if heap_init(&h, 64) != 0:
        with gil:
            raise MemoryError()
    dist[s] = 0
    heap_push(&h, 0, s)
    while h.size > 0:
        if h.key[0] > bound:
            break
        heap_pop(&h, &d, &u)
        work += 1
        if d != dist[u]:
            continue
        if u != s:
            sd[cnt] = d
            sv[cnt] = u
            cnt += 1
            if cnt == y:
                bound = d
        for e in range(ptr[u], ptr[u + 1]):
            work += 1
            v = idx[e]
            nd = d + w[e]
            if nd < dist[v]:
                dist[v] = nd
                if heap_push(&h, nd, v) != 0:
                    heap_free(&h)
                    with gil:
                        raise MemoryError()
    heap_free(&h)
    count[0] = cnt
    return work


cdef tuple _trunc_select(int64_t[::1] sd, int64_t[::1] sv, Py_ssize_t cnt, int64_t y):
    d = np.asarray(sd[:cnt])
    v = np.asarray(sv[:cnt])
    order = np.lexsort((v, d))[:y]
    return v[order].copy(), d[order].copy()


def trunc_dijkstra(ivec ptr, ivec idx, ivec w, int64_t s, int64_t y):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    if y <= 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), 0
    dist_arr = np.full(n, CINF, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    sd_arr = np.empty(max(n, 1), dtype=np.int64)
    sv_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] sd = sd_arr
    cdef int64_t[::1] sv = sv_arr
    cdef Py_ssize_t cnt = 0
    cdef int64_t work
    with nogil:
        work = _trunc(ptr, idx, w, s, y, dist, &sd[0], &sv[0], &cnt)
    t, d = _trunc_select(sd, sv, cnt, y)
    return t, d, work


cdef void _sort_pairs(int64_t *d, int64_t *v, Py_ssize_t cnt) noexcept nogil:
    # insertion sort by (d, v); settle order is already nearly sorted
    cdef Py_ssize_t i, j
    cdef int64_t kd, kv
    for i in range(1, cnt):
        kd = d[i]
        kv = v[i]
        j = i - 1
        while j >= 0 and (d[j] > kd or (d[j] == kd and v[j] > kv)):
            d[j + 1] = d[j]
            v[j + 1] = v[j]
            j -= 1
        d[j + 1] = kd
        v[j + 1] = kv


def trunc_many(ivec ptr, ivec idx, ivec w, sources, int64_t y):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    cdef cnp.ndarray[int64_t, ndim=1] srcs = np.ascontiguousarray(sources, dtype=np.int64).reshape(-1)
    cdef Py_ssize_t k = srcs.shape[0]
    work_arr = np.zeros(k, dtype=np.int64)
    if y <= 0 or k == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy(), work_arr
    dist_arr = np.full(n, CINF, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    sd_arr = np.empty(max(n, 1), dtype=np.int64)
    sv_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] sd = sd_arr
    cdef int64_t[::1] sv = sv_arr
    cdef Py_ssize_t per = min(y, max(n - 1, 0))
    cdef Py_ssize_t cap = max(1, min(k * per, 1 << 20))
    o_s = np.empty(cap, dtype=np.int64)
    o_t = np.empty(cap, dtype=np.int64)
    o_d = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] os = o_s, ot = o_t, od = o_d
    cdef int64_t[::1] work = work_arr
    cdef Py_ssize_t cnt = 0, total = 0, i, j, take
    cdef int64_t s
    for i in range(k):
        s = srcs[i]
        with nogil:
            work[i] = _trunc(ptr, idx, w, s, y, dist, &sd[0], &sv[0], &cnt)
            _sort_pairs(&sd[0], &sv[0], cnt)
            take = cnt if cnt < y else y
        if total + take > cap:
            cap = max(2 * cap, total + take)
            o_s = np.resize(o_s, cap)
            o_t = np.resize(o_t, cap)
            o_d = np.resize(o_d, cap)
            os, ot, od = o_s, o_t, o_d
        with nogil:
            for j in range(take):
                os[total + j] = s
                ot[total + j] = sv[j]
                od[total + j] = sd[j]
            total += take
            for j in range(n):
                dist[j] = CINF
    return o_s[:total].copy(), o_t[:total].copy(), o_d[:total].copy(), work_arr


# ---------------------------------------------------------------- hop-limited relaxation

cdef int64_t _bf_round(ivec ptr, ivec idx, ivec w, int64_t[::1] dist,
                       int64_t[::1] new, int64_t[::1] frontier, Py_ssize_t fsize,
                       int64_t[::1] changed, Py_ssize_t *csize,
                       unsigned char[::1] mark) noexcept nogil:
    cdef Py_ssize_t i, e, c = 0
    cdef int64_t u, v, du, nd, work = 0
    for i in range(fsize):
        u = frontier[i]
        du = dist[u]
        for e in range(ptr[u], ptr[u + 1]):
            work += 1
            v = idx[e]
            nd = du + w[e]
            if nd < new[v]:
                new[v] = nd
                if not mark[v]:
                    mark[v] = 1
                    changed[c] = v
                    c += 1
    csize[0] = c
    return work


def bf_hops(ivec ptr, ivec idx, ivec w, int64_t s, int64_t h):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    dist_arr = np.full(n, CINF, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    new_arr = dist_arr.copy()
    cdef int64_t[::1] new = new_arr
    frontier_arr = np.empty(max(n, 1), dtype=np.int64)
    changed_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] frontier = frontier_arr
    cdef int64_t[::1] changed = changed_arr
    mark_arr = np.zeros(max(n, 1), dtype=np.uint8)
    cdef unsigned char[::1] mark = mark_arr
    cdef Py_ssize_t fsize = 1, csize = 0, i
    cdef int64_t work = 0, rnd = 0
    dist[s] = 0
    new[s] = 0
    frontier[0] = s
    with nogil:
        while rnd < h and fsize > 0:
            rnd += 1
            work += _bf_round(ptr, idx, w, dist, new, frontier, fsize, changed, &csize, mark)
            for i in range(csize):
                mark[changed[i]] = 0
                dist[changed[i]] = new[changed[i]]
                frontier[i] = changed[i]
            fsize = csize
    # frontier order does not affect the Jacobi round result
    return dist_arr, work


def hops_within(ivec ptr, ivec idx, ivec w, int64_t s, bound_in, int64_t hmax):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    bound_arr = np.ascontiguousarray(bound_in, dtype=np.int64)
    cdef int64_t[::1] bound = bound_arr
    dist_arr = np.full(n, CINF, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    new_arr = dist_arr.copy()
    cdef int64_t[::1] new = new_arr
    hops_arr = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] hops = hops_arr
    frontier_arr = np.empty(max(n, 1), dtype=np.int64)
    changed_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] frontier = frontier_arr
    cdef int64_t[::1] changed = changed_arr
    mark_arr = np.zeros(max(n, 1), dtype=np.uint8)
    cdef unsigned char[::1] mark = mark_arr
    cdef Py_ssize_t fsize = 1, csize = 0, i
    cdef int64_t work = 0, rnd = 0, v
    dist[s] = 0
    new[s] = 0
    if bound[s] >= 0:
        hops[s] = 0
    frontier[0] = s
    with nogil:
        while rnd < hmax and fsize > 0:
            rnd += 1
            work += _bf_round(ptr, idx, w, dist, new, frontier, fsize, changed, &csize, mark)
            for i in range(csize):
                v = changed[i]
                mark[v] = 0
                dist[v] = new[v]
                frontier[i] = v
                if hops[v] < 0 and dist[v] <= bound[v]:
                    hops[v] = rnd
            fsize = csize
    return hops_arr, work


# ---------------------------------------------------------------- bucketed unit search

def dial(ivec ptr, ivec idx, ivec wu, int64_t s, int64_t level_cap):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    dist_arr = np.full(n, CINF, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    buckets = {0: [s]}
    cdef int64_t pending = 1, work = 0, last = 0, level = 0, u, v, nd
    cdef Py_ssize_t i, e
    cdef list bucket
    dist[s] = 0
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
    return dist_arr, last + 1, work


# ---------------------------------------------------------------- boolean matmul

cdef inline Py_ssize_t _ctz(uint64_t x) noexcept nogil:
    cdef Py_ssize_t r = 0
    while not (x & 1):
        x >>= 1
        r += 1
    return r


def bool_matmul(a_in, b_in):
    a_arr = np.ascontiguousarray(a_in, dtype=np.uint64)
    b_arr = np.ascontiguousarray(b_in, dtype=np.uint64)
    cdef const uint64_t[:, ::1] a = a_arr
    cdef const uint64_t[:, ::1] b = b_arr
    cdef Py_ssize_t dim = a.shape[0], words = a.shape[1], i, wi, j, k
    c_arr = np.zeros((dim, words), dtype=np.uint64)
    cdef uint64_t[:, ::1] c = c_arr
    cdef uint64_t word, low
    cdef int64_t work = 0
    with nogil:
        for i in range(dim):
            for wi in range(words):
                word = a[i, wi]
                work += 1
                while word:
                    low = word & (~word + 1)
                    k = wi * 64 + _ctz(low)
                    for j in range(words):
                        c[i, j] |= b[k, j]
                    work += words
                    word ^= low
    return c_arr, work

