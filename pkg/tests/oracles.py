"""Independent brute-force oracles, built from dense numpy matrices only.

None of these call into the package's search kernels, so agreement with
them is real evidence rather than self-consistency.
"""
import numpy as np

INF = np.inf


def dense_adj(n, edges):
    a = np.zeros((n, n), dtype=bool)
    for u, v, *_ in edges:
        if u != v:
            a[u, v] = True
    return a


def warshall(n, edges):
    """Reflexive transitive closure by Warshall's algorithm."""
    r = dense_adj(n, edges) | np.eye(n, dtype=bool)
    for k in range(n):
        r |= r[:, k : k + 1] & r[k : k + 1, :]
    return r


def weight_matrix(n, edges, weights=None):
    w = np.full((n, n), INF)
    for i, (u, v) in enumerate(edges):
        if u == v:
            continue
        x = 1 if weights is None else weights[i]
        w[u, v] = min(w[u, v], x)
    return w


def floyd_warshall(n, edges, weights=None):
    return fw_dense(weight_matrix(n, edges, weights))


def fw_dense(w):
    """All-pairs distances from a dense weight matrix (inf = no edge)."""
    d = np.array(w, dtype=float)
    np.fill_diagonal(d, 0)
    for k in range(d.shape[0]):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return d


def min_plus_hops(n, edges, weights, h):
    """bdist^h for all pairs: h rounds of min-plus products with the weight matrix."""
    w = weight_matrix(n, edges, weights)
    d = np.full((n, n), INF)
    np.fill_diagonal(d, 0)
    for _ in range(h):
        d = np.minimum(d, (d[:, :, None] + w[None, :, :]).min(axis=1))
    return d


def hop_distances(n, edges):
    """Unweighted shortest hop counts via boolean matrix powers (inf if unreachable)."""
    a = dense_adj(n, edges).astype(np.int64)
    hops = np.full((n, n), INF)
    np.fill_diagonal(hops, 0)
    cur = np.eye(n, dtype=np.int64)
    for k in range(1, n):
        cur = (cur @ a > 0).astype(np.int64)
        new = (cur > 0) & np.isinf(hops)
        if not new.any() and not cur.any():
            break
        hops[new] = k
    return hops


def hop_diameter(n, edges):
    h = hop_distances(n, edges)
    fin = h[np.isfinite(h)]
    return int(fin.max()) if fin.size else 0


def longest_path_dag(n, edges):
    """Longest path (hops) in a DAG by DP over Kahn's order."""
    out = [[] for _ in range(n)]
    indeg = [0] * n
    for u, v, *_ in edges:
        out[u].append(v)
        indeg[v] += 1
    order = [v for v in range(n) if indeg[v] == 0]
    for u in order:
        for v in out[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                order.append(v)
    assert len(order) == n, "graph is cyclic"
    best = [0] * n
    for u in order:
        for v in out[u]:
            best[v] = max(best[v], best[u] + 1)
    return max(best, default=0)


def scc_classes(n, edges):
    """Number of mutual-reachability classes."""
    r = warshall(n, edges)
    mutual = r & r.T
    seen = np.zeros(n, dtype=bool)
    count = 0
    for v in range(n):
        if not seen[v]:
            seen |= mutual[v]
            count += 1
    return count
