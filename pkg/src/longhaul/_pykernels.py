"""Pure-Python shortest-path kernels over a CSR adjacency.

Both kernels return the lexicographically smallest node sequence among the
minimum-length paths.  Edge weights are expected to make path sums exact in
binary floating point (the network quantizes lengths to 1/1024 km), so
length ties are real ties.
"""
from __future__ import annotations

import heapq
import math

import numpy as np

INF = math.inf


def _walk(pred, x):
    out = []
    while x != -1:
        out.append(x)
        x = pred[x]
    out.reverse()
    return out


def _lex_less(pred, u, p, v):
    """True when path(u)+[v] sorts before path(p)+[v]."""
    return _walk(pred, u) + [v] < _walk(pred, p) + [v]


def sssp(indptr, indices, weights, source):
    n = len(indptr) - 1
    dist = [INF] * n
    pred = [-1] * n
    done = [False] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    indptr = indptr.tolist() if hasattr(indptr, "tolist") else indptr
    indices = indices.tolist() if hasattr(indices, "tolist") else indices
    weights = weights.tolist() if hasattr(weights, "tolist") else weights
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if done[v]:
                continue
            nd = d + weights[e]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v] and _lex_less(pred, u, pred[v], v):
                pred[v] = u
    return np.asarray(dist, dtype=np.float64), np.asarray(pred, dtype=np.int64)


def astar(indptr, indices, weights, source, target, h, blocked_nodes, blocked_hops=()):
    """Best path source->target avoiding ``blocked_nodes`` (a 0/1 mask) and the
    first hops listed in ``blocked_hops``.  ``h`` must be a consistent lower
    bound on the distance to ``target``.  Returns (length, node list) or
    (inf, []) when unreachable."""
    n = len(indptr) - 1
    if blocked_nodes[source] or not math.isfinite(h[source]):
        return INF, []
    g = {source: 0.0}
    pred = [-1] * n
    done = set()
    heap = [(h[source], 0.0, source)]
    hops = set(blocked_hops)
    while heap:
        f, gu, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == target:
            return gu, _walk(pred, u)
        for e in range(indptr[u], indptr[u + 1]):
            v = int(indices[e])
            if v in done or blocked_nodes[v]:
                continue
            if u == source and v in hops:
                continue
            hv = h[v]
            if not math.isfinite(hv):
                continue
            nd = gu + weights[e]
            old = g.get(v, INF)
            if nd < old:
                g[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd + hv, nd, v))
            elif nd == old and _lex_less(pred, u, pred[v], v):
                pred[v] = u
    return INF, []
