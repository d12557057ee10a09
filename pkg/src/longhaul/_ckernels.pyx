# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``; identical results."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, isfinite
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef struct Entry:
    double f
    double g
    long node


cdef inline bint _before(Entry a, Entry b) noexcept nogil:
    if a.f != b.f:
        return a.f < b.f
    if a.g != b.g:
        return a.g < b.g
    return a.node < b.node


cdef inline void _push(Entry* heap, long* size, Entry item) noexcept nogil:
    cdef long i = size[0]
    cdef long parent
    size[0] += 1
    heap[i] = item
    while i > 0:
        parent = (i - 1) >> 1
        if _before(heap[i], heap[parent]):
            heap[i], heap[parent] = heap[parent], heap[i]
            i = parent
        else:
            break


cdef inline Entry _pop(Entry* heap, long* size) noexcept nogil:
    cdef Entry top = heap[0]
    cdef long i = 0, l, r, m
    size[0] -= 1
    heap[0] = heap[size[0]]
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < size[0] and _before(heap[l], heap[m]):
            m = l
        if r < size[0] and _before(heap[r], heap[m]):
            m = r
        if m == i:
            break
        heap[i], heap[m] = heap[m], heap[i]
        i = m
    return top


cdef bint _lex_less(long* pred, long u, long p, long v, long* bufa, long* bufb) noexcept nogil:
    # compares path(u)+[v] against path(p)+[v], both read from the source
    cdef long la = 0, lb = 0, x, i, ca, cb, na, nb
    x = u
    while x != -1:
        bufa[la] = x
        la += 1
        x = pred[x]
    x = p
    while x != -1:
        bufb[lb] = x
        lb += 1
        x = pred[x]
    na = la + 1
    nb = lb + 1
    i = 0
    while i < na and i < nb:
        ca = bufa[la - 1 - i] if i < la else v
        cb = bufb[lb - 1 - i] if i < lb else v
        if ca != cb:
            return ca < cb
        i += 1
    return na < nb


def sssp(const long[:] indptr, const long[:] indices, const double[:] weights, long source):
    cdef long n = indptr.shape[0] - 1
    cdef long cap = indices.shape[0] + 1
    dist_arr = np.full(n, np.inf, dtype=np.float64)
    pred_arr = np.full(n, -1, dtype=np.int64)
    cdef double[:] dist = dist_arr
    cdef long[:] pred = pred_arr
    cdef unsigned char* done = <unsigned char*> malloc(n)
    cdef Entry* heap = <Entry*> malloc(cap * sizeof(Entry))
    cdef long* bufa = <long*> malloc(n * sizeof(long))
    cdef long* bufb = <long*> malloc(n * sizeof(long))
    cdef long size = 0, u, v, e
    cdef double nd, du
    cdef Entry item, nxt
    if done == NULL or heap == NULL or bufa == NULL or bufb == NULL:
        free(done); free(heap); free(bufa); free(bufb)
        raise MemoryError()
    with nogil:
        for u in range(n):
            done[u] = 0
        dist[source] = 0.0
        item.f = 0.0
        item.g = 0.0
        item.node = source
        _push(heap, &size, item)
        while size > 0:
            item = _pop(heap, &size)
            u = item.node
            if done[u]:
                continue
            done[u] = 1
            du = item.g
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if done[v]:
                    continue
                nd = du + weights[e]
                if nd < dist[v]:
                    dist[v] = nd
                    pred[v] = u
                    nxt.f = nd
                    nxt.g = nd
                    nxt.node = v
                    _push(heap, &size, nxt)
                elif nd == dist[v] and _lex_less(&pred[0], u, pred[v], v, bufa, bufb):
                    pred[v] = u
    free(done)
    free(heap)
    free(bufa)
    free(bufb)
    return dist_arr, pred_arr


def astar(const long[:] indptr, const long[:] indices, const double[:] weights,
          long source, long target, const double[:] h,
          const unsigned char[:] blocked_nodes, blocked_hops=()):
    cdef long n = indptr.shape[0] - 1
    cdef long cap = indices.shape[0] + 1
    if blocked_nodes[source] or not isfinite(h[source]):
        return float("inf"), []
    hop_arr = np.asarray(sorted(set(int(x) for x in blocked_hops)), dtype=np.int64)
    cdef long[:] hops = hop_arr
    cdef long nhops = hop_arr.shape[0]
    g_arr = np.full(n, np.inf, dtype=np.float64)
    pred_arr = np.full(n, -1, dtype=np.int64)
    cdef double[:] g = g_arr
    cdef long[:] pred = pred_arr
    cdef unsigned char* done = <unsigned char*> malloc(n)
    cdef Entry* heap = <Entry*> malloc(cap * sizeof(Entry))
    cdef long* bufa = <long*> malloc(n * sizeof(long))
    cdef long* bufb = <long*> malloc(n * sizeof(long))
    cdef long size = 0, u, v, e, j
    cdef double nd, gu, hv
    cdef bint skip, found = False
    cdef Entry item, nxt
    if done == NULL or heap == NULL or bufa == NULL or bufb == NULL:
        free(done); free(heap); free(bufa); free(bufb)
        raise MemoryError()
    with nogil:
        for u in range(n):
            done[u] = 0
        g[source] = 0.0
        item.f = h[source]
        item.g = 0.0
        item.node = source
        _push(heap, &size, item)
        while size > 0:
            item = _pop(heap, &size)
            u = item.node
            if done[u]:
                continue
            done[u] = 1
            if u == target:
                found = True
                break
            gu = item.g
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if done[v] or blocked_nodes[v]:
                    continue
                if u == source:
                    skip = False
                    for j in range(nhops):
                        if hops[j] == v:
                            skip = True
                            break
                    if skip:
                        continue
                hv = h[v]
                if not isfinite(hv):
                    continue
                nd = gu + weights[e]
                if nd < g[v]:
                    g[v] = nd
                    pred[v] = u
                    nxt.f = nd + hv
                    nxt.g = nd
                    nxt.node = v
                    _push(heap, &size, nxt)
                elif nd == g[v] and _lex_less(&pred[0], u, pred[v], v, bufa, bufb):
                    pred[v] = u
    free(done)
    free(heap)
    free(bufa)
    free(bufb)
    if not found:
        return float("inf"), []
    path = []
    u = target
    while u != -1:
        path.append(u)
        u = pred[u]
    path.reverse()
    return g[target], path
