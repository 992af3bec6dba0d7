# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled BFS kernel over flat-encoded group elements.

Same contract as _bfs_py but elements are packed into 64-bit keys
(requires n_entries * bits_per_entry <= 63) and visited-set lookups go
through an open-addressing hash table, which dominates BFS runtime.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t

NAME = "cython"

DEF EMPTY = 0xFFFFFFFFFFFFFFFF


cdef inline uint64_t _mix(uint64_t x) nogil:
    # splitmix64 finalizer
    x += <uint64_t>0x9E3779B97F4A7C15
    x = (x ^ (x >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    x = (x ^ (x >> 27)) * <uint64_t>0x94D049BB133111EB
    return x ^ (x >> 31)


def max_bits(int n_entries):
    """Largest per-entry bit width the packed key supports."""
    return 63 // n_entries


def bfs_packed(object gens, int q, object blocks, object start,
               object max_elements=None):
    """BFS closure; returns (elems, dist, parent_idx, parent_gen) arrays.

    elems is an (n, width) int32 array of flat elements in discovery
    order (start first); parent_idx[i] is the row index of i's BFS
    predecessor (-1 for the start), parent_gen[i] the generator applied.
    """
    cdef int bits = max(1, int(q - 1).bit_length())
    cdef list blist = list(blocks)
    cdef int width = 0
    cdef int d
    for d in blist:
        width += d * d
    if width * bits > 63:
        raise ValueError("element does not pack into 63 bits")

    cdef cnp.ndarray[int32_t, ndim=2] g = np.array(
        [[v % q for v in row] for row in gens], dtype=np.int32
    )
    cdef int n_gens = g.shape[0]
    cdef cnp.ndarray[int32_t, ndim=1] bdim = np.array(blist, dtype=np.int32)
    cdef int n_blocks = bdim.shape[0]

    cdef int64_t cap = 1 << 16
    cdef int64_t limit = -1 if max_elements is None else <int64_t>max_elements

    cdef cnp.ndarray[int32_t, ndim=2] elems = np.empty((cap, width), np.int32)
    cdef cnp.ndarray[int32_t, ndim=1] dist = np.empty(cap, np.int32)
    cdef cnp.ndarray[int64_t, ndim=1] par_i = np.empty(cap, np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] par_g = np.empty(cap, np.int32)

    cdef int64_t tcap = cap * 2
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] tkey = np.full(tcap, EMPTY, np.uint64)
    cdef cnp.ndarray[int64_t, ndim=1] tval = np.empty(tcap, np.int64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] old_tkey
    cdef cnp.ndarray[int64_t, ndim=1] old_tval

    cdef int64_t n = 0, head = 0, slot, j, old_tcap
    cdef int i, k, jj, off, gi
    cdef uint64_t key, h
    cdef int32_t[:] tmp = np.empty(width, np.int32)
    cdef long acc

    # seed element
    for i in range(width):
        elems[0, i] = int(start[i]) % q
    key = 0
    for i in range(width):
        key = (key << bits) | <uint64_t>elems[0, i]
    slot = <int64_t>(_mix(key) & <uint64_t>(tcap - 1))
    tkey[slot] = key
    tval[slot] = 0
    dist[0] = 0
    par_i[0] = -1
    par_g[0] = -1
    n = 1

    while head < n:
        for gi in range(n_gens):
            # blockwise product elems[head] * g[gi]
            off = 0
            for k in range(n_blocks):
                d = bdim[k]
                for i in range(d):
                    for jj in range(d):
                        acc = 0
                        for j in range(d):
                            acc += (<long>elems[head, off + i * d + j]
                                    * <long>g[gi, off + j * d + jj])
                        tmp[off + i * d + jj] = <int32_t>(acc % q)
                off += d * d
            key = 0
            for i in range(width):
                key = (key << bits) | <uint64_t>tmp[i]
            h = _mix(key)
            slot = <int64_t>(h & <uint64_t>(tcap - 1))
            while True:
                if tkey[slot] == EMPTY:
                    break
                if tkey[slot] == key:
                    slot = -1
                    break
                slot += 1
                if slot == tcap:
                    slot = 0
            if slot < 0:
                continue
            if limit >= 0 and n >= limit:
                raise MemoryError("BFS exceeded element budget")
            if n == cap:
                cap *= 2
                elems = np.resize(elems, (cap, width))
                dist = np.resize(dist, cap)
                par_i = np.resize(par_i, cap)
                par_g = np.resize(par_g, cap)
            for i in range(width):
                elems[n, i] = tmp[i]
            dist[n] = dist[head] + 1
            par_i[n] = head
            par_g[n] = gi
            tkey[slot] = key
            tval[slot] = n
            n += 1
            if n * 3 > tcap * 2:  # rehash at 2/3 load
                old_tcap = tcap
                tcap *= 2
                old_tkey = tkey
                old_tval = tval
                tkey = np.full(tcap, EMPTY, np.uint64)
                tval = np.empty(tcap, np.int64)
                for j in range(old_tcap):
                    if old_tkey[j] != EMPTY:
                        slot = <int64_t>(_mix(old_tkey[j]) & <uint64_t>(tcap - 1))
                        while tkey[slot] != EMPTY:
                            slot += 1
                            if slot == tcap:
                                slot = 0
                        tkey[slot] = old_tkey[j]
                        tval[slot] = old_tval[j]
        head += 1

    return (
        np.asarray(elems[:n]).copy(),
        np.asarray(dist[:n]).copy(),
        np.asarray(par_i[:n]).copy(),
        np.asarray(par_g[:n]).copy(),
    )
