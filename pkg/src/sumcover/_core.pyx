# cython: boundscheck=False, wraparound=False, cdivision=True
"""Word-parallel subset-sum bitmap kernel for cyclic groups.

The bitmap of Sigma(A) for Z_n is grown by k rotate-or passes: starting
from the singleton {0}, each element a contributes B |= rot(B, a), where
rot is a cyclic rotation of the n-bit map.  Rotations run over 64-bit
words; the map is returned as little-endian bytes plus its popcount.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy

ctypedef unsigned long long u64

cdef extern from *:
    int __builtin_popcountll(u64) nogil


cdef inline void _rot_or(u64* dst, u64* src, long nw, long n, long s) nogil:
    # dst |= rotate-left(src, s) on an n-bit map; src must be masked to n bits.
    cdef long ws = s >> 6
    cdef long bs = s & 63
    cdef long i, t, wt, bt
    # left-shift part: bits [0, n-s) of src land at offset s
    if bs:
        for i in range(nw - 1, ws, -1):
            dst[i] |= (src[i - ws] << bs) | (src[i - ws - 1] >> (64 - bs))
        dst[ws] |= src[0] << bs
    else:
        for i in range(nw - 1, ws - 1, -1):
            dst[i] |= src[i - ws]
    # wrap-around part: bits [n-s, n) of src land at offset 0
    t = n - s
    wt = t >> 6
    bt = t & 63
    if bt:
        for i in range(0, nw - wt - 1):
            dst[i] |= (src[i + wt] >> bt) | (src[i + wt + 1] << (64 - bt))
        dst[nw - wt - 1] |= src[nw - 1] >> bt
    else:
        for i in range(0, nw - wt):
            dst[i] |= src[i + wt]


def sigma_bits_cyclic(long n, long[::1] shifts):
    """Subset-sum membership bitmap over Z_n.

    Returns (bitmap_bytes_little_endian, popcount).
    """
    cdef long nw = (n + 63) >> 6
    cdef long nbytes = (n + 7) >> 3
    cdef u64 top_mask = <u64> 0xFFFFFFFFFFFFFFFFULL
    if n & 63:
        top_mask = (<u64> 1 << (n & 63)) - 1
    cdef u64* cur = <u64*> calloc(nw, sizeof(u64))
    cdef u64* snap = <u64*> calloc(nw, sizeof(u64))
    if cur == NULL or snap == NULL:
        free(cur)
        free(snap)
        raise MemoryError()
    cdef long i, j, s, pc
    cdef object out
    try:
        cur[0] = 1
        pc = 1
        with nogil:
            for j in range(shifts.shape[0]):
                s = shifts[j] % n
                if s == 0:
                    continue
                memcpy(snap, cur, nw * sizeof(u64))
                _rot_or(cur, snap, nw, n, s)
                cur[nw - 1] &= top_mask
                pc = 0
                for i in range(nw):
                    pc += __builtin_popcountll(cur[i])
                if pc == n:
                    break
        out = PyBytes_FromStringAndSize(<char*> cur, nbytes)
        return out, pc
    finally:
        free(cur)
        free(snap)
