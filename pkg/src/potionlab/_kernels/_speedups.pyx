# cython: boundscheck=False, wraparound=False
"""Compiled implementations of the hot kernels.

Bit-for-bit equivalent to ``_pure``: same splitmix64 counter stream, same
IEEE double comparison, same substitution rule.
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Free
from libc.stdint cimport uint64_t

cdef extern from "Python.h":
    object PyUnicode_FromKindAndData(int kind, const void *buffer, Py_ssize_t size)
    int PyUnicode_4BYTE_KIND

BACKEND = "compiled"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def rand_unit(unsigned long long seed, unsigned long long index):
    """Element ``index`` of the counter-based stream for ``seed``, in [0, 1)."""
    cdef uint64_t h = _mix64(seed + (index + 1) * GOLDEN)
    return <double>(h >> 11) * INV_2_53


def distort_text(unicode text, unsigned long long seed, double severity, dict table):
    """Replace table-mapped characters of ``text`` with probability ``severity``."""
    cdef Py_ssize_t n = len(text)
    if severity <= 0.0 or n == 0:
        return text

    cdef Py_UCS4 repl[128]
    cdef unsigned char has_repl[128]
    cdef int k
    for k in range(128):
        has_repl[k] = 0
    for key, value in table.items():
        k = ord(key)
        if k < 128:
            repl[k] = <Py_UCS4>ord(value)
            has_repl[k] = 1

    cdef Py_UCS4 *out = <Py_UCS4 *>PyMem_Malloc(n * sizeof(Py_UCS4))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef Py_UCS4 ch
    cdef uint64_t h
    try:
        for i in range(n):
            ch = text[i]
            if ch < 128 and has_repl[<int>ch]:
                h = _mix64(seed + (<uint64_t>(i + 1)) * GOLDEN)
                if <double>(h >> 11) * INV_2_53 < severity:
                    ch = repl[<int>ch]
            out[i] = ch
        return PyUnicode_FromKindAndData(PyUnicode_4BYTE_KIND, out, n)
    finally:
        PyMem_Free(out)


def signed_rank_counts(int n):
    """Number of subsets of {1..n} per sum: counts[w] over w in 0..n(n+1)/2."""
    if n < 0 or n > 62:
        raise ValueError(f"n out of range for exact counts: {n}")
    cdef Py_ssize_t total = n * (n + 1) // 2
    cdef uint64_t *c = <uint64_t *>PyMem_Malloc((total + 1) * sizeof(uint64_t))
    if c == NULL:
        raise MemoryError()
    cdef Py_ssize_t w
    cdef Py_ssize_t upper = 0
    cdef int r
    try:
        for w in range(total + 1):
            c[w] = 0
        c[0] = 1
        for r in range(1, n + 1):
            upper += r
            for w in range(upper, r - 1, -1):
                c[w] += c[w - r]
        return [c[w] for w in range(total + 1)]
    finally:
        PyMem_Free(c)
