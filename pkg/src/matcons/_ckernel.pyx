# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled valuation kernels.  See matcons.kernels for the program layout."""

import numpy as np
cimport numpy as cnp

ctypedef cnp.int32_t i32
ctypedef cnp.uint8_t u8


cdef inline void _eval(const i32[:] kinds, const i32[:] slots, const i32[:] arities,
                       const i32[:, :] children, const i32[:] tables, int n,
                       const i32[:] assign, i32[:] vals) noexcept nogil:
    cdef Py_ssize_t i, c
    cdef long idx
    for i in range(kinds.shape[0]):
        if kinds[i] == 0:
            vals[i] = assign[slots[i]]
        else:
            idx = 0
            for c in range(arities[i]):
                idx = idx * n + vals[children[i, c]]
            vals[i] = tables[slots[i] + idx]


cdef inline bint _advance(i32[:] assign, int nvars, int n) noexcept nogil:
    # odometer step, last variable least significant; False after wraparound
    cdef int j = nvars - 1
    while j >= 0:
        assign[j] += 1
        if assign[j] < n:
            return True
        assign[j] = 0
        j -= 1
    return False


def find_valuation(const i32[:] kinds, const i32[:] slots, const i32[:] arities,
                   const i32[:, :] children, const i32[:] tables, int n, int nvars,
                   const u8[:] designated, const i32[:] must_in, const i32[:] must_out):
    cdef i32[:] assign = np.zeros(max(nvars, 1), dtype=np.int32)
    cdef i32[:] vals = np.zeros(max(kinds.shape[0], 1), dtype=np.int32)
    cdef long long v = 0
    cdef long long found = -1
    cdef Py_ssize_t k
    cdef bint ok
    with nogil:
        while True:
            _eval(kinds, slots, arities, children, tables, n, assign, vals)
            ok = True
            for k in range(must_in.shape[0]):
                if not designated[vals[must_in[k]]]:
                    ok = False
                    break
            if ok:
                for k in range(must_out.shape[0]):
                    if designated[vals[must_out[k]]]:
                        ok = False
                        break
            if ok:
                found = v
                break
            v += 1
            if not _advance(assign, nvars, n):
                break
    return found


def designation_table(const i32[:] kinds, const i32[:] slots, const i32[:] arities,
                      const i32[:, :] children, const i32[:] tables, int n, int nvars,
                      const u8[:] designated, const i32[:] targets):
    cdef long long total = 1
    cdef int j
    for j in range(nvars):
        total *= n
    out_arr = np.empty((total, targets.shape[0]), dtype=np.uint8)
    cdef u8[:, :] out = out_arr
    cdef i32[:] assign = np.zeros(max(nvars, 1), dtype=np.int32)
    cdef i32[:] vals = np.zeros(max(kinds.shape[0], 1), dtype=np.int32)
    cdef long long v = 0
    cdef Py_ssize_t t
    with nogil:
        while True:
            _eval(kinds, slots, arities, children, tables, n, assign, vals)
            for t in range(targets.shape[0]):
                out[v, t] = designated[vals[targets[t]]]
            v += 1
            if not _advance(assign, nvars, n):
                break
    return out_arr
