# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled interval-matching kernels for the classifier population.

Matching is pure comparison work (no float arithmetic), so the compiled and
pure-Python backends return bit-identical results.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def match_one(double[:, ::1] lo, double[:, ::1] hi,
              cnp.uint8_t[:, ::1] mask, double[::1] x):
    """Match a single instance against every rule condition.

    mask[r, k] nonzero means attribute k of rule r is constrained to
    [lo, hi]; zero means don't-care. Bounds are inclusive.
    """
    cdef Py_ssize_t n = lo.shape[0]
    cdef Py_ssize_t arity = lo.shape[1]
    cdef Py_ssize_t r, k
    cdef cnp.uint8_t ok
    out = np.empty(n, dtype=np.bool_)
    cdef cnp.uint8_t[::1] out_v = out.view(np.uint8)
    for r in range(n):
        ok = 1
        for k in range(arity):
            if mask[r, k] and (x[k] < lo[r, k] or x[k] > hi[r, k]):
                ok = 0
                break
        out_v[r] = ok
    return out


def match_block(double[:, ::1] lo, double[:, ::1] hi,
                cnp.uint8_t[:, ::1] mask, double[:, ::1] X):
    """Match a block of instances; returns bool matrix (n_instances, n_rules)."""
    cdef Py_ssize_t n = lo.shape[0]
    cdef Py_ssize_t arity = lo.shape[1]
    cdef Py_ssize_t m = X.shape[0]
    cdef Py_ssize_t i, r, k
    cdef cnp.uint8_t ok
    out = np.empty((m, n), dtype=np.bool_)
    cdef cnp.uint8_t[:, ::1] out_v = out.view(np.uint8)
    for i in range(m):
        for r in range(n):
            ok = 1
            for k in range(arity):
                if mask[r, k] and (X[i, k] < lo[r, k] or X[i, k] > hi[r, k]):
                    ok = 0
                    break
            out_v[i, r] = ok
    return out
