# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled ranking kernel.

Contract and tie semantics are identical to the numpy fallback: shares are
quantized to a 1e-12 grid, candidates ranked by (quantized share, tie key,
slot index) descending. Coincident positions form groups whose boundary vote
shares are assigned left/right to random members or split equally.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport rint

cnp.import_array()

DEF SHARE_SCALE = 1e12


cdef inline void _group_shares(const double* pos, const double* mass,
                               bint left_right, const double* roles,
                               double* out, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t a = 0, b, i, c, li, rj, ri, rp = 0
    cdef double left, right, each
    while a < k:
        b = a
        while b + 1 < k and pos[b + 1] == pos[a]:
            b += 1
        if b == a:
            out[a] = mass[a]
        else:
            c = b - a + 1
            left = mass[a]
            right = mass[b]
            for i in range(a, b + 1):
                out[i] = 0.0
            if left_right:
                li = <Py_ssize_t>(roles[rp] * c)
                if li > c - 1:
                    li = c - 1
                rj = <Py_ssize_t>(roles[rp + 1] * (c - 1))
                if rj > c - 2:
                    rj = c - 2
                rp += 2
                ri = rj + 1 if rj >= li else rj
                out[a + li] += left
                out[a + ri] += right
            else:
                each = (left + right) / c
                for i in range(a, b + 1):
                    out[i] = each
        a = b + 1


cdef inline bint _stronger(const long long* q, const double* key,
                           Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    if q[i] != q[j]:
        return q[i] > q[j]
    if key[i] != key[j]:
        return key[i] > key[j]
    return i > j


def rank_elections(cnp.ndarray[cnp.float64_t, ndim=2] pos_sorted not None,
                   cnp.ndarray[cnp.float64_t, ndim=2] masses not None,
                   bint left_right,
                   cnp.ndarray[cnp.float64_t, ndim=2] u_roles not None,
                   cnp.ndarray[cnp.float64_t, ndim=2] u_keys not None,
                   Py_ssize_t h):
    """Top-h positions by vote share for each election row."""
    cdef Py_ssize_t n = pos_sorted.shape[0]
    cdef Py_ssize_t k = pos_sorted.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n, h), dtype=np.float64)
    cdef double[64] shares
    cdef long long[64] q
    cdef Py_ssize_t[64] idx
    cdef Py_ssize_t r, i, j, best, tmp
    cdef const double* pos
    cdef const double* mass
    cdef const double* roles
    cdef const double* keys
    cdef bint has_dup
    if k > 64:
        raise ValueError("kernel supports at most 64 candidates per election")
    with nogil:
        for r in range(n):
            pos = &pos_sorted[r, 0]
            mass = &masses[r, 0]
            roles = &u_roles[r, 0]
            keys = &u_keys[r, 0]
            has_dup = False
            for i in range(k - 1):
                if pos[i + 1] == pos[i]:
                    has_dup = True
                    break
            if has_dup:
                _group_shares(pos, mass, left_right, roles, &shares[0], k)
            else:
                for i in range(k):
                    shares[i] = mass[i]
            for i in range(k):
                q[i] = <long long>rint(shares[i] * SHARE_SCALE)
                idx[i] = i
            # partial selection sort: h is tiny relative to k
            for i in range(h):
                best = i
                for j in range(i + 1, k):
                    if _stronger(&q[0], keys, idx[j], idx[best]):
                        best = j
                tmp = idx[i]
                idx[i] = idx[best]
                idx[best] = tmp
                out[r, i] = pos[idx[i]]
    return out
