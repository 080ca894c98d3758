# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Signatures match ``_kernels_py``."""
import numpy as np
from libc.math cimport exp, log1p, INFINITY, isfinite


def mul_packed(akeys, list acoefs, bkeys, list bcoefs):
    cdef long long[::1] ka = np.ascontiguousarray(akeys, dtype=np.int64)
    cdef long long[::1] kb = np.ascontiguousarray(bkeys, dtype=np.int64)
    cdef Py_ssize_t na = ka.shape[0], nb = kb.shape[0], i, j, t, n
    n = na * nb
    keys_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] keys = keys_arr
    cdef list prods = [None] * n
    t = 0
    for i in range(na):
        ca = acoefs[i]
        for j in range(nb):
            keys[t] = ka[i] + kb[j]
            prods[t] = ca * bcoefs[j]
            t += 1
    order_arr = np.argsort(keys_arr, kind="stable")
    cdef long long[::1] order = order_arr.astype(np.int64)
    cdef list out_keys = []
    cdef list out_coefs = []
    cdef long long cur
    cdef Py_ssize_t idx
    if n == 0:
        return out_keys, out_coefs
    idx = order[0]
    cur = keys[idx]
    acc = prods[idx]
    for t in range(1, n):
        idx = order[t]
        if keys[idx] == cur:
            acc = acc + prods[idx]
        else:
            if acc:
                out_keys.append(cur)
                out_coefs.append(acc)
            cur = keys[idx]
            acc = prods[idx]
    if acc:
        out_keys.append(cur)
        out_coefs.append(acc)
    return out_keys, out_coefs


def first_negative(list coefs):
    cdef Py_ssize_t i, n = len(coefs)
    for i in range(n):
        if coefs[i] < 0:
            return i
    return -1


def eval_float(exps, coefs, points):
    cdef long long[:, ::1] e = np.ascontiguousarray(exps, dtype=np.int64)
    cdef double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef double[:, ::1] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t npts = p.shape[0], nt = e.shape[0], d = p.shape[1], i, t, k, q
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double acc, mon, base
    cdef long long ex
    with nogil:
        for i in range(npts):
            acc = 0.0
            for t in range(nt):
                mon = c[t]
                for k in range(d):
                    ex = e[t, k]
                    if ex == 0:
                        continue
                    base = p[i, k]
                    if ex < 0:
                        base = 1.0 / base
                        ex = -ex
                    for q in range(ex):
                        mon = mon * base
                acc = acc + mon
            out[i] = acc
    return out_arr


def log_eval(exps, logcoefs, logpoints):
    cdef double[:, ::1] e = np.ascontiguousarray(exps, dtype=np.float64)
    cdef double[::1] lc = np.ascontiguousarray(logcoefs, dtype=np.float64)
    cdef double[:, ::1] lp = np.ascontiguousarray(logpoints, dtype=np.float64)
    cdef Py_ssize_t npts = lp.shape[0], nt = e.shape[0], d = lp.shape[1], i, t, k, best
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    vbuf_arr = np.empty(max(nt, 1), dtype=np.float64)
    cdef double[::1] v = vbuf_arr
    cdef double m, s, x
    with nogil:
        for i in range(npts):
            m = -INFINITY
            best = -1
            for t in range(nt):
                x = lc[t]
                for k in range(d):
                    if e[t, k] != 0.0:
                        x = x + e[t, k] * lp[i, k]
                v[t] = x
                if best < 0 or x > m:
                    m = x
                    best = t
            if best < 0 or not isfinite(m):
                out[i] = m if best >= 0 else -INFINITY
                continue
            s = 0.0
            for t in range(nt):
                if t != best:
                    s = s + exp(v[t] - m)
            out[i] = m + log1p(s)
    return out_arr
