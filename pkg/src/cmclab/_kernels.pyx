# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics are defined by ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, M_PI

cnp.import_array()


def legendre_table(x, int lmax):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef int L = lmax
    P_arr = np.zeros((n, L + 1, L + 1))
    dP_arr = np.zeros((n, L + 1, L + 1))
    cdef double[:, :, ::1] P = P_arr
    cdef double[:, :, ::1] dP = dP_arr
    cdef Py_ssize_t i
    cdef int l, m
    cdef double xi, st, inv_st, pmm, a, b, c, prev
    cdef double p00 = sqrt(1.0 / (4.0 * M_PI))
    for i in range(n):
        xi = xv[i]
        st = 1.0 - xi * xi
        st = sqrt(st) if st > 0.0 else 0.0
        inv_st = 1.0 / st if st > 0.0 else 0.0
        pmm = p00
        for m in range(L + 1):
            if m > 0:
                pmm = -sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * pmm
            P[i, m, m] = pmm
            if m + 1 <= L:
                P[i, m + 1, m] = sqrt(2.0 * m + 3.0) * xi * pmm
            for l in range(m + 2, L + 1):
                a = sqrt((4.0 * l * l - 1.0) / (<double>(l * l - m * m)))
                b = sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0))
                P[i, l, m] = a * (xi * P[i, l - 1, m] - b * P[i, l - 2, m])
        for m in range(L + 1):
            for l in range(m, L + 1):
                if l > m:
                    prev = P[i, l - 1, m]
                    c = sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) * (l * l - m * m))
                else:
                    prev = 0.0
                    c = 0.0
                dP[i, l, m] = (l * xi * P[i, l, m] - c * prev) * inv_st
    return P_arr, dP_arr


cdef inline double _inv3(double[:, ::1] g, double[:, ::1] out) nogil:
    cdef double det
    out[0, 0] = g[1, 1] * g[2, 2] - g[1, 2] * g[2, 1]
    out[0, 1] = g[0, 2] * g[2, 1] - g[0, 1] * g[2, 2]
    out[0, 2] = g[0, 1] * g[1, 2] - g[0, 2] * g[1, 1]
    out[1, 0] = g[1, 2] * g[2, 0] - g[1, 0] * g[2, 2]
    out[1, 1] = g[0, 0] * g[2, 2] - g[0, 2] * g[2, 0]
    out[1, 2] = g[0, 2] * g[1, 0] - g[0, 0] * g[1, 2]
    out[2, 0] = g[1, 0] * g[2, 1] - g[1, 1] * g[2, 0]
    out[2, 1] = g[0, 1] * g[2, 0] - g[0, 0] * g[2, 1]
    out[2, 2] = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    det = g[0, 0] * out[0, 0] + g[0, 1] * out[1, 0] + g[0, 2] * out[2, 0]
    cdef int a, b
    for a in range(3):
        for b in range(3):
            out[a, b] /= det
    return det


def null_frame_geometry(s, double m, Ps, Pss, grad, grad_s, hess):
    Ps_a = np.ascontiguousarray(Ps, dtype=np.float64)
    cdef Py_ssize_t n = Ps_a.shape[0]
    cdef const double[::1] sv = np.ascontiguousarray(np.broadcast_to(np.asarray(s, dtype=np.float64), (n,)))
    cdef const double[::1] ps_ = Ps_a
    cdef const double[::1] pss = np.ascontiguousarray(Pss, dtype=np.float64)
    cdef const double[:, ::1] p = np.ascontiguousarray(grad, dtype=np.float64)
    cdef const double[:, ::1] pg = np.ascontiguousarray(grad_s, dtype=np.float64)
    cdef const double[:, :, ::1] hs = np.ascontiguousarray(hess, dtype=np.float64)

    gbar_a = np.empty((n, 3, 3))
    abar_a = np.empty((n, 3, 3))
    L_a = np.empty(n)
    sB_a = np.empty(n)
    H_a = np.empty(n)
    na_a = np.empty(n)
    tr_a = np.empty(n)
    S_a = np.empty(n)
    cdef double[:, :, ::1] gbar = gbar_a
    cdef double[:, :, ::1] abar = abar_a
    cdef double[::1] Lv = L_a
    cdef double[::1] sBv = sB_a
    cdef double[::1] Hv = H_a
    cdef double[::1] nav = na_a
    cdef double[::1] trv = tr_a
    cdef double[::1] Sv = S_a

    cdef double[:, ::1] gi = np.empty((3, 3))
    cdef double[:, ::1] a0 = np.empty((3, 3))
    cdef double[:, ::1] mix = np.empty((3, 3))
    cdef Py_ssize_t i
    cdef int a, b, c_
    cdef double si, k, k3, k4, P1, L, rl, cc, tr_ab, norm2, tr0, acc, Hi
    for i in range(n):
        si = sv[i]
        P1 = ps_[i]
        k = si * si * (1.0 - 2.0 * m * si)
        k3 = si * si * si * (1.0 - 5.0 * m * si + 6.0 * m * m * si * si)
        k4 = si * (1.0 - 3.0 * m * si)
        L = -(2.0 * P1 + k * P1 * P1 + p[i, 0] * p[i, 0] + p[i, 1] * p[i, 1])
        rl = 1.0 / sqrt(L)
        Lv[i] = L
        cc = k3 * P1 + k4
        for a in range(2):
            for b in range(2):
                gbar[i, a, b] = (1.0 if a == b else 0.0) - k * p[i, a] * p[i, b]
                abar[i, a, b] = rl * (-hs[i, a, b] + cc * p[i, a] * p[i, b])
            gbar[i, 2, a] = -p[i, a] * (1.0 + k * P1)
            gbar[i, a, 2] = gbar[i, 2, a]
            abar[i, 2, a] = rl * (-pg[i, a] + (2.0 * k4 * P1 + k3 * P1 * P1) * p[i, a])
            abar[i, a, 2] = abar[i, 2, a]
        gbar[i, 2, 2] = -2.0 * P1 - k * P1 * P1
        abar[i, 2, 2] = rl * (-pss[i] + 3.0 * k4 * P1 * P1 + k3 * P1 * P1 * P1)
        sBv[i] = rl * (1.0 + k * P1)
        _inv3(gbar[i], gi)
        tr_ab = 0.0
        for a in range(3):
            for b in range(3):
                tr_ab += gi[a, b] * abar[i, a, b]
        Hi = si * tr_ab / 3.0 + sBv[i]
        Hv[i] = Hi
        for a in range(3):
            for b in range(3):
                a0[a, b] = si * (abar[i, a, b] - tr_ab / 3.0 * gbar[i, a, b])
        for a in range(3):
            for b in range(3):
                acc = 0.0
                for c_ in range(3):
                    acc += gi[a, c_] * a0[c_, b]
                mix[a, b] = acc
        norm2 = 0.0
        tr0 = 0.0
        for a in range(3):
            tr0 += mix[a, a]
            for b in range(3):
                norm2 += mix[a, b] * mix[b, a]
        trv[i] = tr0
        nav[i] = sqrt(norm2) if norm2 > 0.0 else 0.0
        Sv[i] = norm2 - 6.0 * Hi * Hi
    return {
        "gbar": gbar_a,
        "abar": abar_a,
        "L": L_a,
        "sB": sB_a,
        "H": H_a,
        "norm_a0": na_a,
        "tr_a0": tr_a,
        "S": S_a,
    }
