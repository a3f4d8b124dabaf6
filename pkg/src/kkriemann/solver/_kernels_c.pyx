# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled LLF kernels; same API as the NumPy module ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, fabs, sqrt, floor as cfloor

cnp.import_array()


cdef inline int _half_steps(double a) noexcept nogil:
    # 2a when a is a small half-integer, else 0 (use exp/log)
    cdef double k = 2.0 * a
    if k == cfloor(k) and fabs(k) <= 8.0:
        return <int>k
    return 0


cdef inline double _phi(double x, double a, int k) noexcept nogil:
    cdef double s, p = 1.0
    cdef int j
    if k == 0:
        return exp(a * log(x))
    s = sqrt(x)
    for j in range(k if k > 0 else -k):
        p *= s
    return p if k > 0 else 1.0 / p


cdef inline void _flux(double r, double q, double I, double a, double rb,
                       double floor, int k, double* g1, double* g2) noexcept nogil:
    cdef double u, phi, f
    if r <= floor:
        g1[0] = 0.0
        g2[0] = 0.0
        return
    u = q / r
    phi = _phi(r / rb, a, k)
    f = r * (u + I) * (1.0 - phi)
    g1[0] = f
    g2[0] = u * f


def max_speed(double[::1] rho, double[::1] m, double I, double a,
              double rho_bar, double floor):
    cdef Py_ssize_t i, n = rho.shape[0]
    cdef double best = 0.0, r, v, phi, s
    cdef int k = _half_steps(a)
    with nogil:
        for i in range(n):
            r = rho[i]
            if r <= floor:
                continue
            v = m[i] / r + I
            phi = _phi(r / rho_bar, a, k)
            s = fabs(v * (1.0 - (a + 1.0) * phi))
            if s > best:
                best = s
            s = fabs(v * (1.0 - phi))
            if s > best:
                best = s
    return best


def fluxes(double[::1] rho, double[::1] m, double I, double a,
           double rho_bar, double floor):
    cdef Py_ssize_t i, n = rho.shape[0]
    out1 = np.empty(n)
    out2 = np.empty(n)
    cdef int k = _half_steps(a)
    cdef double[::1] g1 = out1
    cdef double[::1] g2 = out2
    with nogil:
        for i in range(n):
            _flux(rho[i], m[i], I, a, rho_bar, floor, k, &g1[i], &g2[i])
    return out1, out2


def llf_update(double[::1] rho, double[::1] m, double I, double a,
               double rho_bar, double floor, double ratio, bint periodic):
    cdef Py_ssize_t i, n = rho.shape[0]
    gbuf1 = np.empty(n + 2)
    gbuf2 = np.empty(n + 2)
    rbuf = np.empty(n + 2)
    qbuf = np.empty(n + 2)
    out_r = np.empty(n)
    out_q = np.empty(n)
    cdef double[::1] g1 = gbuf1
    cdef double[::1] g2 = gbuf2
    cdef double[::1] r = rbuf
    cdef double[::1] q = qbuf
    cdef double[::1] nr = out_r
    cdef double[::1] nq = out_q
    cdef double half = 0.5 * ratio
    cdef int k = _half_steps(a)
    with nogil:
        for i in range(n):
            r[i + 1] = rho[i]
            q[i + 1] = m[i]
        if periodic:
            r[0] = rho[n - 1]
            q[0] = m[n - 1]
            r[n + 1] = rho[0]
            q[n + 1] = m[0]
        else:
            r[0] = rho[0]
            q[0] = m[0]
            r[n + 1] = rho[n - 1]
            q[n + 1] = m[n - 1]
        for i in range(n + 2):
            _flux(r[i], q[i], I, a, rho_bar, floor, k, &g1[i], &g2[i])
        for i in range(n):
            nr[i] = 0.5 * (r[i] + r[i + 2]) - half * (g1[i + 2] - g1[i])
            nq[i] = 0.5 * (q[i] + q[i + 2]) - half * (g2[i + 2] - g2[i])
            if nr[i] <= floor:
                if nr[i] < 0.0:
                    nr[i] = 0.0
                nq[i] = 0.0
    return out_r, out_q


def renormalize(double[::1] rho, double[::1] m, double tol, Py_ssize_t min_run,
                double dry=0.0):
    cdef Py_ssize_t n = rho.shape[0], i = 0, j, c
    out_r = np.array(rho, copy=True)
    out_q = np.array(m, copy=True)
    cdef double[::1] r = out_r
    cdef double[::1] q = out_q
    cdef double tv_r, tv_m, nr, nm, sr, sq, low
    with nogil:
        while i < n - 1:
            tv_r = 0.0
            tv_m = 0.0
            j = i
            while j < n - 1:
                nr = tv_r + fabs(rho[j + 1] - rho[j])
                nm = tv_m + fabs(m[j + 1] - m[j])
                if nr >= tol or nm >= tol:
                    break
                tv_r = nr
                tv_m = nm
                j += 1
            low = rho[i]
            for c in range(i, j + 1):
                if rho[c] < low:
                    low = rho[c]
            if j - i + 1 >= min_run and low >= dry:
                sr = 0.0
                sq = 0.0
                for c in range(i, j + 1):
                    sr += rho[c]
                    sq += m[c]
                sr /= (j - i + 1)
                sq /= (j - i + 1)
                # an exactly flat component is left alone: its mean can be off by an ulp
                for c in range(i, j + 1):
                    if tv_r > 0:
                        r[c] = sr
                    if tv_m > 0:
                        q[c] = sq
            i = j + 1
    return out_r, out_q
