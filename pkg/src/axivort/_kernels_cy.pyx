# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel loops: Biot-Savart profile assembly and direct summation.

Must stay numerically equivalent to ``_kernels_py`` (same branch formulas,
same interpolation stencil); the dispatch layer treats the two as twins.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, log, sqrt

cnp.import_array()

cdef double LOG4 = log(4.0)
cdef double PI = 3.141592653589793238462643383279502884
cdef double PI_16 = PI / 16.0
cdef double PI_64 = PI / 64.0
cdef double C75_128 = 75.0 / 128.0
cdef double C525_256 = 525.0 / 256.0


cdef inline void _f_pair(double s, double u0, double du, Py_ssize_t n,
                         const double* fv, const double* fdv,
                         double s_lo, double s_hi,
                         double* f_out, double* fp_out) noexcept nogil:
    cdef double kp2, big_l, m, rm, u, x, w0, w1, w2, w3
    cdef Py_ssize_t j
    if s < s_lo:
        kp2 = s / (4.0 + s)
        big_l = LOG4 - 0.5 * log(kp2)
        f_out[0] = big_l - 2.0 + 0.75 * kp2 * (big_l - 1.0)
        fp_out[0] = (-2.0 / (s * (4.0 + s))
                     + 3.0 / ((4.0 + s) * (4.0 + s)) * (big_l - 1.0)
                     - 1.5 * kp2 / (s * (4.0 + s)))
    elif s > s_hi:
        m = 4.0 / (4.0 + s)
        rm = sqrt(m)
        f_out[0] = PI_16 * m * rm * (1.0 + 0.75 * m + C75_128 * m * m)
        fp_out[0] = -PI_64 * m * m * rm * (1.5 + 1.875 * m + C525_256 * m * m)
    else:
        u = (log(s) - u0) / du
        j = <Py_ssize_t> floor(u) - 1
        if j < 0:
            j = 0
        if j > n - 4:
            j = n - 4
        x = u - j
        w0 = -(x - 1) * (x - 2) * (x - 3) / 6.0
        w1 = x * (x - 2) * (x - 3) / 2.0
        w2 = -x * (x - 1) * (x - 3) / 2.0
        w3 = x * (x - 1) * (x - 2) / 6.0
        f_out[0] = w0 * fv[j] + w1 * fv[j + 1] + w2 * fv[j + 2] + w3 * fv[j + 3]
        fp_out[0] = w0 * fdv[j] + w1 * fdv[j + 1] + w2 * fdv[j + 2] + w3 * fdv[j + 3]


def bs_profiles_row(double ri,
                    cnp.ndarray[double, ndim=1] rbar,
                    cnp.ndarray[double, ndim=1] dz,
                    double u0, double du,
                    cnp.ndarray[double, ndim=1] fvals,
                    cnp.ndarray[double, ndim=1] fdvals,
                    double s_lo, double s_hi,
                    Py_ssize_t self_j, double gz_self):
    cdef Py_ssize_t nj = rbar.shape[0]
    cdef Py_ssize_t nd = dz.shape[0]
    cdef cnp.ndarray[double, ndim=2] gr = np.empty((nj, nd))
    cdef cnp.ndarray[double, ndim=2] gz = np.empty((nj, nd))
    cdef Py_ssize_t n = fvals.shape[0]
    cdef const double* fv = &fvals[0]
    cdef const double* fdv = &fdvals[0]
    cdef Py_ssize_t j, d, izero
    cdef double dr, inv_rr, pref, pref2, s, f, fp, dzd

    izero = 0
    for d in range(1, nd):
        if dz[d] * dz[d] < dz[izero] * dz[izero]:
            izero = d

    for j in range(nj):
        dr = ri - rbar[j]
        inv_rr = 1.0 / (ri * rbar[j])
        pref = 1.0 / (PI * ri * sqrt(ri) * sqrt(rbar[j]))
        pref2 = sqrt(rbar[j]) / (4.0 * PI * ri * sqrt(ri))
        for d in range(nd):
            if j == self_j and d == izero:
                gr[j, d] = 0.0
                gz[j, d] = gz_self
                continue
            dzd = dz[d]
            s = (dr * dr + dzd * dzd) * inv_rr
            _f_pair(s, u0, du, n, fv, fdv, s_lo, s_hi, &f, &fp)
            gr[j, d] = -pref * dzd * fp
            gz[j, d] = pref * dr * fp + pref2 * (f - 2.0 * s * fp)
    return gr, gz


def naive_velocity(cnp.ndarray[double, ndim=2] omega,
                   cnp.ndarray[double, ndim=1] r,
                   cnp.ndarray[double, ndim=1] z,
                   double h_r, double h_z,
                   cnp.ndarray[double, ndim=1] gz_self,
                   double u0, double du,
                   cnp.ndarray[double, ndim=1] fvals,
                   cnp.ndarray[double, ndim=1] fdvals,
                   double s_lo, double s_hi):
    cdef Py_ssize_t n_r = omega.shape[0]
    cdef Py_ssize_t n_z = omega.shape[1]
    cdef cnp.ndarray[double, ndim=2] u_r = np.zeros((n_r, n_z))
    cdef cnp.ndarray[double, ndim=2] u_z = np.zeros((n_r, n_z))
    cdef Py_ssize_t n = fvals.shape[0]
    cdef const double* fv = &fvals[0]
    cdef const double* fdv = &fdvals[0]
    cdef Py_ssize_t i, k, j, l
    cdef double acc_r, acc_z, dr, dzv, inv_rr, pref, pref2, s, f, fp, w, cell

    cell = h_r * h_z
    for i in range(n_r):
        for k in range(n_z):
            acc_r = 0.0
            acc_z = 0.0
            for j in range(n_r):
                dr = r[i] - r[j]
                inv_rr = 1.0 / (r[i] * r[j])
                pref = 1.0 / (PI * r[i] * sqrt(r[i]) * sqrt(r[j]))
                pref2 = sqrt(r[j]) / (4.0 * PI * r[i] * sqrt(r[i]))
                for l in range(n_z):
                    w = omega[j, l]
                    if i == j and k == l:
                        acc_z += gz_self[i] * w
                        continue
                    dzv = z[k] - z[l]
                    s = (dr * dr + dzv * dzv) * inv_rr
                    _f_pair(s, u0, du, n, fv, fdv, s_lo, s_hi, &f, &fp)
                    acc_r += -pref * dzv * fp * w
                    acc_z += (pref * dr * fp + pref2 * (f - 2.0 * s * fp)) * w
            u_r[i, k] = acc_r * cell
            u_z[i, k] = acc_z * cell
    return u_r, u_z
