"""Pure-NumPy implementations of the hot kernel loops.

These mirror the compiled versions in ``_kernels_cy`` exactly; the dispatch
module picks whichever is available.  Formulas:

    G_r = -(1/pi) (z - zb) r^{-3/2} rb^{-1/2} F'(xi^2)
    G_z =  (1/pi) (r - rb) r^{-3/2} rb^{-1/2} F'(xi^2)
          + (1/(4 pi)) rb^{1/2} r^{-3/2} (F(xi^2) - 2 xi^2 F'(xi^2))
    xi^2 = ((r - rb)^2 + (z - zb)^2) / (r rb)
"""

from __future__ import annotations

import numpy as np

LOG4 = np.log(4.0)
PI_16 = np.pi / 16.0
PI_64 = np.pi / 64.0
C75_128 = 75.0 / 128.0
C525_256 = 525.0 / 256.0


def _f_pair(s, u0, du, fvals, fdvals, s_lo, s_hi):
    """Branched evaluation of (F, F') on an array of arguments."""
    s = np.asarray(s, dtype=float)
    F = np.empty_like(s)
    Fp = np.empty_like(s)
    lo = s < s_lo
    hi = s > s_hi
    mid = ~(lo | hi)
    if lo.any():
        sl = s[lo]
        kp2 = sl / (4.0 + sl)
        big_l = LOG4 - 0.5 * np.log(kp2)
        F[lo] = big_l - 2.0 + 0.75 * kp2 * (big_l - 1.0)
        Fp[lo] = (
            -2.0 / (sl * (4.0 + sl))
            + 3.0 / (4.0 + sl) ** 2 * (big_l - 1.0)
            - 1.5 * kp2 / (sl * (4.0 + sl))
        )
    if hi.any():
        sh = s[hi]
        m = 4.0 / (4.0 + sh)
        rm = np.sqrt(m)
        F[hi] = PI_16 * m * rm * (1.0 + 0.75 * m + C75_128 * m * m)
        Fp[hi] = -PI_64 * m * m * rm * (1.5 + 1.875 * m + C525_256 * m * m)
    if mid.any():
        sm = s[mid]
        n = fvals.size
        u = (np.log(sm) - u0) / du
        j = np.clip(np.floor(u).astype(np.int64) - 1, 0, n - 4)
        x = u - j
        w0 = -(x - 1) * (x - 2) * (x - 3) / 6.0
        w1 = x * (x - 2) * (x - 3) / 2.0
        w2 = -x * (x - 1) * (x - 3) / 2.0
        w3 = x * (x - 1) * (x - 2) / 6.0
        F[mid] = w0 * fvals[j] + w1 * fvals[j + 1] + w2 * fvals[j + 2] + w3 * fvals[j + 3]
        Fp[mid] = (
            w0 * fdvals[j] + w1 * fdvals[j + 1] + w2 * fdvals[j + 2] + w3 * fdvals[j + 3]
        )
    return F, Fp


def bs_profiles_row(ri, rbar, dz, u0, du, fvals, fdvals, s_lo, s_hi, self_j, gz_self):
    """G_r and G_z profiles for one output radius against all source radii.

    Returns arrays of shape (n_rbar, n_dz).  ``self_j`` marks the source
    index with rbar == ri (or -1); its dz == 0 entry is the singular cell and
    is replaced by 0 / ``gz_self``.
    """
    rbar = np.asarray(rbar, float)
    dz = np.asarray(dz, float)
    dr = ri - rbar
    s = (dr[:, None] ** 2 + dz[None, :] ** 2) / (ri * rbar[:, None])
    izero = None
    if self_j >= 0:
        izero = int(np.argmin(np.abs(dz)))
        s[self_j, izero] = 1.0  # placeholder, overwritten below
    F, Fp = _f_pair(s, u0, du, fvals, fdvals, s_lo, s_hi)
    pref = 1.0 / (np.pi * ri**1.5 * np.sqrt(rbar))[:, None]
    gr = -pref * dz[None, :] * Fp
    gz = pref * dr[:, None] * Fp + (np.sqrt(rbar)[:, None] / (4.0 * np.pi * ri**1.5)) * (
        F - 2.0 * s * Fp
    )
    if izero is not None:
        gr[self_j, izero] = 0.0
        gz[self_j, izero] = gz_self
    return gr, gz


def naive_velocity(omega, r, z, h_r, h_z, gz_self, u0, du, fvals, fdvals, s_lo, s_hi):
    """Direct O(N^4) Biot-Savart summation (reference path for small grids)."""
    n_r, n_z = omega.shape
    u_r = np.zeros_like(omega)
    u_z = np.zeros_like(omega)
    for i in range(n_r):
        for k in range(n_z):
            dz = z[k] - z
            gr, gz = bs_profiles_row(
                r[i], r, dz, u0, du, fvals, fdvals, s_lo, s_hi, i, gz_self[i]
            )
            u_r[i, k] = np.sum(gr * omega) * h_r * h_z
            u_z[i, k] = np.sum(gz * omega) * h_r * h_z
    return u_r, u_z
