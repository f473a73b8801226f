"""Kernel profile functions H, H' and F, F' on the positive half-line.

H(t) is the radial profile of the linearized solution operator's kernel,

    H(t) = (1/sqrt(pi t)) * integral_{-pi/2}^{pi/2} exp(-sin^2(phi)/t) cos(2 phi) dphi,

and F(s) is the profile entering the axisymmetric velocity-recovery kernels,

    F(s) = integral_0^{pi/2} cos(2 phi) / (sin^2(phi) + s/4)^{1/2} dphi.

Mid-range values come from log-spaced lookup tables built by composite
Gauss-Legendre quadrature of the defining integrals and checked against
adaptive (QUADPACK) quadrature at build time.  Outside the table range the
evaluators switch to asymptotic expansions:

    H(t) = 1 - 3t/4 - 15t^2/32 - ...                    (t -> 0)
    H(t) = (sqrt(pi)/4) t^{-3/2} (1 - 1/(2t) + ...)     (t -> infinity)
    F(s) = log(4/k') - 2 + ...,  k'^2 = s/(4+s)         (s -> 0)
    F(s) = (pi/16) m^{3/2} (1 + 3m/4 + ...), m=4/(4+s)  (s -> infinity)
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError

SQRT_PI = np.sqrt(np.pi)

_BUILD_CHECK_RTOL = 1e-8
_SEAM_RTOL = 1e-9


# ---------------------------------------------------------------------------
# table type


@dataclass(frozen=True)
class KernelTable:
    """Log-spaced lookup table for one profile function and its derivative."""

    abscissae: np.ndarray
    values: np.ndarray
    deriv_values: np.ndarray
    t_lo: float
    t_hi: float
    order: int = 3

    def __post_init__(self):
        if self.t_lo <= 0:
            raise DomainError("table range must be positive")
        if not np.all(np.diff(self.abscissae) > 0):
            raise DomainError("table abscissae must be strictly increasing")

    @property
    def _u0(self) -> float:
        return np.log(self.t_lo)

    @property
    def _du(self) -> float:
        n = self.abscissae.size
        return (np.log(self.t_hi) - np.log(self.t_lo)) / (n - 1)

    def interpolate(self, t, derivative: bool = False):
        """Cubic (4-point Lagrange) interpolation in log(t)."""
        vals = self.deriv_values if derivative else self.values
        t = np.asarray(t, dtype=float)
        u = (np.log(t) - self._u0) / self._du
        n = vals.size
        j = np.clip(np.floor(u).astype(np.int64) - 1, 0, n - 4)
        x = u - j
        w0 = -(x - 1) * (x - 2) * (x - 3) / 6.0
        w1 = x * (x - 2) * (x - 3) / 2.0
        w2 = -x * (x - 1) * (x - 3) / 2.0
        w3 = x * (x - 1) * (x - 2) / 6.0
        return w0 * vals[j] + w1 * vals[j + 1] + w2 * vals[j + 2] + w3 * vals[j + 3]


# ---------------------------------------------------------------------------
# quadrature machinery

_GL_CACHE: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}


def _phi_rule(n_per: int = 24, a_min: float = 1e-5, ratio: float = 0.5):
    """Composite Gauss-Legendre nodes on [0, pi/2], panels refined toward 0."""
    key = (n_per, a_min, ratio)
    if key not in _GL_CACHE:
        edges = [0.0]
        e = a_min
        while e < np.pi / 2:
            edges.append(e)
            e /= ratio
        edges.append(np.pi / 2)
        edges = np.array(sorted(set(edges)))
        xg, wg = np.polynomial.legendre.leggauss(n_per)
        a, b = edges[:-1], edges[1:]
        mid, half = (a + b) / 2, (b - a) / 2
        nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
        wts = (half[:, None] * wg[None, :]).ravel()
        _GL_CACHE[key] = (nodes, wts)
    return _GL_CACHE[key]


def _h_values_gl(ts: np.ndarray) -> np.ndarray:
    """Vectorized H(t) by composite GL quadrature of the defining integral.

    For t >= 1 the constant part of exp(-sin^2(phi)/t) is subtracted exactly
    (cos(2 phi) integrates to zero), removing the large-t cancellation.
    """
    phi, w = _phi_rule()
    s2 = np.sin(phi) ** 2
    wc = w * np.cos(2 * phi)
    out = np.empty(ts.size)
    for i0 in range(0, ts.size, 512):
        t = ts[i0 : i0 + 512, None]
        e = np.where(t >= 1.0, np.expm1(-s2[None, :] / t), np.exp(-s2[None, :] / t))
        out[i0 : i0 + 512] = (2 / np.sqrt(np.pi * t[:, 0])) * (e @ wc)
    return out


def _h_prime_values_gl(ts: np.ndarray) -> np.ndarray:
    phi, w = _phi_rule()
    s2 = np.sin(phi) ** 2
    wc = w * np.cos(2 * phi)
    out = np.empty(ts.size)
    for i0 in range(0, ts.size, 512):
        t = ts[i0 : i0 + 512, None]
        e = np.exp(-s2[None, :] / t)
        plain = (s2[None, :] / t**2 - 1 / (2 * t)) * e
        subtr = (s2[None, :] / t**2) * e - np.expm1(-s2[None, :] / t) / (2 * t)
        g = np.where(t >= 1.0, subtr, plain)
        out[i0 : i0 + 512] = (2 / np.sqrt(np.pi * t[:, 0])) * (g @ wc)
    return out


def _f_values_gl(ss: np.ndarray) -> np.ndarray:
    phi, w = _phi_rule()
    s2 = np.sin(phi) ** 2
    wc = w * np.cos(2 * phi)
    out = np.empty(ss.size)
    for i0 in range(0, ss.size, 512):
        s = ss[i0 : i0 + 512, None]
        r = (s2[None, :] + s / 4.0) ** -0.5
        g = np.where(s >= 4.0, r - (s / 4.0) ** -0.5, r)
        out[i0 : i0 + 512] = g @ wc
    return out


def _f_prime_values_gl(ss: np.ndarray) -> np.ndarray:
    phi, w = _phi_rule()
    s2 = np.sin(phi) ** 2
    wc = w * np.cos(2 * phi)
    out = np.empty(ss.size)
    for i0 in range(0, ss.size, 512):
        s = ss[i0 : i0 + 512, None]
        r = (s2[None, :] + s / 4.0) ** -1.5
        g = np.where(s >= 4.0, r - (s / 4.0) ** -1.5, r)
        out[i0 : i0 + 512] = -(g @ wc) / 8.0
    return out


def h_quadrature(t: float) -> float:
    """Adaptive quadrature of the defining integral for H (builder check)."""
    if t >= 1.0:
        f = lambda p: np.expm1(-np.sin(p) ** 2 / t) * np.cos(2 * p)
    else:
        f = lambda p: np.exp(-np.sin(p) ** 2 / t) * np.cos(2 * p)
    brk = min(np.sqrt(t), 1.0)
    v, _ = quad(f, 0.0, np.pi / 2, limit=400, epsabs=0.0, epsrel=1e-11,
                points=[brk, min(10 * brk, 1.5)])
    return 2 / np.sqrt(np.pi * t) * v


def h_prime_quadrature(t: float) -> float:
    if t >= 1.0:
        f = lambda p: (
            (np.sin(p) ** 2 / t**2) * np.exp(-np.sin(p) ** 2 / t)
            - np.expm1(-np.sin(p) ** 2 / t) / (2 * t)
        ) * np.cos(2 * p)
    else:
        f = lambda p: (
            (np.sin(p) ** 2 / t**2 - 1 / (2 * t)) * np.exp(-np.sin(p) ** 2 / t)
        ) * np.cos(2 * p)
    brk = min(np.sqrt(t), 1.0)
    v, _ = quad(f, 0.0, np.pi / 2, limit=400, epsabs=0.0, epsrel=1e-11,
                points=[brk, min(10 * brk, 1.5)])
    return 2 / np.sqrt(np.pi * t) * v


def f_quadrature(s: float) -> float:
    """Adaptive quadrature for F using the u = sin(phi) substitution.

    The integration range splits at u = sqrt(s) to tame the near-singular
    region; for large s the flat part of the integrand is subtracted exactly.
    """
    if s >= 4.0:
        f = lambda u: (
            (1 - 2 * u * u)
            / np.sqrt(1 - u * u)
            * ((u * u + s / 4.0) ** -0.5 - (s / 4.0) ** -0.5)
        )
    else:
        f = lambda u: (1 - 2 * u * u) / np.sqrt((1 - u * u) * (u * u + s / 4.0))
    cut = min(np.sqrt(s), 0.5)
    v1, _ = quad(f, 0.0, cut, limit=400, epsabs=0.0, epsrel=1e-11)
    v2, _ = quad(f, cut, 1.0, limit=400, epsabs=0.0, epsrel=1e-11)
    return v1 + v2


def f_prime_quadrature(s: float) -> float:
    if s >= 4.0:
        f = lambda u: (
            (1 - 2 * u * u)
            / np.sqrt(1 - u * u)
            * ((u * u + s / 4.0) ** -1.5 - (s / 4.0) ** -1.5)
        )
    else:
        f = lambda u: (1 - 2 * u * u) / (np.sqrt(1 - u * u) * (u * u + s / 4.0) ** 1.5)
    cut = min(np.sqrt(s), 0.5)
    v1, _ = quad(f, 0.0, cut, limit=400, epsabs=0.0, epsrel=1e-11)
    v2, _ = quad(f, cut, 1.0, limit=400, epsabs=0.0, epsrel=1e-11)
    return -(v1 + v2) / 8.0


# ---------------------------------------------------------------------------
# asymptotic branches


def _h_small(t):
    return 1.0 - 0.75 * t - (15.0 / 32.0) * t**2 - (105.0 / 128.0) * t**3


def _h_large(t):
    return (
        (SQRT_PI / 4.0)
        * t**-1.5
        * (1.0 - 0.5 / t + (5.0 / 32.0) / t**2 - (7.0 / 192.0) / t**3)
    )


def _h_prime_small(t):
    return -0.75 - (15.0 / 16.0) * t - (315.0 / 128.0) * t**2


def _h_prime_large(t):
    return (
        -(3.0 * SQRT_PI / 8.0)
        * t**-2.5
        * (1.0 - (5.0 / 6.0) / t + (35.0 / 96.0) / t**2)
    )


def _f_small(s):
    kp2 = s / (4.0 + s)
    big_l = np.log(4.0) - 0.5 * np.log(kp2)
    return big_l - 2.0 + 0.75 * kp2 * (big_l - 1.0)


def _f_large(s):
    m = 4.0 / (4.0 + s)
    return (np.pi / 16.0) * m**1.5 * (1.0 + 0.75 * m + (75.0 / 128.0) * m**2)


def _f_prime_small(s):
    kp2 = s / (4.0 + s)
    big_l = np.log(4.0) - 0.5 * np.log(kp2)
    return (
        -2.0 / (s * (4.0 + s))
        + 3.0 / (4.0 + s) ** 2 * (big_l - 1.0)
        - 1.5 * kp2 / (s * (4.0 + s))
    )


def _f_prime_large(s):
    m = 4.0 / (4.0 + s)
    return -(np.pi / 64.0) * m**2.5 * (1.5 + (15.0 / 8.0) * m + (525.0 / 256.0) * m**2)


# ---------------------------------------------------------------------------
# builders

TABLE_T_LO = 1e-6
TABLE_T_HI = 1e6
TABLE_SIZE = 4096


def _check_against_adaptive(table: KernelTable, direct, direct_prime, label: str):
    """Assert interpolated values match adaptive quadrature on a subsample."""
    n = table.abscissae.size
    mids = np.sqrt(table.abscissae[:-1] * table.abscissae[1:])[:: max(1, (n - 1) // 64)]
    for t in mids:
        ref = direct(t)
        got = float(table.interpolate(t))
        if abs(got - ref) > _BUILD_CHECK_RTOL * abs(ref):
            raise AssertionError(
                f"{label} table/quadrature mismatch at {t:g}: {got!r} vs {ref!r}"
            )
        refp = direct_prime(t)
        gotp = float(table.interpolate(t, derivative=True))
        if abs(gotp - refp) > _BUILD_CHECK_RTOL * abs(refp):
            raise AssertionError(
                f"{label}' table/quadrature mismatch at {t:g}: {gotp!r} vs {refp!r}"
            )


def _check_seams(table: KernelTable, small, large, small_p, large_p, label: str):
    for t, series, col in (
        (table.t_lo, small, "values"),
        (table.t_hi, large, "values"),
    ):
        tab = float(table.interpolate(t))
        ser = float(series(t))
        if abs(tab - ser) > _SEAM_RTOL * abs(ser):
            raise AssertionError(f"{label} branch seam mismatch at {t:g}")
    for t, series in ((table.t_lo, small_p), (table.t_hi, large_p)):
        tab = float(table.interpolate(t, derivative=True))
        ser = float(series(t))
        if abs(tab - ser) > _SEAM_RTOL * abs(ser):
            raise AssertionError(f"{label}' branch seam mismatch at {t:g}")


def _cache_path(label: str, t_lo: float, t_hi: float, n: int):
    cache_dir = os.environ.get("AXIVORT_TABLE_CACHE")
    if not cache_dir:
        return None
    key = hashlib.sha256(
        f"{label}|{t_lo!r}|{t_hi!r}|{n}|v1".encode()
    ).hexdigest()[:16]
    return os.path.join(cache_dir, f"axivort_{label}_{key}.npz")


def build_h_table(t_lo=TABLE_T_LO, t_hi=TABLE_T_HI, n=TABLE_SIZE) -> KernelTable:
    path = _cache_path("H", t_lo, t_hi, n)
    if path and os.path.exists(path):
        d = np.load(path)
        return KernelTable(d["t"], d["v"], d["dv"], t_lo, t_hi)
    ts = np.exp(np.linspace(np.log(t_lo), np.log(t_hi), n))
    table = KernelTable(ts, _h_values_gl(ts), _h_prime_values_gl(ts), t_lo, t_hi)
    _check_against_adaptive(table, h_quadrature, h_prime_quadrature, "H")
    _check_seams(table, _h_small, _h_large, _h_prime_small, _h_prime_large, "H")
    if path:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        np.savez(path, t=table.abscissae, v=table.values, dv=table.deriv_values)
    return table


def build_f_table(s_lo=TABLE_T_LO, s_hi=TABLE_T_HI, n=TABLE_SIZE) -> KernelTable:
    path = _cache_path("F", s_lo, s_hi, n)
    if path and os.path.exists(path):
        d = np.load(path)
        return KernelTable(d["t"], d["v"], d["dv"], s_lo, s_hi)
    ss = np.exp(np.linspace(np.log(s_lo), np.log(s_hi), n))
    table = KernelTable(ss, _f_values_gl(ss), _f_prime_values_gl(ss), s_lo, s_hi)
    _check_against_adaptive(table, f_quadrature, f_prime_quadrature, "F")
    _check_seams(table, _f_small, _f_large, _f_prime_small, _f_prime_large, "F")
    if path:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        np.savez(path, t=table.abscissae, v=table.values, dv=table.deriv_values)
    return table


def dump_table(table: KernelTable, path: str):
    """Plain-text dump of a table for inspection."""
    with open(path, "w") as fh:
        fh.write(f"# range [{table.t_lo!r}, {table.t_hi!r}] order {table.order}\n")
        fh.write("# abscissa value derivative\n")
        for t, v, dv in zip(table.abscissae, table.values, table.deriv_values):
            fh.write(f"{t:.17e} {v:.17e} {dv:.17e}\n")


_H_TABLE: KernelTable | None = None
_F_TABLE: KernelTable | None = None


def h_table() -> KernelTable:
    global _H_TABLE
    if _H_TABLE is None:
        _H_TABLE = build_h_table()
    return _H_TABLE


def f_table() -> KernelTable:
    global _F_TABLE
    if _F_TABLE is None:
        _F_TABLE = build_f_table()
    return _F_TABLE


# ---------------------------------------------------------------------------
# evaluators


def _validate_positive(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be finite and positive")
    return arr


def _eval_branched(x, table: KernelTable, small, large, derivative: bool):
    scalar = np.isscalar(x) or getattr(x, "ndim", 0) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(arr)
    lo = arr < table.t_lo
    hi = arr > table.t_hi
    mid = ~(lo | hi)
    if lo.any():
        out[lo] = small(arr[lo])
    if hi.any():
        out[hi] = large(arr[hi])
    if mid.any():
        out[mid] = table.interpolate(arr[mid], derivative=derivative)
    return float(out[0]) if scalar else out


def eval_H(t):
    """H(t) for positive t (scalar or array)."""
    arr = _validate_positive(t, "t")
    return _eval_branched(arr if not np.isscalar(t) else t, h_table(), _h_small, _h_large, False)


def eval_H_prime(t):
    arr = _validate_positive(t, "t")
    return _eval_branched(
        arr if not np.isscalar(t) else t, h_table(), _h_prime_small, _h_prime_large, True
    )


def eval_F(s):
    arr = _validate_positive(s, "s")
    return _eval_branched(arr if not np.isscalar(s) else s, f_table(), _f_small, _f_large, False)


def eval_F_prime(s):
    arr = _validate_positive(s, "s")
    return _eval_branched(
        arr if not np.isscalar(s) else s, f_table(), _f_prime_small, _f_prime_large, True
    )


# ---------------------------------------------------------------------------
# boundedness report for weighted H, H'


@dataclass(frozen=True)
class WeightedBoundEntry:
    kind: str  # "H" or "Hprime"
    exponent: float
    sup_value: float
    sup_arg: float
    slope_low: float  # d log(t^a |f|) / d log t over the bottom decade
    slope_high: float  # same over the top decade
    unbounded: bool


@dataclass(frozen=True)
class WeightedBoundReport:
    samples: int
    t_min: float
    t_max: float
    entries: tuple[WeightedBoundEntry, ...]


def _bound_entry(kind, a, ts, vals) -> WeightedBoundEntry:
    w = ts**a * np.abs(vals)
    i = int(np.argmax(w))
    logt = np.log10(ts)
    lo = logt <= logt[0] + 1.0
    hi = logt >= logt[-1] - 1.0
    slope_low = np.polyfit(logt[lo], np.log10(w[lo]), 1)[0]
    slope_high = np.polyfit(logt[hi], np.log10(w[hi]), 1)[0]
    unbounded = slope_high > 0.02 or slope_low < -0.02
    return WeightedBoundEntry(kind, a, float(w[i]), float(ts[i]), float(slope_low), float(slope_high), unbounded)


def check_corH_bounds(
    samples: int,
    h_exponents=(0.0, 1.5),
    h_prime_exponents=(0.0, 2.5),
    t_min: float = 1e-8,
    t_max: float = 1e8,
) -> WeightedBoundReport:
    """Sample t^a H(t) and t^b |H'(t)| log-uniformly and report their suprema.

    An entry is flagged unbounded when the weighted function still grows at
    either end of the sampled range (the supremum would escape with range).
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    ts = np.exp(np.linspace(np.log(t_min), np.log(t_max), max(samples, 16)))
    hv = eval_H(ts)
    hp = eval_H_prime(ts)
    entries = [_bound_entry("H", a, ts, hv) for a in h_exponents]
    entries += [_bound_entry("Hprime", b, ts, hp) for b in h_prime_exponents]
    return WeightedBoundReport(samples, t_min, t_max, tuple(entries))
