"""Discrete Lebesgue norms in both half-plane measures, and the (d_r, d_z) gradient.

Two measures coexist: the flat half-plane measure dr dz (norms written
`*_omega`) and the three-dimensional measure 2 pi r dr dz (norms written
`*_r3`).  Every weighted norm used by the diagnostics reduces to one of
these applied to r^a f.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .fields import ScalarField

TWO_PI = 2.0 * np.pi


def _check_p(p) -> float:
    p = float(p)
    if not (p >= 1.0):
        raise DomainError("Lebesgue exponent must satisfy p >= 1")
    return p


def lp_norm_omega(f: ScalarField, p) -> float:
    """L^p norm with measure dr dz on the half-plane."""
    p = _check_p(p)
    v = np.abs(f.values)
    if np.isinf(p):
        return float(v.max(initial=0.0))
    return float((np.sum(v**p) * f.grid.cell_area) ** (1.0 / p))


def lp_norm_r3(f: ScalarField, p) -> float:
    """L^p norm with the 3-D measure 2 pi r dr dz."""
    p = _check_p(p)
    v = np.abs(f.values)
    if np.isinf(p):
        return float(v.max(initial=0.0))
    w = TWO_PI * f.grid.r[:, None] * f.grid.cell_area
    return float(np.sum(v**p * w) ** (1.0 / p))


def weighted_lp(f: ScalarField, weight_exponent: float, p, measure: str = "omega") -> float:
    """Norm of r^a f in the chosen measure ("omega" -> dr dz, "r3" -> 2 pi r dr dz)."""
    p = _check_p(p)
    a = float(weight_exponent)
    if measure not in ("omega", "r3"):
        raise DomainError(f"unknown measure {measure!r}")
    weighted = f.with_values(f.grid.r[:, None] ** a * f.values)
    return lp_norm_omega(weighted, p) if measure == "omega" else lp_norm_r3(weighted, p)


def _diff_axis(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Second-order differences: centered interior, one-sided at the ends."""
    v = np.moveaxis(values, axis, 0)
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2 * h)
    out[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
    out[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    return np.moveaxis(out, 0, axis)


def gradient_tilde(f: ScalarField) -> tuple[ScalarField, ScalarField]:
    """(d_r f, d_z f) to second order."""
    g = f.grid
    if g.n_r < 4 or g.n_z < 4:
        raise DomainError("gradient_tilde needs at least 4 nodes per direction")
    dr = _diff_axis(f.values, g.h_r, 0)
    dz = _diff_axis(f.values, g.h_z, 1)
    return f.with_values(dr, "generic"), f.with_values(dz, "generic")
