"""Random axisymmetric test fields: mixtures of anisotropic Gaussians.

Centers live at r in [0.5, 6], |z| <= 6 with random signs, exercising both
the near-axis and far-field weights.  With ``axis_taper`` set, fields are
multiplied by 1 - exp(-(r/w)^2) so they vanish quadratically on the axis,
matching the Dirichlet behavior of physical vorticity and swirl.
"""

from __future__ import annotations

import numpy as np

from .fields import AxiState, ScalarField
from .grids import Grid


def gaussian_mixture(
    grid: Grid,
    rng: np.random.Generator,
    n_min: int = 1,
    n_max: int = 4,
    center_r=(0.5, 6.0),
    center_z_abs: float = 6.0,
    sigma=(0.3, 1.5),
    amplitude=(0.5, 2.0),
    axis_taper: float | None = None,
    tag: str = "generic",
) -> ScalarField:
    rr, zz = grid.mesh()
    vals = np.zeros_like(rr)
    n = int(rng.integers(n_min, n_max + 1))
    for _ in range(n):
        cr = rng.uniform(*center_r)
        cz = rng.uniform(-center_z_abs, center_z_abs)
        sr = rng.uniform(*sigma)
        sz = rng.uniform(*sigma)
        amp = rng.uniform(*amplitude) * rng.choice([-1.0, 1.0])
        vals += amp * np.exp(-(((rr - cr) / sr) ** 2 + ((zz - cz) / sz) ** 2))
    if axis_taper is not None:
        vals *= -np.expm1(-((rr / axis_taper) ** 2))
    return ScalarField(grid, vals, tag)


def random_state(grid: Grid, rng: np.random.Generator, axis_taper: float = 0.5) -> AxiState:
    omega = gaussian_mixture(grid, rng, axis_taper=axis_taper, tag="omega_theta")
    u_theta = gaussian_mixture(grid, rng, axis_taper=axis_taper, tag="u_theta")
    return AxiState(omega, u_theta)


def gaussian_ring(
    grid: Grid,
    amplitude: float = 1.0,
    center_r: float = 2.0,
    width: float = 0.5,
    center_z: float = 0.0,
    tag: str = "omega_theta",
) -> ScalarField:
    rr, zz = grid.mesh()
    vals = amplitude * np.exp(-(((rr - center_r) ** 2 + (zz - center_z) ** 2) / width**2))
    return ScalarField(grid, vals, tag)


def exact_5d_family(grid: Grid, t0: float = 1.0, t: float = 0.0) -> ScalarField:
    """r times the 5-D radial heat kernel at time t0 + t; invariant family of
    the linearized evolution (the swirl-free vorticity equation transports
    omega/r by the five-dimensional heat flow)."""
    rr, zz = grid.mesh()
    tt = t0 + t
    vals = rr * (4.0 * np.pi * tt) ** -2.5 * np.exp(-(rr**2 + zz**2) / (4.0 * tt))
    return ScalarField(grid, vals, "omega_theta")
