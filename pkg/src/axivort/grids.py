"""Truncated half-plane grids with cell-centered nodes.

Radial nodes sit at (i + 1/2) h_r so no node lies on the axis r = 0, where
the evolved quantities satisfy homogeneous Dirichlet conditions.  The axial
direction is likewise cell-centered and symmetric about z = 0.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Grid:
    n_r: int
    n_z: int
    r_max: float
    z_max: float
    r: np.ndarray = field(init=False, repr=False, compare=False)
    z: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_r < 2 or self.n_z < 2:
            raise DomainError("grid needs at least 2 nodes per direction")
        if self.r_max <= 0 or self.z_max <= 0:
            raise DomainError("grid extents must be positive")
        r = (np.arange(self.n_r) + 0.5) * self.h_r
        z = -self.z_max + (np.arange(self.n_z) + 0.5) * self.h_z
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "z", z)

    @property
    def h_r(self) -> float:
        return self.r_max / self.n_r

    @property
    def h_z(self) -> float:
        return 2.0 * self.z_max / self.n_z

    @property
    def cell_area(self) -> float:
        return self.h_r * self.h_z

    def mesh(self):
        return np.meshgrid(self.r, self.z, indexing="ij")

    def refined(self, factor: int = 2) -> "Grid":
        return Grid(self.n_r * factor, self.n_z * factor, self.r_max, self.z_max)

    def content_hash(self) -> str:
        key = f"{self.n_r}|{self.n_z}|{self.r_max!r}|{self.z_max!r}"
        return hashlib.sha256(key.encode()).hexdigest()[:16]


DEFAULT_GRID_SPEC = dict(n_r=192, n_z=384, r_max=12.0, z_max=12.0)


def default_grid() -> Grid:
    return Grid(**DEFAULT_GRID_SPEC)
