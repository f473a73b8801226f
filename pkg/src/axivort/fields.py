"""Scalar fields on a grid and the (vorticity, swirl) state pair."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GridMismatchError
from .grids import Grid

QUANTITY_TAGS = ("omega_theta", "u_theta", "u_r", "u_z", "generic")


@dataclass
class ScalarField:
    grid: Grid
    values: np.ndarray
    tag: str = "generic"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_r, self.grid.n_z):
            raise DomainError(
                f"values shape {self.values.shape} does not match grid "
                f"({self.grid.n_r}, {self.grid.n_z})"
            )
        if self.tag not in QUANTITY_TAGS:
            raise DomainError(f"unknown quantity tag {self.tag!r}")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("field values must be finite")

    @classmethod
    def zeros(cls, grid: Grid, tag: str = "generic") -> "ScalarField":
        return cls(grid, np.zeros((grid.n_r, grid.n_z)), tag)

    @classmethod
    def from_function(cls, grid: Grid, fn, tag: str = "generic") -> "ScalarField":
        rr, zz = grid.mesh()
        return cls(grid, fn(rr, zz), tag)

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy(), self.tag)

    def with_values(self, values, tag=None) -> "ScalarField":
        return ScalarField(self.grid, values, tag or self.tag)

    def _check_same_grid(self, other: "ScalarField"):
        if self.grid != other.grid:
            raise GridMismatchError("fields live on different grids")

    def __add__(self, other: "ScalarField") -> "ScalarField":
        self._check_same_grid(other)
        return ScalarField(self.grid, self.values + other.values, self.tag)

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        self._check_same_grid(other)
        return ScalarField(self.grid, self.values - other.values, self.tag)

    def __mul__(self, scalar: float) -> "ScalarField":
        return ScalarField(self.grid, self.values * float(scalar), self.tag)

    __rmul__ = __mul__

    def boundary_decay_ratio(self) -> float:
        """Max boundary-row/column magnitude relative to the interior max."""
        v = np.abs(self.values)
        interior = v[1:-1, 1:-1].max()
        edge = max(v[0, :].max(), v[-1, :].max(), v[:, 0].max(), v[:, -1].max())
        return float(edge / interior) if interior > 0 else 0.0


@dataclass
class AxiState:
    """One-time snapshot of (omega^theta, u^theta) with lazily derived velocity."""

    omega: ScalarField
    u_theta: ScalarField
    _velocity: tuple[ScalarField, ScalarField] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.omega.grid != self.u_theta.grid:
            raise GridMismatchError("state components live on different grids")

    @property
    def grid(self) -> Grid:
        return self.omega.grid

    @classmethod
    def zeros(cls, grid: Grid) -> "AxiState":
        return cls(ScalarField.zeros(grid, "omega_theta"), ScalarField.zeros(grid, "u_theta"))

    def copy(self) -> "AxiState":
        return AxiState(self.omega.copy(), self.u_theta.copy(), self._velocity)

    def velocity(self, path: str = "auto") -> tuple[ScalarField, ScalarField]:
        """(u_r, u_z) recovered from the vorticity; cached until invalidated."""
        if self._velocity is None:
            from .biot_savart import velocity_from_vorticity

            self._velocity = velocity_from_vorticity(self.omega, path=path)
        return self._velocity

    def invalidate_velocity(self):
        self._velocity = None

    def __add__(self, other: "AxiState") -> "AxiState":
        return AxiState(self.omega + other.omega, self.u_theta + other.u_theta)

    def __sub__(self, other: "AxiState") -> "AxiState":
        return AxiState(self.omega - other.omega, self.u_theta - other.u_theta)

    def __mul__(self, scalar: float) -> "AxiState":
        return AxiState(self.omega * scalar, self.u_theta * scalar)

    __rmul__ = __mul__
