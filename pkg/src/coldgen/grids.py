"""Uniform cell-centered grids and the fields that live on them.

Conventions used throughout the package:

* index i runs along x (0 .. nx-1), index j along y (0 .. ny-1);
* arrays are stored with shape (ny, nx), so ``values[j, i]`` addresses
  cell (i, j);
* the cell (i, j) has its center at ((i + 0.5) * dx, (j + 0.5) * dy);
* coolant enters across the j = 0 edge and leaves across j = ny - 1.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Grid:
    """Uniform 2D discretization: cell counts and spacings in meters."""

    nx: int
    ny: int
    dx: float
    dy: float

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise DomainError(f"grid needs nx, ny >= 3 (got {self.nx}x{self.ny})")
        if self.dx <= 0 or self.dy <= 0:
            raise DomainError(f"grid spacings must be positive (got dx={self.dx}, dy={self.dy})")

    @property
    def shape(self) -> tuple[int, int]:
        """Array shape (ny, nx) for fields on this grid."""
        return (self.ny, self.nx)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def width(self) -> float:
        return self.nx * self.dx

    @property
    def height(self) -> float:
        return self.ny * self.dy

    def x_centers(self) -> np.ndarray:
        return (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return (np.arange(self.ny) + 0.5) * self.dy

    def unit_spaced(self) -> "Grid":
        """Same lattice with dx = dy = 1 (used by the pattern generator,
        whose parameters are expressed in grid units)."""
        return Grid(self.nx, self.ny, 1.0, 1.0)


@dataclass
class ScalarField:
    """A real-valued quantity sampled at every cell of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise DomainError(
                f"field shape {self.values.shape} does not match grid shape {self.grid.shape}"
            )

    @classmethod
    def full(cls, grid: Grid, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def mean(self) -> float:
        return float(self.values.mean())


@dataclass
class ChannelMask:
    """Binary per-cell indicator of coolant channel presence."""

    grid: Grid
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.shape != self.grid.shape:
            raise DomainError(
                f"mask shape {bits.shape} does not match grid shape {self.grid.shape}"
            )
        if not np.isin(bits, (0, 1)).all():
            raise DomainError("mask entries must be 0 or 1")
        self.bits = bits.astype(np.uint8)

    @property
    def fill_fraction(self) -> float:
        """Share of cells marked as channel."""
        return float(self.bits.mean())

    def on_grid(self, grid: Grid) -> "ChannelMask":
        """Re-home the same bit pattern onto another grid with identical
        cell counts (the generator runs in grid units, the solver in
        meters; cells map one-to-one)."""
        if (grid.nx, grid.ny) != (self.grid.nx, self.grid.ny):
            raise DomainError(
                f"cannot transfer mask between grids with different cell counts "
                f"({self.grid.nx}x{self.grid.ny} vs {grid.nx}x{grid.ny})"
            )
        return ChannelMask(grid, self.bits)

    def copy(self) -> "ChannelMask":
        return ChannelMask(self.grid, self.bits.copy())
