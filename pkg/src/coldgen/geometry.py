"""Board description: chip footprints, coolant ports, heat-flux map and
the pinned cell sets that anchor channel growth.

Rasterization rule everywhere: a cell belongs to a rectangle iff its
center lies inside the half-open box [x0, x1) x [y0, y1).  This is
deterministic and refinement-consistent.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .grids import Grid, ScalarField

# Default board used when no config overrides geometry.  Sizes are in
# meters; the full schema (and these constants) are documented in the
# README.  Two 45x45 mm GPU footprints sit near the inlet edge, one
# 45x35 mm CPU footprint near the outlet edge.
DEFAULT_BOARD_WIDTH = 0.120
DEFAULT_BOARD_HEIGHT = 0.160
DEFAULT_RESOLUTION = 0.001
DEFAULT_PORT_WIDTH = 0.0254  # 1 inch
DEFAULT_GPU_TDP = 1200.0
DEFAULT_CPU_TDP = 300.0
DEFAULT_CHIPS = (
    ("gpu_left", 0.010, 0.020, 0.055, 0.065, DEFAULT_GPU_TDP),
    ("gpu_right", 0.065, 0.020, 0.110, 0.065, DEFAULT_GPU_TDP),
    ("cpu", 0.0375, 0.105, 0.0825, 0.140, DEFAULT_CPU_TDP),
)


@dataclass(frozen=True)
class RectRegion:
    """Axis-aligned rectangle in board coordinates (meters)."""

    x0: float
    y0: float
    x1: float
    y1: float
    label: str = ""

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise DomainError(
                f"rectangle '{self.label}' is degenerate: "
                f"({self.x0}, {self.y0}) .. ({self.x1}, {self.y1})"
            )

    def contains_centers(self, grid: Grid) -> np.ndarray:
        """Boolean (ny, nx) array of cells whose center falls inside."""
        xc = grid.x_centers()
        yc = grid.y_centers()
        in_x = (xc >= self.x0) & (xc < self.x1)
        in_y = (yc >= self.y0) & (yc < self.y1)
        return np.outer(in_y, in_x)


@dataclass(frozen=True)
class BoardLayout:
    """Chips with their heat loads plus the inlet/outlet port spans.

    The inlet span lives on the j = 0 edge, the outlet span on the
    j = ny - 1 edge; each span is an inclusive cell-index range
    (i_first, i_last).
    """

    chips: tuple[tuple[RectRegion, float], ...]
    inlet_span: tuple[int, int]
    outlet_span: tuple[int, int]
    port_width: float

    def __post_init__(self):
        for rect, tdp in self.chips:
            if tdp <= 0:
                raise DomainError(f"chip '{rect.label}' has non-positive TDP {tdp}")
        for name, (i0, i1) in (("inlet", self.inlet_span), ("outlet", self.outlet_span)):
            if not (0 <= i0 <= i1):
                raise DomainError(f"{name} span ({i0}, {i1}) is not a valid index range")
        if self.port_width <= 0:
            raise DomainError(f"port width must be positive (got {self.port_width})")

    def validate_on(self, grid: Grid) -> None:
        """Check that chips and spans fit inside the grid extent."""
        for rect, _ in self.chips:
            if rect.x0 < 0 or rect.y0 < 0 or rect.x1 > grid.width or rect.y1 > grid.height:
                raise DomainError(
                    f"chip '{rect.label}' extends outside the {grid.width} x {grid.height} m board"
                )
        for name, (i0, i1) in (("inlet", self.inlet_span), ("outlet", self.outlet_span)):
            if i1 > grid.nx - 1:
                raise DomainError(f"{name} span ({i0}, {i1}) exceeds grid columns 0..{grid.nx - 1}")


@dataclass(frozen=True)
class PinnedSet:
    """Cells whose channel indicator is clamped to 1: inlet row cells,
    outlet row cells, and rasterized chip footprints.  The combined set
    is exactly the union of the three constituents."""

    inlet: frozenset[tuple[int, int]]
    outlet: frozenset[tuple[int, int]]
    chips: frozenset[tuple[int, int]]

    @property
    def indices(self) -> frozenset[tuple[int, int]]:
        return self.inlet | self.outlet | self.chips

    def __len__(self) -> int:
        return len(self.indices)

    def as_mask(self, grid: Grid) -> np.ndarray:
        """Boolean (ny, nx) array, True on pinned cells."""
        out = np.zeros(grid.shape, dtype=bool)
        for i, j in self.indices:
            out[j, i] = True
        return out


def span_from_width(grid: Grid, center_x: float, width: float) -> tuple[int, int]:
    """Inclusive i-range of cells whose center lies inside the interval
    [center - width/2, center + width/2)."""
    xc = grid.x_centers()
    hit = np.flatnonzero((xc >= center_x - width / 2) & (xc < center_x + width / 2))
    if hit.size == 0:
        raise DomainError(
            f"port of width {width} m at x={center_x} m rasterizes to zero cells"
        )
    return int(hit[0]), int(hit[-1])


def build_layout(
    grid: Grid,
    chips: tuple[tuple[RectRegion, float], ...],
    port_width: float = DEFAULT_PORT_WIDTH,
    inlet_center: float | None = None,
    outlet_center: float | None = None,
) -> BoardLayout:
    """Place the coolant ports and assemble a validated layout.

    Ports default to the horizontal middle of the board.
    """
    if inlet_center is None:
        inlet_center = grid.width / 2
    if outlet_center is None:
        outlet_center = grid.width / 2
    layout = BoardLayout(
        chips=tuple(chips),
        inlet_span=span_from_width(grid, inlet_center, port_width),
        outlet_span=span_from_width(grid, outlet_center, port_width),
        port_width=port_width,
    )
    layout.validate_on(grid)
    return layout


def default_layout(resolution: float = DEFAULT_RESOLUTION) -> tuple[Grid, BoardLayout]:
    """The documented default board: 120 x 160 mm at 1 mm resolution,
    two 1200 W GPUs near the inlet edge, one 300 W CPU near the outlet
    edge, 25.4 mm ports centered on both edges."""
    grid = Grid(
        nx=round(DEFAULT_BOARD_WIDTH / resolution),
        ny=round(DEFAULT_BOARD_HEIGHT / resolution),
        dx=resolution,
        dy=resolution,
    )
    chips = tuple(
        (RectRegion(x0, y0, x1, y1, label), tdp)
        for label, x0, y0, x1, y1, tdp in DEFAULT_CHIPS
    )
    return grid, build_layout(grid, chips)


def build_heat_flux_map(grid: Grid, layout: BoardLayout) -> ScalarField:
    """Uniform heat flux per chip: TDP divided by the rasterized
    footprint area, in W/m^2.  Integrating the result over the board
    recovers the summed TDPs exactly (up to float rounding)."""
    layout.validate_on(grid)
    q = np.zeros(grid.shape)
    for rect, tdp in layout.chips:
        inside = rect.contains_centers(grid)
        n_cells = int(inside.sum())
        if n_cells == 0:
            raise DomainError(
                f"chip '{rect.label}' rasterizes to zero cells; grid too coarse"
            )
        q[inside] += tdp / (n_cells * grid.cell_area)
    return ScalarField(grid, q)


def build_pinned_sets(grid: Grid, layout: BoardLayout) -> PinnedSet:
    """Inlet cells on the j=0 row, outlet cells on the j=ny-1 row, and
    every rasterized chip cell."""
    layout.validate_on(grid)
    i0, i1 = layout.inlet_span
    inlet = frozenset((i, 0) for i in range(i0, i1 + 1))
    i0, i1 = layout.outlet_span
    outlet = frozenset((i, grid.ny - 1) for i in range(i0, i1 + 1))
    chip_cells = set()
    for rect, _ in layout.chips:
        jj, ii = np.nonzero(rect.contains_centers(grid))
        chip_cells.update(zip(ii.tolist(), jj.tolist()))
    return PinnedSet(inlet=inlet, outlet=outlet, chips=frozenset(chip_cells))
