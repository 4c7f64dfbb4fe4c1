"""Steady-state plate temperature from a Jacobi-iterated finite-difference
heat balance.

Each cell (i, j) satisfies

    k*t * lap(T) + Q - h * (T - T_coolant) = 0

discretized with central differences.  With the conduction coefficients
rx = k*t/dx^2 and ry = k*t/dy^2 the fixed-point update reads

    T_new = (rx*(T_left + T_right) + ry*(T_down + T_up)
             + Q + h*T_coolant) / (2*(rx + ry) + h)

All four board edges are adiabatic; edge neighbors are obtained by
ghost-cell mirroring (the ghost value equals the edge cell itself), so
the conduction terms telescope to zero when summed over the board.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoSinkError
from .geometry import BoardLayout
from .grids import ChannelMask, Grid, ScalarField


@dataclass(frozen=True)
class MaterialParams:
    """Plate material and heat-sink constants.

    conductivity  thermal conductivity of the plate, W/(m*K)
    thickness     plate thickness, m
    t_coolant     coolant temperature, degC (held fixed)
    h_channel     heat transfer coefficient on channel cells, W/(m^2*K)
    h_base        coefficient on non-channel cells, W/(m^2*K)
    """

    conductivity: float = 148.0
    thickness: float = 0.001
    t_coolant: float = 25.0
    h_channel: float = 15000.0
    h_base: float = 10.0

    def __post_init__(self):
        if self.conductivity <= 0 or self.thickness <= 0:
            raise DomainError("conductivity and thickness must be positive")
        if not (self.h_channel > self.h_base >= 0):
            raise DomainError(
                f"need h_channel > h_base >= 0 (got {self.h_channel}, {self.h_base})"
            )


@dataclass
class SolveResult:
    temperature: ScalarField
    iterations: int
    final_residual: float
    converged: bool


@dataclass(frozen=True)
class ChipMetrics:
    label: str
    max_c: float
    mean_c: float


@dataclass(frozen=True)
class ThermalMetrics:
    """Domain-wide and per-chip temperature statistics, degC."""

    domain_max_c: float
    domain_mean_c: float
    chips: tuple[ChipMetrics, ...]

    def to_dict(self) -> dict:
        return {
            "domain": {"max_c": self.domain_max_c, "mean_c": self.domain_mean_c},
            "chips": [
                {"label": c.label, "max_c": c.max_c, "mean_c": c.mean_c}
                for c in self.chips
            ],
        }


def assemble_h_field(mask: ChannelMask, params: MaterialParams) -> ScalarField:
    """Per-cell heat transfer coefficient: h_channel where the mask is 1,
    h_base where it is 0."""
    h = np.where(mask.bits == 1, params.h_channel, params.h_base)
    return ScalarField(mask.grid, h)


def _coefficients(grid: Grid, q: np.ndarray, h: np.ndarray, params: MaterialParams):
    """Precompute the update coefficients a, b, c so one sweep is
    T_new = a*(T_left+T_right) + b*(T_down+T_up) + c."""
    rx = params.conductivity * params.thickness / grid.dx**2
    ry = params.conductivity * params.thickness / grid.dy**2
    denom = 2.0 * (rx + ry) + h
    a = rx / denom
    b = ry / denom
    c = (q + h * params.t_coolant) / denom
    return a, b, c


def _sweep(t, out, a, b, c, sx, sy):
    """One Jacobi sweep from t into out.  sx, sy are scratch buffers of
    the same shape; all buffers must be distinct arrays."""
    # Neighbor sums along x with mirrored edge ghosts.
    sx[:, 1:-1] = t[:, :-2]
    sx[:, 1:-1] += t[:, 2:]
    sx[:, 0] = t[:, 0]
    sx[:, 0] += t[:, 1]
    sx[:, -1] = t[:, -2]
    sx[:, -1] += t[:, -1]
    # Neighbor sums along y.
    sy[1:-1, :] = t[:-2, :]
    sy[1:-1, :] += t[2:, :]
    sy[0, :] = t[0, :]
    sy[0, :] += t[1, :]
    sy[-1, :] = t[-2, :]
    sy[-1, :] += t[-1, :]

    np.multiply(sx, a, out=out)
    np.multiply(sy, b, out=sy)
    out += sy
    out += c


def _check_same_grid(*fields: ScalarField) -> Grid:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise DomainError("fields must share one grid")
    return grid


def jacobi_step(
    T: ScalarField, Q: ScalarField, h: ScalarField, params: MaterialParams
) -> tuple[ScalarField, float]:
    """One double-buffered Jacobi update.  Returns the new field and the
    residual max|T_new - T|; the input field is left untouched."""
    grid = _check_same_grid(T, Q, h)
    if (h.values < 0).any():
        raise DomainError("h must be non-negative everywhere")
    a, b, c = _coefficients(grid, Q.values, h.values, params)
    out = np.empty(grid.shape)
    sx = np.empty(grid.shape)
    sy = np.empty(grid.shape)
    _sweep(T.values, out, a, b, c, sx, sy)
    np.subtract(out, T.values, out=sx)
    np.abs(sx, out=sx)
    return ScalarField(grid, out), float(sx.max())


def solve_steady(
    Q: ScalarField,
    h: ScalarField,
    params: MaterialParams,
    tol: float = 1e-4,
    max_iter: int = 200_000,
) -> SolveResult:
    """Iterate Jacobi sweeps from T = t_coolant until the residual (the
    largest per-cell update) drops to tol, or max_iter sweeps have run.

    Non-convergence is reported, not raised: the best iterate comes back
    with converged=False.  Raises NoSinkError when h = 0 everywhere while
    power is applied (no steady state exists)."""
    grid = _check_same_grid(Q, h)
    if not Q.is_finite() or not h.is_finite():
        raise DomainError("Q and h must be finite")
    if (h.values < 0).any():
        raise DomainError("h must be non-negative everywhere")
    if not (h.values > 0).any() and Q.values.sum() > 0:
        raise NoSinkError("h = 0 everywhere with non-zero total power")

    a, b, c = _coefficients(grid, Q.values, h.values, params)
    t_old = np.full(grid.shape, params.t_coolant)
    t_new = np.empty(grid.shape)
    sx = np.empty(grid.shape)
    sy = np.empty(grid.shape)
    diff = np.empty(grid.shape)

    iterations = 0
    residual = np.inf
    while iterations < max_iter:
        _sweep(t_old, t_new, a, b, c, sx, sy)
        iterations += 1
        np.subtract(t_new, t_old, out=diff)
        np.abs(diff, out=diff)
        residual = float(diff.max())
        t_old, t_new = t_new, t_old
        if residual <= tol:
            break

    return SolveResult(
        temperature=ScalarField(grid, t_old),
        iterations=iterations,
        final_residual=residual,
        converged=residual <= tol,
    )


def compute_metrics(T: ScalarField, layout: BoardLayout) -> ThermalMetrics:
    """Max and mean temperature over the whole board and over each chip
    footprint."""
    layout.validate_on(T.grid)
    chips = []
    for rect, _ in layout.chips:
        inside = rect.contains_centers(T.grid)
        cells = T.values[inside]
        chips.append(ChipMetrics(rect.label, float(cells.max()), float(cells.mean())))
    return ThermalMetrics(
        domain_max_c=T.max(),
        domain_mean_c=T.mean(),
        chips=tuple(chips),
    )


def energy_residual(
    T: ScalarField, Q: ScalarField, h: ScalarField, params: MaterialParams
) -> float:
    """Net power 'unaccounted for' at a candidate solution, in watts:
    sum of (Q - h*(T - t_coolant)) * cell_area.  Zero at the exact
    steady state because the conduction terms cancel under mirrored
    boundaries."""
    grid = _check_same_grid(T, Q, h)
    imbalance = Q.values - h.values * (T.values - params.t_coolant)
    return float(imbalance.sum() * grid.cell_area)
