"""Constrained Gray-Scott pattern generator.

Two species evolve on the lattice by explicit Euler steps:

    u_new = u + dt * (diff_u * lap(u) - u*v^2 + feed*(1 - u))
    v_new = v + dt * (diff_v * lap(v) + u*v^2 - (feed + kill)*v)

v acts as the channel indicator.  After every step v is clamped to 1.0
on the pinned cells (ports and chip footprints), which forces channels
to exist there and biases growth outward from them.  Thresholding v
yields the binary channel mask.

The feed rate may be a scalar or a per-cell field; the kill term always
uses (feed + kill) cell by cell, so a spatially varying feed raises both
replenishment and decay locally.

Parameters are expressed in grid units (cell spacing 1, one time unit
per step); callers working on a physical grid should evolve on
``grid.unit_spaced()`` (the design loop does this).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import PinnedSet
from .grids import ChannelMask, Grid, ScalarField


@dataclass(frozen=True)
class RDParams:
    """Gray-Scott coefficients.  Defaults sit in the labyrinth-forming
    regime, which grows connected channel-like structures.

    The default dt honors a tighter constraint than the diffusion-only
    check_stability bound: inside pinned plates v is clamped to 1, so
    the u reaction term is stiff and explicit Euler needs
    dt < 2 / (8*diff_u + v^2 + feed) ~ 0.86 on a unit lattice."""

    diff_u: float = 0.16
    diff_v: float = 0.08
    feed: float = 0.055
    kill: float = 0.062
    dt: float = 0.5

    def __post_init__(self):
        if not (self.diff_u > self.diff_v > 0):
            raise DomainError(
                f"pattern formation needs diff_u > diff_v > 0 "
                f"(got {self.diff_u}, {self.diff_v})"
            )
        if self.feed <= 0 or self.kill <= 0 or self.dt <= 0:
            raise DomainError("feed, kill and dt must be positive")


@dataclass
class RDState:
    u: ScalarField
    v: ScalarField
    step_count: int = 0

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise DomainError("u and v must share one grid")

    @property
    def grid(self) -> Grid:
        return self.u.grid


def check_stability(params: RDParams, grid: Grid) -> float:
    """Largest explicit-Euler time step the diffusion terms tolerate:
    1 / (2 * max(diff_u, diff_v) * (1/dx^2 + 1/dy^2))."""
    d = max(params.diff_u, params.diff_v)
    return 1.0 / (2.0 * d * (1.0 / grid.dx**2 + 1.0 / grid.dy**2))


def _laplacian(arr: np.ndarray, inv_dx2: float, inv_dy2: float) -> np.ndarray:
    """Five-point Laplacian with mirrored (no-flux) edge ghosts."""
    out = np.empty_like(arr)
    out[:, 1:-1] = arr[:, :-2] - 2.0 * arr[:, 1:-1] + arr[:, 2:]
    out[:, 0] = arr[:, 1] - arr[:, 0]
    out[:, -1] = arr[:, -2] - arr[:, -1]
    out *= inv_dx2
    tmp = np.empty_like(arr)
    tmp[1:-1, :] = arr[:-2, :] - 2.0 * arr[1:-1, :] + arr[2:, :]
    tmp[0, :] = arr[1, :] - arr[0, :]
    tmp[-1, :] = arr[-2, :] - arr[-1, :]
    tmp *= inv_dy2
    out += tmp
    return out


def laplacian(phi: ScalarField) -> ScalarField:
    grid = phi.grid
    return ScalarField(grid, _laplacian(phi.values, 1.0 / grid.dx**2, 1.0 / grid.dy**2))


def _gs_arrays(u, v, params: RDParams, feed, inv_dx2, inv_dy2):
    """One explicit Euler step on raw arrays; returns fresh arrays."""
    lap_u = _laplacian(u, inv_dx2, inv_dy2)
    lap_v = _laplacian(v, inv_dx2, inv_dy2)
    uvv = u * v * v
    u_new = u + params.dt * (params.diff_u * lap_u - uvv + feed * (1.0 - u))
    v_new = v + params.dt * (params.diff_v * lap_v + uvv - (feed + params.kill) * v)
    return u_new, v_new


def _feed_values(feed_field: ScalarField | None, params: RDParams, grid: Grid):
    if feed_field is None:
        return params.feed
    if feed_field.grid.shape != grid.shape:
        raise DomainError("feed field shape does not match the state grid")
    return feed_field.values


def gray_scott_step(
    state: RDState, params: RDParams, feed_field: ScalarField | None = None
) -> RDState:
    """Unconstrained update of both species; inputs are not modified.
    feed_field, when given, replaces the scalar feed rate cell by cell."""
    grid = state.grid
    feed = _feed_values(feed_field, params, grid)
    with np.errstate(over="ignore", invalid="ignore"):
        u_new, v_new = _gs_arrays(
            state.u.values, state.v.values, params, feed,
            1.0 / grid.dx**2, 1.0 / grid.dy**2,
        )
    return RDState(
        u=ScalarField(grid, u_new),
        v=ScalarField(grid, v_new),
        step_count=state.step_count,
    )


def _pin_indices(pinned: PinnedSet, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """(j_array, i_array) of pinned cells, bounds-checked, sorted."""
    idx = sorted(pinned.indices)
    ii = np.array([i for i, _ in idx], dtype=np.intp)
    jj = np.array([j for _, j in idx], dtype=np.intp)
    if idx and (
        ii.min() < 0 or ii.max() >= grid.nx or jj.min() < 0 or jj.max() >= grid.ny
    ):
        raise DomainError("pinned set has out-of-bounds indices for this grid")
    return jj, ii


def apply_pinning(state: RDState, pinned: PinnedSet) -> RDState:
    """Clamp v to exactly 1.0 on every pinned cell; u and all other
    cells pass through untouched."""
    jj, ii = _pin_indices(pinned, state.grid)
    v = state.v.values.copy()
    v[jj, ii] = 1.0
    return RDState(u=state.u.copy(), v=ScalarField(state.grid, v), step_count=state.step_count)


def constrained_step(
    state: RDState,
    params: RDParams,
    pinned: PinnedSet,
    feed_field: ScalarField | None = None,
) -> RDState:
    """gray_scott_step followed by pinning; step_count advances by one."""
    stepped = apply_pinning(gray_scott_step(state, params, feed_field), pinned)
    stepped.step_count = state.step_count + 1
    return stepped


def evolve(
    state: RDState,
    params: RDParams,
    pinned: PinnedSet,
    n_steps: int,
    feed_field: ScalarField | None = None,
) -> RDState:
    """Run n_steps constrained steps.  Elementwise identical to chaining
    constrained_step, just without per-step wrapper objects."""
    grid = state.grid
    feed = _feed_values(feed_field, params, grid)
    jj, ii = _pin_indices(pinned, grid)
    inv_dx2 = 1.0 / grid.dx**2
    inv_dy2 = 1.0 / grid.dy**2
    u = state.u.values
    v = state.v.values
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n_steps):
            u, v = _gs_arrays(u, v, params, feed, inv_dx2, inv_dy2)
            v[jj, ii] = 1.0
    return RDState(
        u=ScalarField(grid, u),
        v=ScalarField(grid, v),
        step_count=state.step_count + n_steps,
    )


def init_state(
    grid: Grid, pinned: PinnedSet, rng_seed: int, p_seed: float = 0.002
) -> RDState:
    """Near-trivial start: u = 1 and v = 0 everywhere, v = 1 on pinned
    cells, then each cell independently becomes a (u, v) = (0.5, 0.5)
    seed with probability p_seed.  Deterministic for a fixed rng_seed."""
    if not (0.0 <= p_seed < 1.0):
        raise DomainError(f"p_seed must lie in [0, 1) (got {p_seed})")
    u = np.ones(grid.shape)
    v = np.zeros(grid.shape)
    jj, ii = _pin_indices(pinned, grid)
    v[jj, ii] = 1.0
    rng = np.random.default_rng(rng_seed)
    seeds = rng.random(grid.shape) < p_seed
    u[seeds] = 0.5
    v[seeds] = 0.5
    return RDState(u=ScalarField(grid, u), v=ScalarField(grid, v), step_count=0)


def threshold_mask(v: ScalarField, tau: float) -> ChannelMask:
    """Binary channel mask: 1 where v >= tau (boundary inclusive)."""
    if not (0.0 < tau < 1.0):
        raise DomainError(f"threshold must lie strictly inside (0, 1) (got {tau})")
    return ChannelMask(v.grid, (v.values >= tau).astype(np.uint8))
