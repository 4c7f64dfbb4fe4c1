"""Shared test helpers: an independent dense solver used as the oracle
for the Jacobi iteration, and small board builders.

The dense oracle assembles the per-cell balance

    rx*(T_E + T_W) + ry*(T_N + T_S) - (2rx + 2ry + h)*T + Q + h*T_cool = 0

into an (nx*ny) x (nx*ny) matrix by hand, folding mirrored (out of
bounds) neighbors back onto the diagonal, and solves it directly with
numpy.linalg.solve.  It deliberately shares no code with the solver
module.
"""

import numpy as np

from coldgen import BoardLayout, Grid, MaterialParams, RectRegion, build_layout


def dense_solve(grid: Grid, q: np.ndarray, h: np.ndarray, params: MaterialParams) -> np.ndarray:
    nx, ny = grid.nx, grid.ny
    rx = params.conductivity * params.thickness / grid.dx**2
    ry = params.conductivity * params.thickness / grid.dy**2
    n = nx * ny
    A = np.zeros((n, n))
    b = np.zeros(n)
    for j in range(ny):
        for i in range(nx):
            row = j * nx + i
            A[row, row] = -(2 * rx + 2 * ry + h[j, i])
            for di, dj, coeff in ((-1, 0, rx), (1, 0, rx), (0, -1, ry), (0, 1, ry)):
                ni, nj = i + di, j + dj
                if 0 <= ni < nx and 0 <= nj < ny:
                    A[row, nj * nx + ni] += coeff
                else:
                    A[row, row] += coeff  # mirrored ghost = the cell itself
            b[row] = -(q[j, i] + h[j, i] * params.t_coolant)
    return np.linalg.solve(A, b).reshape(ny, nx)


def small_board(nx=24, ny=32, dx=0.002) -> tuple[Grid, BoardLayout]:
    """A miniature board with two heated footprints and centered ports,
    cheap enough for loop tests."""
    grid = Grid(nx, ny, dx, dx)
    w, hgt = grid.width, grid.height
    chips = (
        (RectRegion(0.15 * w, 0.10 * hgt, 0.45 * w, 0.35 * hgt, "hot_a"), 40.0),
        (RectRegion(0.55 * w, 0.55 * hgt, 0.85 * w, 0.80 * hgt, "hot_b"), 10.0),
    )
    return grid, build_layout(grid, chips, port_width=0.25 * w)
