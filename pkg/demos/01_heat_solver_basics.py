#!/usr/bin/env python3
"""Walkthrough of the thermal side: build the default board, check the
solver against the analytic uniform solution, then solve the straight
parallel-channel design and export the temperature field.

Artifacts land in demos/output/.
"""

from pathlib import Path

import numpy as np

from coldgen import (
    Grid,
    MaterialParams,
    ScalarField,
    assemble_h_field,
    build_heat_flux_map,
    compute_metrics,
    default_layout,
    energy_residual,
    export_field_csv,
    export_heatmap,
    generate_baseline_parallel,
    solve_steady,
)

OUT = Path(__file__).parent / "output"


def analytic_sanity_check():
    print("== 1. analytic sanity check ==")
    print("Uniform heating against a uniform sink has the closed-form")
    print("solution T = T_coolant + Q/h; the solver must land on it.")
    grid = Grid(64, 64, 0.001, 0.001)
    params = MaterialParams()
    Q = ScalarField.full(grid, 750000.0)
    h = ScalarField.full(grid, 15000.0)
    result = solve_steady(Q, h, params, tol=1e-6)
    worst = np.abs(result.temperature.values - 75.0).max()
    print(f"   expected 75.000 C, worst cell error {worst:.2e} K "
          f"after {result.iterations} iterations\n")


def solve_baseline_board():
    print("== 2. default board under straight channels ==")
    grid, layout = default_layout()
    params = MaterialParams()
    print(f"   board {grid.width * 1000:.0f} x {grid.height * 1000:.0f} mm "
          f"at {grid.dx * 1000:.0f} mm resolution")
    for rect, tdp in layout.chips:
        print(f"   chip {rect.label:10s} {tdp:6.0f} W")

    q = build_heat_flux_map(grid, layout)
    print(f"   applied power: {q.values.sum() * grid.cell_area:.0f} W")

    mask = generate_baseline_parallel(grid, layout, channel_width=0.002, pitch=0.004)
    h = assemble_h_field(mask, params)
    result = solve_steady(q, h, params)
    metrics = compute_metrics(result.temperature, layout)

    print(f"   converged in {result.iterations} iterations "
          f"(residual {result.final_residual:.2e} K)")
    print(f"   domain: max {metrics.domain_max_c:.2f} C, mean {metrics.domain_mean_c:.2f} C")
    for chip in metrics.chips:
        print(f"   {chip.label:10s} max {chip.max_c:.2f} C, mean {chip.mean_c:.2f} C")
    net = energy_residual(result.temperature, q, h, params)
    print(f"   energy closure: net unaccounted power {net:+.3f} W")

    OUT.mkdir(exist_ok=True)
    export_field_csv(result.temperature, OUT / "baseline_temperature.csv")
    export_heatmap(result.temperature, OUT / "baseline_temperature.pgm")
    export_heatmap(ScalarField(grid, mask.bits.astype(float)), OUT / "baseline_mask.pgm")
    print(f"   wrote temperature CSV/PGM and mask PGM under {OUT}/")


if __name__ == "__main__":
    analytic_sanity_check()
    solve_baseline_board()
