#!/usr/bin/env python3
"""The full closed loop, then the head-to-head comparison.

Each round solves the plate for the current channel mask, converts the
temperature excess into a feed-rate field (hot cells push channel
growth), and evolves the constrained pattern.  The finished design is
then solved side by side with the straight-channel baseline under
identical material parameters.
"""

from pathlib import Path

from coldgen import (
    compare_designs,
    default_config,
    export_heatmap,
    generate_baseline_parallel,
    run_generative_design,
    write_report_json,
)

OUT = Path(__file__).parent / "output"


def main():
    cfg = default_config()
    grid = cfg.build_grid()
    layout = cfg.build_layout(grid)

    print(f"loop: {cfg.loop.outer_rounds} rounds x {cfg.loop.rd_steps_per_round} steps, "
          f"feedback gain {cfg.loop.feedback_gain}, seed {cfg.loop.seed}")
    report = run_generative_design(grid, layout, cfg.material, cfg.rd, cfg.loop, cfg.p_seed)

    print("\nround   max C    mean C   fill")
    for r in report.history:
        print(f"{r.round_index:5d}  {r.max_c:7.2f}  {r.mean_c:7.2f}  {r.fill_fraction:.3f}")
    print(f"final  {report.metrics.domain_max_c:7.2f}  "
          f"{report.metrics.domain_mean_c:7.2f}  {report.mask_fill_fraction:.3f}")

    baseline = generate_baseline_parallel(
        grid, layout, cfg.baseline_channel_width, cfg.baseline_pitch
    )
    comparison = compare_designs(
        baseline, report.mask, grid, layout, cfg.material,
        cfg.loop.tol, cfg.loop.max_iter, label_a="baseline", label_b="generative",
    )

    print("\n              max C    mean C   fill")
    print(f"baseline    {comparison.metrics_a.domain_max_c:7.2f}  "
          f"{comparison.metrics_a.domain_mean_c:7.2f}  {comparison.fill_a:.3f}")
    print(f"generative  {comparison.metrics_b.domain_max_c:7.2f}  "
          f"{comparison.metrics_b.domain_mean_c:7.2f}  {comparison.fill_b:.3f}")
    print(f"delta       {comparison.delta_max_c:7.2f}  {comparison.delta_mean_c:7.2f}")

    OUT.mkdir(exist_ok=True)
    export_heatmap(report.temperature, OUT / "generative_temperature.pgm")
    write_report_json(comparison, OUT / "comparison.json")
    print(f"\nwrote {OUT}/generative_temperature.pgm and {OUT}/comparison.json")


if __name__ == "__main__":
    main()
