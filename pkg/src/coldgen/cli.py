"""Command-line front-end.

Subcommands:
    baseline   straight-channel design: mask, solved temperature, metrics
    generate   closed-loop generative design with per-round history
    solve      evaluate an external mask CSV under the config's physics
    compare    baseline vs generative under identical material params
    pipeline   baseline + generate + compare sharing one config

Exit codes: 0 success, 1 config/input error, 2 solver did not converge
(artifacts are still written and flagged), 3 pattern fields blew up.
All outputs land under --out; stdout carries one summary line per
phase, stderr the diagnostics.
"""

import argparse
import os
import sys
from pathlib import Path

from .config import RunConfig, default_config, load_config
from .design import (
    compare_designs,
    generate_baseline_parallel,
    run_generative_design,
)
from .errors import DomainError, NoSinkError, ParseError, RDInstabilityError, ValidationError
from .geometry import build_heat_flux_map
from .reports import (
    export_field_csv,
    export_heatmap,
    export_mask_csv,
    import_mask_csv,
    write_report_json,
)
from .thermal import assemble_h_field, compute_metrics, solve_steady
from .version import __version__


def thread_cap() -> int:
    """Requested kernel-parallelism cap from COLDGEN_THREADS (0 = auto).
    The numpy kernels are single-threaded vectorized code, so any cap is
    honored; the value is surfaced for diagnostics."""
    raw = os.environ.get("COLDGEN_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        print(f"warning: ignoring non-integer COLDGEN_THREADS={raw!r}", file=sys.stderr)
        return 0
    if cap < 0:
        print(f"warning: ignoring negative COLDGEN_THREADS={cap}", file=sys.stderr)
        return 0
    return cap


def _note(verbosity: int, level: int, message: str) -> None:
    if verbosity >= level:
        print(message, file=sys.stderr)


def _solve_mask(cfg: RunConfig, mask):
    grid = mask.grid
    layout = cfg.build_layout(grid)
    q = build_heat_flux_map(grid, layout)
    h = assemble_h_field(mask, cfg.material)
    result = solve_steady(q, h, cfg.material, cfg.loop.tol, cfg.loop.max_iter)
    metrics = compute_metrics(result.temperature, layout)
    return result, metrics


def _metrics_report(cfg: RunConfig, mask, result, metrics) -> dict:
    return {
        "metrics": metrics.to_dict(),
        "mask_fill_fraction": mask.fill_fraction,
        "solver_converged": result.converged,
        "solver_iterations": result.iterations,
        "config": cfg.to_dict(),
    }


def _cmd_baseline(cfg: RunConfig, outdir: Path, verbosity: int):
    """Returns (exit_code, baseline_mask)."""
    grid = cfg.build_grid()
    layout = cfg.build_layout(grid)
    mask = generate_baseline_parallel(
        grid, layout, cfg.baseline_channel_width, cfg.baseline_pitch
    )
    result, metrics = _solve_mask(cfg, mask)
    export_mask_csv(mask, outdir / "baseline_mask.csv")
    export_field_csv(result.temperature, outdir / "baseline_temperature.csv")
    export_heatmap(result.temperature, outdir / "baseline_temperature.pgm", cfg.heatmap_range)
    write_report_json(_metrics_report(cfg, mask, result, metrics), outdir / "baseline_metrics.json")
    print(
        f"baseline: max {metrics.domain_max_c:.2f} C, mean {metrics.domain_mean_c:.2f} C, "
        f"fill {mask.fill_fraction:.3f}"
    )
    if not result.converged:
        print(
            f"warning: baseline solve stopped at residual {result.final_residual:.3g} "
            f"after {result.iterations} iterations",
            file=sys.stderr,
        )
        return 2, mask
    _note(verbosity, 1, f"baseline solve converged in {result.iterations} iterations")
    return 0, mask


def _cmd_generate(cfg: RunConfig, outdir: Path, verbosity: int):
    """Returns (exit_code, design_report)."""
    grid = cfg.build_grid()
    layout = cfg.build_layout(grid)
    report = run_generative_design(grid, layout, cfg.material, cfg.rd, cfg.loop, cfg.p_seed)
    export_mask_csv(report.mask, outdir / "generative_mask.csv")
    export_field_csv(report.temperature, outdir / "generative_temperature.csv")
    export_heatmap(report.temperature, outdir / "generative_temperature.pgm", cfg.heatmap_range)
    export_field_csv(report.v_field, outdir / "generative_v_field.csv")
    write_report_json(report, outdir / "generative_report.json")
    print(
        f"generative: max {report.metrics.domain_max_c:.2f} C, "
        f"mean {report.metrics.domain_mean_c:.2f} C, "
        f"fill {report.mask_fill_fraction:.3f}, rounds {cfg.loop.outer_rounds}"
    )
    for record in report.history:
        _note(
            verbosity, 1,
            f"round {record.round_index}: max {record.max_c:.2f} C, "
            f"mean {record.mean_c:.2f} C, fill {record.fill_fraction:.3f}",
        )
    if not report.solver_converged:
        print("warning: at least one solve in the loop did not converge", file=sys.stderr)
        return 2, report
    return 0, report


def _grids_compatible(a, b) -> bool:
    """Same cell counts; spacings equal up to the CSV's 12-digit
    quantization."""
    return (
        (a.nx, a.ny) == (b.nx, b.ny)
        and abs(a.dx - b.dx) <= 1e-9 * max(a.dx, b.dx)
        and abs(a.dy - b.dy) <= 1e-9 * max(a.dy, b.dy)
    )


def _cmd_solve(cfg: RunConfig, outdir: Path, mask_path: Path, verbosity: int) -> int:
    mask = import_mask_csv(mask_path)
    grid = cfg.build_grid()
    if not _grids_compatible(mask.grid, grid):
        print(
            f"error: mask grid {mask.grid.nx}x{mask.grid.ny} (dx={mask.grid.dx}, "
            f"dy={mask.grid.dy}) does not match the config grid "
            f"{grid.nx}x{grid.ny} (dx={grid.dx}, dy={grid.dy})",
            file=sys.stderr,
        )
        return 1
    mask = mask.on_grid(grid)
    result, metrics = _solve_mask(cfg, mask)
    export_field_csv(result.temperature, outdir / "solve_temperature.csv")
    export_heatmap(result.temperature, outdir / "solve_temperature.pgm", cfg.heatmap_range)
    write_report_json(_metrics_report(cfg, mask, result, metrics), outdir / "solve_metrics.json")
    print(
        f"solve: max {metrics.domain_max_c:.2f} C, mean {metrics.domain_mean_c:.2f} C, "
        f"fill {mask.fill_fraction:.3f}"
    )
    if not result.converged:
        print(
            f"warning: solve stopped at residual {result.final_residual:.3g}",
            file=sys.stderr,
        )
        return 2
    return 0


def _write_comparison(cfg: RunConfig, outdir: Path, baseline_mask, generative_mask) -> int:
    grid = cfg.build_grid()
    layout = cfg.build_layout(grid)
    comparison = compare_designs(
        baseline_mask, generative_mask, grid, layout, cfg.material,
        cfg.loop.tol, cfg.loop.max_iter,
        label_a="baseline", label_b="generative",
    )
    write_report_json(comparison, outdir / "comparison.json")
    print(
        f"compare: delta_max {comparison.delta_max_c:.2f} C, "
        f"delta_mean {comparison.delta_mean_c:.2f} C (baseline - generative)"
    )
    return 0 if comparison.solver_converged else 2


def _cmd_compare(cfg: RunConfig, outdir: Path, verbosity: int) -> int:
    grid = cfg.build_grid()
    layout = cfg.build_layout(grid)
    baseline_mask = generate_baseline_parallel(
        grid, layout, cfg.baseline_channel_width, cfg.baseline_pitch
    )
    report = run_generative_design(grid, layout, cfg.material, cfg.rd, cfg.loop, cfg.p_seed)
    code = _write_comparison(cfg, outdir, baseline_mask, report.mask)
    return code if report.solver_converged else max(code, 2)


def _cmd_pipeline(cfg: RunConfig, outdir: Path, verbosity: int) -> int:
    code_a, baseline_mask = _cmd_baseline(cfg, outdir, verbosity)
    code_b, report = _cmd_generate(cfg, outdir, verbosity)
    code_c = _write_comparison(cfg, outdir, baseline_mask, report.mask)
    return max(code_a, code_b, code_c)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="JSON config file")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--seed", type=int, default=None, help="RNG seed override")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v phase detail, -vv config echo")

    parser = argparse.ArgumentParser(
        prog="coldgen",
        description="Cold-plate channel layout synthesis and evaluation",
    )
    parser.add_argument("--version", action="version", version=f"coldgen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("baseline", parents=[common], help="straight parallel channels")
    sub.add_parser("generate", parents=[common], help="closed-loop generative design")
    solve = sub.add_parser("solve", parents=[common], help="evaluate an external mask")
    solve.add_argument("--mask", type=Path, required=True, help="mask CSV to evaluate")
    sub.add_parser("compare", parents=[common], help="baseline vs generative")
    sub.add_parser("pipeline", parents=[common], help="baseline + generate + compare")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    try:
        cfg = load_config(args.config) if args.config else default_config()
    except (ParseError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.seed is not None:
        if args.seed < 0 or args.seed >= 2**64:
            print(f"error: seed must fit in u64 (got {args.seed})", file=sys.stderr)
            return 1
        cfg = cfg.with_seed(args.seed)

    outdir = args.out
    outdir.mkdir(parents=True, exist_ok=True)
    _note(args.verbose, 2, f"COLDGEN_THREADS cap: {thread_cap() or 'auto'}")
    _note(args.verbose, 2, f"resolved seed: {cfg.loop.seed}")

    try:
        if args.command == "baseline":
            code, _ = _cmd_baseline(cfg, outdir, args.verbose)
        elif args.command == "generate":
            code, _ = _cmd_generate(cfg, outdir, args.verbose)
        elif args.command == "solve":
            code = _cmd_solve(cfg, outdir, args.mask, args.verbose)
        elif args.command == "compare":
            code = _cmd_compare(cfg, outdir, args.verbose)
        else:
            code = _cmd_pipeline(cfg, outdir, args.verbose)
    except RDInstabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, NoSinkError, ParseError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return code


def run() -> None:
    sys.exit(main())
