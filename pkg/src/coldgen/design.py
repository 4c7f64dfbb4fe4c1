"""Closed-loop channel synthesis and the baseline it is judged against.

The loop alternates between the two physics modules: solve the plate
temperature for the current channel mask, turn the temperature excess
into a per-cell feed-rate field (hotter cells feed the channel species
harder), evolve the constrained pattern for a fixed number of steps,
repeat.  The baseline is a bank of straight channels at fixed width and
pitch running from the inlet edge to the outlet edge.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RDInstabilityError
from .geometry import BoardLayout, build_heat_flux_map, build_pinned_sets
from .grids import ChannelMask, Grid, ScalarField
from .rd import RDParams, check_stability, evolve, init_state, threshold_mask
from .thermal import (
    MaterialParams,
    ThermalMetrics,
    assemble_h_field,
    compute_metrics,
    solve_steady,
)


@dataclass(frozen=True)
class LoopConfig:
    """Schedule and knobs of the generative loop."""

    outer_rounds: int = 10
    rd_steps_per_round: int = 2000
    feedback_gain: float = 0.5
    feed_min: float = 0.01
    feed_max: float = 0.09
    tau: float = 0.3
    tol: float = 1e-4
    max_iter: int = 200_000
    seed: int = 42

    def __post_init__(self):
        if self.outer_rounds < 1 or self.rd_steps_per_round < 1:
            raise DomainError("outer_rounds and rd_steps_per_round must be >= 1")
        if self.feedback_gain < 0:
            raise DomainError("feedback_gain must be non-negative")
        if not (0 < self.feed_min <= self.feed_max):
            raise DomainError(
                f"need 0 < feed_min <= feed_max (got {self.feed_min}, {self.feed_max})"
            )
        if not (0 < self.tau < 1):
            raise DomainError(f"tau must lie in (0, 1) (got {self.tau})")
        if self.tol <= 0 or self.max_iter < 1:
            raise DomainError("tol must be positive and max_iter >= 1")


@dataclass(frozen=True)
class RoundRecord:
    """Thermal snapshot taken at the start of each loop round, before
    that round's pattern growth."""

    round_index: int
    mean_c: float
    max_c: float
    fill_fraction: float

    def to_dict(self) -> dict:
        return {
            "round": self.round_index,
            "mean_c": self.mean_c,
            "max_c": self.max_c,
            "fill_fraction": self.fill_fraction,
        }


@dataclass
class DesignReport:
    mask: ChannelMask
    temperature: ScalarField
    v_field: ScalarField
    metrics: ThermalMetrics
    mask_fill_fraction: float
    history: tuple[RoundRecord, ...]
    config_echo: dict
    solver_converged: bool

    def to_dict(self) -> dict:
        return {
            "metrics": self.metrics.to_dict(),
            "mask_fill_fraction": self.mask_fill_fraction,
            "history": [r.to_dict() for r in self.history],
            "config": self.config_echo,
            "solver_converged": self.solver_converged,
        }


@dataclass
class ComparisonReport:
    """Two designs solved under identical material parameters.  Deltas
    are (a minus b), so positive deltas mean design b runs cooler."""

    label_a: str
    label_b: str
    metrics_a: ThermalMetrics
    metrics_b: ThermalMetrics
    fill_a: float
    fill_b: float
    delta_max_c: float
    delta_mean_c: float
    config_echo: dict
    solver_converged: bool

    def to_dict(self) -> dict:
        return {
            "designs": {
                self.label_a: {
                    "metrics": self.metrics_a.to_dict(),
                    "mask_fill_fraction": self.fill_a,
                },
                self.label_b: {
                    "metrics": self.metrics_b.to_dict(),
                    "mask_fill_fraction": self.fill_b,
                },
            },
            "delta_max_c": self.delta_max_c,
            "delta_mean_c": self.delta_mean_c,
            "config": self.config_echo,
            "solver_converged": self.solver_converged,
        }


def generate_baseline_parallel(
    grid: Grid, layout: BoardLayout, channel_width: float, pitch: float
) -> ChannelMask:
    """Straight channels from the inlet edge to the outlet edge, evenly
    spaced across x.  A column is a channel iff its cell-center x falls
    in the first channel_width of each pitch period.  Port span cells
    are always channels."""
    if not (0 < channel_width < pitch):
        raise DomainError(
            f"need 0 < channel_width < pitch (got {channel_width}, {pitch})"
        )
    layout.validate_on(grid)
    on = np.array(
        [math.fmod(x, pitch) < channel_width for x in grid.x_centers()], dtype=bool
    )
    if not on.any() or on.all():
        raise DomainError(
            f"width {channel_width} / pitch {pitch} rasterizes degenerately on dx={grid.dx}"
        )
    bits = np.zeros(grid.shape, dtype=np.uint8)
    bits[:, on] = 1
    i0, i1 = layout.inlet_span
    bits[0, i0 : i1 + 1] = 1
    i0, i1 = layout.outlet_span
    bits[-1, i0 : i1 + 1] = 1
    return ChannelMask(grid, bits)


def thermal_feedback_field(
    T: ScalarField, params: RDParams, cfg: LoopConfig
) -> ScalarField:
    """Feed-rate field derived from the temperature: the excess above
    the coldest cell, normalized to [0, 1], scales the base feed rate by
    (1 + gain * excess) and is clamped to [feed_min, feed_max].  Hotter
    cells therefore feed channel growth harder."""
    if not T.is_finite():
        raise DomainError("temperature field must be finite")
    t = T.values
    t_min = t.min()
    t_max = t.max()
    if t_max > t_min:
        theta = (t - t_min) / (t_max - t_min)
    else:
        theta = np.zeros_like(t)
    feed = np.clip(params.feed * (1.0 + cfg.feedback_gain * theta), cfg.feed_min, cfg.feed_max)
    return ScalarField(T.grid, feed)


def run_generative_design(
    grid: Grid,
    layout: BoardLayout,
    material: MaterialParams,
    rd_params: RDParams,
    cfg: LoopConfig,
    p_seed: float = 0.002,
) -> DesignReport:
    """Full closed loop: seed the pattern, then for each round solve the
    plate for the current thresholded mask, derive the feed field from
    that temperature, and grow the pattern for rd_steps_per_round steps.
    Finishes with a final threshold and solve.

    Deterministic for a fixed config and seed.  Raises
    RDInstabilityError if the pattern fields blow up (dt beyond the
    check_stability bound); solver non-convergence is only flagged."""
    layout.validate_on(grid)
    q = build_heat_flux_map(grid, layout)
    pinned = build_pinned_sets(grid, layout)

    # The pattern evolves in lattice units; cells map one-to-one.
    rd_grid = grid.unit_spaced()
    state = init_state(rd_grid, pinned, cfg.seed, p_seed)

    history = []
    all_converged = True
    for round_index in range(cfg.outer_rounds):
        mask = threshold_mask(state.v, cfg.tau).on_grid(grid)
        result = solve_steady(q, assemble_h_field(mask, material), material, cfg.tol, cfg.max_iter)
        all_converged &= result.converged
        history.append(
            RoundRecord(
                round_index=round_index,
                mean_c=result.temperature.mean(),
                max_c=result.temperature.max(),
                fill_fraction=mask.fill_fraction,
            )
        )
        feed = thermal_feedback_field(result.temperature, rd_params, cfg)
        state = evolve(
            state, rd_params, pinned, cfg.rd_steps_per_round,
            feed_field=ScalarField(rd_grid, feed.values),
        )
        if not (state.u.is_finite() and state.v.is_finite()):
            raise RDInstabilityError(
                f"pattern fields went non-finite in round {round_index} "
                f"(dt={rd_params.dt}, stability bound={check_stability(rd_params, rd_grid):g})"
            )

    final_mask = threshold_mask(state.v, cfg.tau).on_grid(grid)
    final = solve_steady(q, assemble_h_field(final_mask, material), material, cfg.tol, cfg.max_iter)
    all_converged &= final.converged

    return DesignReport(
        mask=final_mask,
        temperature=final.temperature,
        v_field=ScalarField(grid, state.v.values),
        metrics=compute_metrics(final.temperature, layout),
        mask_fill_fraction=final_mask.fill_fraction,
        history=tuple(history),
        config_echo=_loop_echo(grid, layout, material, rd_params, cfg, p_seed),
        solver_converged=all_converged,
    )


def compare_designs(
    mask_a: ChannelMask,
    mask_b: ChannelMask,
    grid: Grid,
    layout: BoardLayout,
    material: MaterialParams,
    tol: float = 1e-4,
    max_iter: int = 200_000,
    label_a: str = "design_a",
    label_b: str = "design_b",
) -> ComparisonReport:
    """Solve both masks under the same heat map and material parameters
    and report the metric deltas (a minus b)."""
    if mask_a.grid != grid or mask_b.grid != grid:
        raise DomainError("masks must live on the comparison grid")
    q = build_heat_flux_map(grid, layout)
    res_a = solve_steady(q, assemble_h_field(mask_a, material), material, tol, max_iter)
    res_b = solve_steady(q, assemble_h_field(mask_b, material), material, tol, max_iter)
    metrics_a = compute_metrics(res_a.temperature, layout)
    metrics_b = compute_metrics(res_b.temperature, layout)
    return ComparisonReport(
        label_a=label_a,
        label_b=label_b,
        metrics_a=metrics_a,
        metrics_b=metrics_b,
        fill_a=mask_a.fill_fraction,
        fill_b=mask_b.fill_fraction,
        delta_max_c=metrics_a.domain_max_c - metrics_b.domain_max_c,
        delta_mean_c=metrics_a.domain_mean_c - metrics_b.domain_mean_c,
        config_echo={
            "material": _material_echo(material),
            "solver": {"tol": tol, "max_iter": max_iter},
        },
        solver_converged=res_a.converged and res_b.converged,
    )


def _material_echo(material: MaterialParams) -> dict:
    return {
        "conductivity": material.conductivity,
        "thickness": material.thickness,
        "t_coolant": material.t_coolant,
        "h_channel": material.h_channel,
        "h_base": material.h_base,
    }


def _loop_echo(
    grid: Grid,
    layout: BoardLayout,
    material: MaterialParams,
    rd_params: RDParams,
    cfg: LoopConfig,
    p_seed: float,
) -> dict:
    return {
        "grid": {"nx": grid.nx, "ny": grid.ny, "dx": grid.dx, "dy": grid.dy},
        "chips": [
            {"label": rect.label, "x0": rect.x0, "y0": rect.y0,
             "x1": rect.x1, "y1": rect.y1, "tdp": tdp}
            for rect, tdp in layout.chips
        ],
        "ports": {
            "inlet_span": list(layout.inlet_span),
            "outlet_span": list(layout.outlet_span),
            "port_width": layout.port_width,
        },
        "material": _material_echo(material),
        "rd": {
            "diff_u": rd_params.diff_u,
            "diff_v": rd_params.diff_v,
            "feed": rd_params.feed,
            "kill": rd_params.kill,
            "dt": rd_params.dt,
            "p_seed": p_seed,
        },
        "loop": {
            "outer_rounds": cfg.outer_rounds,
            "rd_steps_per_round": cfg.rd_steps_per_round,
            "feedback_gain": cfg.feedback_gain,
            "feed_min": cfg.feed_min,
            "feed_max": cfg.feed_max,
            "tau": cfg.tau,
            "tol": cfg.tol,
            "max_iter": cfg.max_iter,
            "seed": cfg.seed,
        },
    }
