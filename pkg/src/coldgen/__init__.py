"""coldgen: cold-plate channel layouts from a coupled finite-difference
thermal solver and a constrained reaction-diffusion pattern generator."""

from .config import RunConfig, default_config, dump_config, load_config
from .design import (
    ComparisonReport,
    DesignReport,
    LoopConfig,
    RoundRecord,
    compare_designs,
    generate_baseline_parallel,
    run_generative_design,
    thermal_feedback_field,
)
from .errors import (
    DomainError,
    NoSinkError,
    ParseError,
    RDInstabilityError,
    ValidationError,
)
from .geometry import (
    BoardLayout,
    PinnedSet,
    RectRegion,
    build_heat_flux_map,
    build_layout,
    build_pinned_sets,
    default_layout,
)
from .grids import ChannelMask, Grid, ScalarField
from .rd import (
    RDParams,
    RDState,
    apply_pinning,
    check_stability,
    constrained_step,
    evolve,
    gray_scott_step,
    init_state,
    laplacian,
    threshold_mask,
)
from .reports import (
    export_field_csv,
    export_heatmap,
    export_mask_csv,
    import_field_csv,
    import_mask_csv,
    write_report_json,
)
from .thermal import (
    ChipMetrics,
    MaterialParams,
    SolveResult,
    ThermalMetrics,
    assemble_h_field,
    compute_metrics,
    energy_residual,
    jacobi_step,
    solve_steady,
)
from .version import __version__

__all__ = [
    "BoardLayout",
    "ChannelMask",
    "ChipMetrics",
    "ComparisonReport",
    "DesignReport",
    "DomainError",
    "Grid",
    "LoopConfig",
    "MaterialParams",
    "NoSinkError",
    "ParseError",
    "PinnedSet",
    "RDInstabilityError",
    "RDParams",
    "RDState",
    "RectRegion",
    "RoundRecord",
    "RunConfig",
    "ScalarField",
    "SolveResult",
    "ThermalMetrics",
    "ValidationError",
    "__version__",
    "apply_pinning",
    "assemble_h_field",
    "build_heat_flux_map",
    "build_layout",
    "build_pinned_sets",
    "check_stability",
    "compare_designs",
    "compute_metrics",
    "constrained_step",
    "default_config",
    "default_layout",
    "dump_config",
    "energy_residual",
    "evolve",
    "export_field_csv",
    "export_heatmap",
    "export_mask_csv",
    "generate_baseline_parallel",
    "gray_scott_step",
    "import_field_csv",
    "import_mask_csv",
    "init_state",
    "jacobi_step",
    "laplacian",
    "load_config",
    "run_generative_design",
    "solve_steady",
    "thermal_feedback_field",
    "threshold_mask",
    "write_report_json",
]
