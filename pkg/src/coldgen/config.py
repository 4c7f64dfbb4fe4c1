"""JSON run configuration: parsing, defaulting, validation.

Every field is optional; omitted fields take the documented defaults
(see README for the full schema).  Unknown keys are rejected by name,
and constraint violations raise ValidationError naming the offending
field, e.g. "grid.dx: must be > 0".
"""

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from . import geometry
from .design import LoopConfig
from .errors import DomainError, ParseError, ValidationError
from .geometry import BoardLayout, RectRegion, build_layout
from .grids import Grid
from .rd import RDParams
from .thermal import MaterialParams

_DEFAULT_CHIPS = [
    {"label": label, "x0": x0, "y0": y0, "x1": x1, "y1": y1, "tdp": tdp}
    for label, x0, y0, x1, y1, tdp in geometry.DEFAULT_CHIPS
]

DEFAULTS = {
    "grid": {"dx": geometry.DEFAULT_RESOLUTION, "dy": geometry.DEFAULT_RESOLUTION},
    "board": {"width": geometry.DEFAULT_BOARD_WIDTH, "height": geometry.DEFAULT_BOARD_HEIGHT},
    "chips": _DEFAULT_CHIPS,
    "ports": {"width": geometry.DEFAULT_PORT_WIDTH, "inlet_center": None, "outlet_center": None},
    "material": {
        "conductivity": 148.0,
        "thickness": 0.001,
        "t_coolant": 25.0,
        "h_channel": 15000.0,
        "h_base": 10.0,
    },
    "rd": {
        "diff_u": 0.16,
        "diff_v": 0.08,
        "feed": 0.055,
        "kill": 0.062,
        "dt": 0.5,
        "p_seed": 0.002,
    },
    "loop": {
        "outer_rounds": 10,
        "rd_steps_per_round": 2000,
        "feedback_gain": 0.5,
        "feed_min": 0.01,
        "feed_max": 0.09,
        "tau": 0.3,
        "tol": 1e-4,
        "max_iter": 200_000,
        "seed": 42,
    },
    "baseline": {"channel_width": 0.002, "pitch": 0.004},
    "output": {"heatmap_range": None},
}


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration; build_grid()/build_layout() hand out the
    geometry objects the pipeline consumes."""

    grid_dx: float
    grid_dy: float
    board_width: float
    board_height: float
    chips: tuple[tuple[RectRegion, float], ...]
    port_width: float
    inlet_center: float
    outlet_center: float
    material: MaterialParams
    rd: RDParams
    p_seed: float
    loop: LoopConfig
    baseline_channel_width: float
    baseline_pitch: float
    heatmap_range: tuple[float, float] | None

    def build_grid(self) -> Grid:
        return Grid(
            nx=round(self.board_width / self.grid_dx),
            ny=round(self.board_height / self.grid_dy),
            dx=self.grid_dx,
            dy=self.grid_dy,
        )

    def build_layout(self, grid: Grid | None = None) -> BoardLayout:
        if grid is None:
            grid = self.build_grid()
        return build_layout(
            grid, self.chips, self.port_width, self.inlet_center, self.outlet_center
        )

    def with_seed(self, seed: int) -> "RunConfig":
        return dataclasses.replace(self, loop=dataclasses.replace(self.loop, seed=seed))

    def to_dict(self) -> dict:
        """Fully-resolved canonical dict; loading its JSON dump gives an
        equal config."""
        return {
            "grid": {"dx": self.grid_dx, "dy": self.grid_dy},
            "board": {"width": self.board_width, "height": self.board_height},
            "chips": [
                {"label": rect.label, "x0": rect.x0, "y0": rect.y0,
                 "x1": rect.x1, "y1": rect.y1, "tdp": tdp}
                for rect, tdp in self.chips
            ],
            "ports": {
                "width": self.port_width,
                "inlet_center": self.inlet_center,
                "outlet_center": self.outlet_center,
            },
            "material": {
                "conductivity": self.material.conductivity,
                "thickness": self.material.thickness,
                "t_coolant": self.material.t_coolant,
                "h_channel": self.material.h_channel,
                "h_base": self.material.h_base,
            },
            "rd": {
                "diff_u": self.rd.diff_u,
                "diff_v": self.rd.diff_v,
                "feed": self.rd.feed,
                "kill": self.rd.kill,
                "dt": self.rd.dt,
                "p_seed": self.p_seed,
            },
            "loop": {
                "outer_rounds": self.loop.outer_rounds,
                "rd_steps_per_round": self.loop.rd_steps_per_round,
                "feedback_gain": self.loop.feedback_gain,
                "feed_min": self.loop.feed_min,
                "feed_max": self.loop.feed_max,
                "tau": self.loop.tau,
                "tol": self.loop.tol,
                "max_iter": self.loop.max_iter,
                "seed": self.loop.seed,
            },
            "baseline": {
                "channel_width": self.baseline_channel_width,
                "pitch": self.baseline_pitch,
            },
            "output": {
                "heatmap_range": list(self.heatmap_range) if self.heatmap_range else None,
            },
        }


def _merge_section(name: str, user: dict, defaults: dict) -> dict:
    merged = dict(defaults)
    for key, value in user.items():
        if key not in defaults:
            raise ValidationError(f"{name}.{key}", "unknown key")
        merged[key] = value
    return merged


def _number(value, path: str, *, positive=False, nonneg=False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(path, f"must be a number (got {value!r})")
    if positive and value <= 0:
        raise ValidationError(path, f"must be > 0 (got {value})")
    if nonneg and value < 0:
        raise ValidationError(path, f"must be >= 0 (got {value})")
    return float(value)


def _integer(value, path: str, *, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(path, f"must be an integer (got {value!r})")
    if value < minimum:
        raise ValidationError(path, f"must be >= {minimum} (got {value})")
    return value


def config_from_dict(data: dict) -> RunConfig:
    """Merge user values over the defaults and validate everything."""
    if not isinstance(data, dict):
        raise ValidationError("<root>", "config must be a JSON object")
    for key in data:
        if key not in DEFAULTS:
            raise ValidationError(key, "unknown key")

    sections = {}
    for name, defaults in DEFAULTS.items():
        if name == "chips":
            continue
        user = data.get(name, {})
        if not isinstance(user, dict):
            raise ValidationError(name, "must be an object")
        sections[name] = _merge_section(name, user, defaults)

    grid_dx = _number(sections["grid"]["dx"], "grid.dx", positive=True)
    grid_dy = _number(sections["grid"]["dy"], "grid.dy", positive=True)
    board_w = _number(sections["board"]["width"], "board.width", positive=True)
    board_h = _number(sections["board"]["height"], "board.height", positive=True)

    chips_raw = data.get("chips", DEFAULTS["chips"])
    if not isinstance(chips_raw, list):
        raise ValidationError("chips", "must be a list of chip objects")
    chips = []
    for k, entry in enumerate(chips_raw):
        path = f"chips[{k}]"
        if not isinstance(entry, dict):
            raise ValidationError(path, "must be an object")
        for key in entry:
            if key not in ("label", "x0", "y0", "x1", "y1", "tdp"):
                raise ValidationError(f"{path}.{key}", "unknown key")
        label = entry.get("label", f"chip_{k}")
        if not isinstance(label, str):
            raise ValidationError(f"{path}.label", "must be a string")
        coords = {c: _number(entry.get(c, 0.0), f"{path}.{c}", nonneg=True)
                  for c in ("x0", "y0", "x1", "y1")}
        tdp = _number(entry.get("tdp", 0.0), f"{path}.tdp", positive=True)
        try:
            rect = RectRegion(coords["x0"], coords["y0"], coords["x1"], coords["y1"], label)
        except DomainError as exc:
            raise ValidationError(path, str(exc)) from exc
        chips.append((rect, tdp))

    port_width = _number(sections["ports"]["width"], "ports.width", positive=True)
    inlet_center = sections["ports"]["inlet_center"]
    outlet_center = sections["ports"]["outlet_center"]
    inlet_center = board_w / 2 if inlet_center is None else _number(
        inlet_center, "ports.inlet_center", nonneg=True)
    outlet_center = board_w / 2 if outlet_center is None else _number(
        outlet_center, "ports.outlet_center", nonneg=True)

    m = sections["material"]
    try:
        material = MaterialParams(
            conductivity=_number(m["conductivity"], "material.conductivity", positive=True),
            thickness=_number(m["thickness"], "material.thickness", positive=True),
            t_coolant=_number(m["t_coolant"], "material.t_coolant"),
            h_channel=_number(m["h_channel"], "material.h_channel", positive=True),
            h_base=_number(m["h_base"], "material.h_base", nonneg=True),
        )
    except DomainError as exc:
        raise ValidationError("material", str(exc)) from exc

    r = sections["rd"]
    p_seed = _number(r["p_seed"], "rd.p_seed", nonneg=True)
    if p_seed >= 1.0:
        raise ValidationError("rd.p_seed", f"must be < 1 (got {p_seed})")
    try:
        rd = RDParams(
            diff_u=_number(r["diff_u"], "rd.diff_u", positive=True),
            diff_v=_number(r["diff_v"], "rd.diff_v", positive=True),
            feed=_number(r["feed"], "rd.feed", positive=True),
            kill=_number(r["kill"], "rd.kill", positive=True),
            dt=_number(r["dt"], "rd.dt", positive=True),
        )
    except DomainError as exc:
        raise ValidationError("rd", str(exc)) from exc

    lo = sections["loop"]
    tau = _number(lo["tau"], "loop.tau", positive=True)
    if tau >= 1.0:
        raise ValidationError("loop.tau", f"must be < 1 (got {tau})")
    try:
        loop = LoopConfig(
            outer_rounds=_integer(lo["outer_rounds"], "loop.outer_rounds", minimum=1),
            rd_steps_per_round=_integer(
                lo["rd_steps_per_round"], "loop.rd_steps_per_round", minimum=1),
            feedback_gain=_number(lo["feedback_gain"], "loop.feedback_gain", nonneg=True),
            feed_min=_number(lo["feed_min"], "loop.feed_min", positive=True),
            feed_max=_number(lo["feed_max"], "loop.feed_max", positive=True),
            tau=tau,
            tol=_number(lo["tol"], "loop.tol", positive=True),
            max_iter=_integer(lo["max_iter"], "loop.max_iter", minimum=1),
            seed=_integer(lo["seed"], "loop.seed", minimum=0),
        )
    except DomainError as exc:
        raise ValidationError("loop", str(exc)) from exc

    b = sections["baseline"]
    channel_width = _number(b["channel_width"], "baseline.channel_width", positive=True)
    pitch = _number(b["pitch"], "baseline.pitch", positive=True)
    if channel_width >= pitch:
        raise ValidationError(
            "baseline.channel_width", f"must be < pitch (got {channel_width} >= {pitch})")

    hm = sections["output"]["heatmap_range"]
    heatmap_range = None
    if hm is not None:
        if (not isinstance(hm, list)) or len(hm) != 2:
            raise ValidationError("output.heatmap_range", "must be null or [lo, hi]")
        lo_v = _number(hm[0], "output.heatmap_range[0]")
        hi_v = _number(hm[1], "output.heatmap_range[1]")
        if not lo_v < hi_v:
            raise ValidationError("output.heatmap_range", f"needs lo < hi (got {hm})")
        heatmap_range = (lo_v, hi_v)

    cfg = RunConfig(
        grid_dx=grid_dx,
        grid_dy=grid_dy,
        board_width=board_w,
        board_height=board_h,
        chips=tuple(chips),
        port_width=port_width,
        inlet_center=inlet_center,
        outlet_center=outlet_center,
        material=material,
        rd=rd,
        p_seed=p_seed,
        loop=loop,
        baseline_channel_width=channel_width,
        baseline_pitch=pitch,
        heatmap_range=heatmap_range,
    )

    # Cross-field checks: the grid must exist and the layout must fit it.
    try:
        grid = cfg.build_grid()
    except DomainError as exc:
        raise ValidationError("grid/board", str(exc)) from exc
    try:
        cfg.build_layout(grid)
    except DomainError as exc:
        raise ValidationError("chips/ports", str(exc)) from exc
    return cfg


def default_config() -> RunConfig:
    return config_from_dict({})


def load_config(path: str | Path) -> RunConfig:
    """Read, parse, default and validate a JSON config file."""
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8 ({exc})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from exc
    return config_from_dict(data)


def dump_config(cfg: RunConfig, path: str | Path | None = None) -> str:
    """Canonical JSON text of a config; optionally written to path."""
    text = json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
