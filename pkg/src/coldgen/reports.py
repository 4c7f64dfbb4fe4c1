"""Field serialization (CSV), grayscale heatmap export (binary PGM) and
deterministic JSON reports.

CSV field format: first line carries the grid descriptor
``nx,ny,dx,dy``; then ny data lines, line j holding the nx values of
row j with i ascending.  Values are printed with 12 significant digits,
so a round trip preserves them to better than 1e-9 relative.

PGM: binary P5, maxval 255.  Pixels map linearly from the value range
(lo -> 0, hi -> 255, round half up, clamped); a uniform field under
auto-range maps to all zeros.  Row j = 0 is the top image row.
"""

import json
from pathlib import Path

import numpy as np

from .grids import ChannelMask, Grid, ScalarField
from .errors import ParseError
from .version import __version__

_FMT = "%.12g"


def export_field_csv(field: ScalarField, path: str | Path) -> None:
    grid = field.grid
    lines = [
        "%d,%d,%s,%s" % (grid.nx, grid.ny, _FMT % grid.dx, _FMT % grid.dy)
    ]
    for j in range(grid.ny):
        lines.append(",".join(_FMT % v for v in field.values[j]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def import_field_csv(path: str | Path) -> ScalarField:
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line]
    if not lines:
        raise ParseError(f"{path}: empty field file")
    head = lines[0].split(",")
    if len(head) != 4:
        raise ParseError(f"{path}: header must be nx,ny,dx,dy (got {lines[0]!r})")
    try:
        nx, ny = int(head[0]), int(head[1])
        dx, dy = float(head[2]), float(head[3])
    except ValueError as exc:
        raise ParseError(f"{path}: bad header {lines[0]!r}") from exc
    grid = Grid(nx, ny, dx, dy)
    if len(lines) - 1 != ny:
        raise ParseError(f"{path}: expected {ny} data rows, found {len(lines) - 1}")
    try:
        values = np.array(
            [[float(tok) for tok in line.split(",")] for line in lines[1:]]
        )
    except ValueError as exc:
        raise ParseError(f"{path}: non-numeric cell value") from exc
    if values.shape != (ny, nx):
        raise ParseError(f"{path}: ragged rows (shape {values.shape}, expected {(ny, nx)})")
    return ScalarField(grid, values)


def export_mask_csv(mask: ChannelMask, path: str | Path) -> None:
    """Masks reuse the field CSV with values in {0, 1}."""
    export_field_csv(ScalarField(mask.grid, mask.bits.astype(np.float64)), path)


def import_mask_csv(path: str | Path) -> ChannelMask:
    field = import_field_csv(path)
    bits = field.values
    if not np.isin(bits, (0.0, 1.0)).all():
        raise ParseError(f"{path}: mask values must be 0 or 1")
    return ChannelMask(field.grid, bits.astype(np.uint8))


def export_heatmap(
    field: ScalarField,
    path: str | Path,
    value_range: tuple[float, float] | None = None,
) -> None:
    if value_range is None:
        lo, hi = field.min(), field.max()
    else:
        lo, hi = value_range
    values = field.values
    if hi > lo:
        scaled = (values - lo) * 255.0 / (hi - lo)
    else:
        scaled = np.zeros_like(values)
    pixels = np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)
    header = b"P5\n%d %d\n255\n" % (field.grid.nx, field.grid.ny)
    Path(path).write_bytes(header + pixels.tobytes())


def write_report_json(report, path: str | Path) -> None:
    """Serialize a report (an object exposing to_dict(), or a plain
    mapping).  Keys are sorted, so identical reports produce
    byte-identical files."""
    payload = dict(report.to_dict()) if hasattr(report, "to_dict") else dict(report)
    payload["tool_version"] = __version__
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")
