"""Serialization: CSV field format and round trips, PGM heatmaps,
deterministic JSON reports."""

import json

import numpy as np
import pytest

from conftest import small_board
from coldgen import (
    ChannelMask,
    Grid,
    MaterialParams,
    ScalarField,
    compare_designs,
    compute_metrics,
    export_field_csv,
    export_heatmap,
    export_mask_csv,
    generate_baseline_parallel,
    import_field_csv,
    import_mask_csv,
    write_report_json,
)
from coldgen.errors import ParseError


class TestFieldCsv:
    def test_exact_layout_smallest_grid(self, tmp_path):
        # Header carries the grid descriptor; each data line is one j-row
        # with i ascending.  (3x3 is the smallest legal grid.)
        grid = Grid(3, 3, 0.001, 0.001)
        values = np.arange(1.0, 10.0).reshape(3, 3)
        path = tmp_path / "field.csv"
        export_field_csv(ScalarField(grid, values), path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "3,3,0.001,0.001"
        assert lines[1] == "1,2,3"
        assert lines[2] == "4,5,6"
        assert lines[3] == "7,8,9"
        assert len(lines) == 4

    def test_round_trip_random_fields(self, tmp_path):
        rng = np.random.default_rng(404)
        path = tmp_path / "rt.csv"
        for case in range(120):
            nx = int(rng.integers(3, 12))
            ny = int(rng.integers(3, 12))
            grid = Grid(nx, ny, float(rng.uniform(1e-4, 2.0)), float(rng.uniform(1e-4, 2.0)))
            magnitude = 10.0 ** rng.integers(-6, 7)
            values = rng.uniform(-magnitude, magnitude, grid.shape)
            field = ScalarField(grid, values)
            export_field_csv(field, path)
            back = import_field_csv(path)
            assert back.grid.nx == nx and back.grid.ny == ny
            assert np.allclose(back.grid.dx, grid.dx, rtol=1e-9)
            scale = np.maximum(np.abs(values), 1e-300)
            assert (np.abs(back.values - values) / scale <= 1e-9).all()

    def test_import_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("3,3,0.001\n1,2,3\n", encoding="utf-8")
        with pytest.raises(ParseError):
            import_field_csv(path)

    def test_import_rejects_ragged_rows(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("3,3,0.001,0.001\n1,2,3\n4,5\n7,8,9\n", encoding="utf-8")
        with pytest.raises(ParseError):
            import_field_csv(path)

    def test_import_rejects_wrong_row_count(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("3,3,0.001,0.001\n1,2,3\n4,5,6\n", encoding="utf-8")
        with pytest.raises(ParseError):
            import_field_csv(path)


class TestMaskCsv:
    def test_round_trip_exact(self, tmp_path):
        grid = Grid(9, 7, 0.001, 0.001)
        rng = np.random.default_rng(7)
        bits = (rng.random(grid.shape) < 0.4).astype(np.uint8)
        path = tmp_path / "mask.csv"
        export_mask_csv(ChannelMask(grid, bits), path)
        back = import_mask_csv(path)
        assert (back.bits == bits).all()

    def test_values_are_zero_or_one_text(self, tmp_path):
        grid = Grid(3, 3, 0.001, 0.001)
        bits = np.array([[1, 0, 1], [0, 1, 0], [1, 1, 0]], dtype=np.uint8)
        path = tmp_path / "mask.csv"
        export_mask_csv(ChannelMask(grid, bits), path)
        body = path.read_text(encoding="utf-8").splitlines()[1:]
        assert body == ["1,0,1", "0,1,0", "1,1,0"]

    def test_import_rejects_non_binary(self, tmp_path):
        path = tmp_path / "notmask.csv"
        path.write_text("3,3,0.001,0.001\n1,0,1\n0,0.5,0\n1,1,0\n", encoding="utf-8")
        with pytest.raises(ParseError):
            import_mask_csv(path)


def _read_pgm(path):
    data = path.read_bytes()
    magic, dims, maxval, rest = data.split(b"\n", 3)
    assert magic == b"P5"
    w, h = (int(tok) for tok in dims.split())
    assert maxval == b"255"
    pixels = np.frombuffer(rest, dtype=np.uint8)
    assert pixels.size == w * h
    return pixels.reshape(h, w)


class TestHeatmap:
    def test_endpoint_values_map_to_0_and_255(self, tmp_path):
        grid = Grid(4, 3, 0.001, 0.001)
        values = np.full(grid.shape, 10.0)
        values[0, 0] = 90.0
        path = tmp_path / "map.pgm"
        export_heatmap(ScalarField(grid, values), path)
        pixels = _read_pgm(path)
        assert pixels[0, 0] == 255
        assert (np.unique(pixels) == [0, 255]).all()

    def test_uniform_field_auto_range_is_black(self, tmp_path):
        grid = Grid(5, 5, 0.001, 0.001)
        path = tmp_path / "flat.pgm"
        export_heatmap(ScalarField.full(grid, 42.0), path)
        assert (_read_pgm(path) == 0).all()

    def test_midpoint_rounds_half_up(self, tmp_path):
        # (v - lo)/(hi - lo) = 0.5 scales to 127.5; round-half-up -> 128.
        grid = Grid(3, 3, 0.001, 0.001)
        values = np.zeros(grid.shape)
        values[1, 1] = 1.0
        values[0, 0] = 2.0
        path = tmp_path / "mid.pgm"
        export_heatmap(ScalarField(grid, values), path)
        assert _read_pgm(path)[1, 1] == 128

    def test_banker_rounding_not_used(self, tmp_path):
        # 126.5/255 of the range must round to 127, not to even (126).
        grid = Grid(3, 3, 0.001, 0.001)
        values = np.zeros(grid.shape)
        values[2, 2] = 255.0
        values[1, 1] = 126.5
        path = tmp_path / "half.pgm"
        export_heatmap(ScalarField(grid, values), path)
        assert _read_pgm(path)[1, 1] == 127

    def test_explicit_range_clamps(self, tmp_path):
        grid = Grid(3, 3, 0.001, 0.001)
        values = np.array([[-50.0, 0.0, 25.0], [50.0, 75.0, 100.0], [150.0, 10.0, 90.0]])
        path = tmp_path / "clamp.pgm"
        export_heatmap(ScalarField(grid, values), path, value_range=(0.0, 100.0))
        pixels = _read_pgm(path)
        assert pixels[0, 0] == 0     # below lo
        assert pixels[2, 0] == 255   # above hi
        assert pixels[1, 0] == 128   # exact midpoint

    def test_header_bytes(self, tmp_path):
        grid = Grid(5, 3, 0.001, 0.001)
        path = tmp_path / "hdr.pgm"
        export_heatmap(ScalarField.zeros(grid), path)
        assert path.read_bytes().startswith(b"P5\n5 3\n255\n")

    def test_quantization_monotone(self, tmp_path):
        rng = np.random.default_rng(11)
        grid = Grid(6, 6, 0.001, 0.001)
        pa, pb = tmp_path / "a.pgm", tmp_path / "b.pgm"
        for _ in range(100):
            a = rng.uniform(0, 100, grid.shape)
            b = a + rng.uniform(0, 20, grid.shape)
            export_heatmap(ScalarField(grid, a), pa, value_range=(0.0, 120.0))
            export_heatmap(ScalarField(grid, b), pb, value_range=(0.0, 120.0))
            assert (_read_pgm(pa) <= _read_pgm(pb)).all()


class TestReportJson:
    def test_uniform_temperature_metric_values(self, tmp_path):
        grid, layout = small_board()
        metrics = compute_metrics(ScalarField.full(grid, 25.0), layout)
        path = tmp_path / "metrics.json"
        write_report_json({"metrics": metrics.to_dict()}, path)
        payload = json.loads(path.read_text(encoding="utf-8"))
        assert payload["metrics"]["domain"]["mean_c"] == 25.0
        assert payload["metrics"]["domain"]["max_c"] == 25.0
        assert payload["tool_version"]

    def test_serialization_deterministic(self, tmp_path):
        grid, layout = small_board()
        mask = generate_baseline_parallel(grid, layout, 0.002, 0.004)
        report = compare_designs(mask, mask.copy(), grid, layout, MaterialParams(), tol=1e-5)
        p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
        write_report_json(report, p1)
        write_report_json(report, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_identical_masks_zero_deltas_in_file(self, tmp_path):
        grid, layout = small_board()
        mask = generate_baseline_parallel(grid, layout, 0.002, 0.004)
        report = compare_designs(mask, mask.copy(), grid, layout, MaterialParams(), tol=1e-5)
        path = tmp_path / "cmp.json"
        write_report_json(report, path)
        payload = json.loads(path.read_text(encoding="utf-8"))
        assert payload["delta_max_c"] == 0.0
        assert payload["delta_mean_c"] == 0.0
