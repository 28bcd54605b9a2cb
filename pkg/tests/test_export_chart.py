import xml.etree.ElementTree as ET
from pathlib import Path

import pandas as pd
import pytest
from openpyxl import load_workbook

from functions.chart_utils import FLOOR, ChartUtils
from functions.export_utils import COLORS, ExportUtils
from functions.models import OutputFormat
from functions.sweep_utils import COLUMNS, SweepUtils

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def frame() -> pd.DataFrame:
    cfg = SweepUtils.validate_config({
        "mod": "qpsk", "ebn0": "0:2:6", "sources": "theory,sim",
        "min_errors": 20, "max_symbols": 10_000, "batch_size": 2_000, "seed": 7,
    })
    return SweepUtils.build_rows(cfg)


class TestFormatting:

    def test_cell_formats(self) -> None:
        df = pd.DataFrame([{
            "modulation": "bpsk", "channel": "awgn", "source": "theory", "ebn0_db": 2.0, "esn0_db": 6.020599913,
            "ser": 0.0786496, "ber": 0.0786496, "ci95_ser": None, "ci95_ber": None,
            "symbols": None, "errors": None, "seed": None,
        }], columns=COLUMNS)
        row = ExportUtils.format_frame(df).iloc[0]
        assert row["ber"] == "7.86496e-02"
        assert row["ebn0_db"] == "2"
        assert row["esn0_db"] == "6.0206"
        assert row["ci95_ser"] == ""
        assert row["seed"] == ""

    def test_csv_header_and_line_endings(self, frame: pd.DataFrame) -> None:
        text = ExportUtils.to_csv_text(frame)
        assert text.splitlines()[0] == ",".join(COLUMNS)
        assert "\r" not in text
        assert text.endswith("\n")
        assert len(text.splitlines()) == len(frame) + 1

    def test_sim_counts_are_integers(self, frame: pd.DataFrame) -> None:
        sim = ExportUtils.format_frame(frame).query("source == 'sim'")
        assert sim["symbols"].str.fullmatch(r"\d+").all()
        assert (sim["seed"] == "7").all()

    def test_json_reads_back_like_csv(self, frame: pd.DataFrame, tmp_path: Path) -> None:
        csv_rows = ExportUtils.read_rows(ExportUtils.write(frame, tmp_path / "rows.csv", OutputFormat.CSV))
        json_rows = ExportUtils.read_rows(ExportUtils.write(frame, tmp_path / "rows.json", OutputFormat.JSON))
        pd.testing.assert_frame_equal(json_rows, csv_rows)

    def test_xlsx_fills_rows_by_source(self, frame: pd.DataFrame, tmp_path: Path) -> None:
        path = ExportUtils.write(frame, tmp_path / "rows.xlsx", OutputFormat.XLSX)
        ws = load_workbook(path).active
        assert [c.value for c in ws[1]] == COLUMNS
        assert ws.cell(row=1, column=1).font.bold
        source_col = COLUMNS.index("source") + 1
        for r in range(2, ws.max_row + 1):
            source = ws.cell(row=r, column=source_col).value
            assert ws.cell(row=r, column=1).fill.start_color.rgb.endswith(COLORS[source])


class TestWaterfall:

    def test_one_polyline_per_source(self, frame: pd.DataFrame) -> None:
        root = ET.fromstring(ChartUtils.waterfall_svg(frame, title="QPSK over AWGN").encode("utf-8"))
        lines = root.findall(f"{SVG_NS}polyline")
        assert sorted(line.get("class") for line in lines) == ["sim", "theory"]
        for line in lines:
            assert len(line.get("points").split()) == 4

    def test_zero_ber_sits_on_floor(self) -> None:
        df = pd.DataFrame({"source": ["sim", "sim"], "ebn0_db": [0.0, 10.0], "ber": [1e-2, 0.0]})
        root = ET.fromstring(ChartUtils.waterfall_svg(df).encode("utf-8"))
        [line] = root.findall(f"{SVG_NS}polyline")
        ys = [float(p.split(",")[1]) for p in line.get("points").split()]
        assert ys[1] > ys[0]
        labels = [t.text for t in root.findall(f"{SVG_NS}text")]
        assert "1e-8" in labels
        assert ChartUtils._log_ber(0.0) == ChartUtils._log_ber(FLOOR / 10)

    def test_title_is_escaped(self) -> None:
        df = pd.DataFrame({"source": ["theory"], "ebn0_db": [0.0], "ber": [0.1]})
        svg = ChartUtils.waterfall_svg(df, title="a<b")
        assert "a&lt;b" in svg
        ET.fromstring(svg.encode("utf-8"))

    def test_save_svg_and_png(self, frame: pd.DataFrame, tmp_path: Path) -> None:
        svg = Path(ChartUtils.save_plot(frame, tmp_path / "curve.svg"))
        png = Path(ChartUtils.save_plot(frame, tmp_path / "curve.png"))
        assert svg.read_text(encoding="utf-8").startswith("<?xml")
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
