import logging
from pathlib import Path
from typing import Union

import pandas as pd
from openpyxl import load_workbook
from openpyxl.styles import Font, PatternFill

from functions.errors import DomainError
from functions.models import OutputFormat

logger = logging.getLogger(__name__)

PROBABILITY_COLUMNS = ["ser", "ber", "ci95_ser", "ci95_ber"]
DB_COLUMNS = ["ebn0_db", "esn0_db"]
COUNT_COLUMNS = ["symbols", "errors", "seed"]

# row fill per source in the xlsx export
COLORS = {
    "theory": "C6EFCE",  # light green
    "oracle": "DDEBF7",  # light blue
    "sim":    "FFEB9C",  # light yellow
}


def _probability(value) -> str:
    if value is None or pd.isna(value):
        return ""
    return "{:.5e}".format(float(value))


def _decibel(value) -> str:
    if value is None or pd.isna(value):
        return ""
    return "%.6g" % float(value)


def _count(value) -> str:
    if value is None or pd.isna(value):
        return ""
    return str(int(value))


class ExportUtils:

    @staticmethod
    def format_frame(df: pd.DataFrame) -> pd.DataFrame:
        """
        Render every cell as text: probabilities in scientific notation with six
        significant digits, dB values with %.6g, missing values as empty strings.
        """
        out = df.copy()
        for col in PROBABILITY_COLUMNS:
            if col in out:
                out[col] = out[col].map(_probability)
        for col in DB_COLUMNS:
            if col in out:
                out[col] = out[col].map(_decibel)
        for col in COUNT_COLUMNS:
            if col in out:
                out[col] = out[col].map(_count)
        return out.astype(str)

    @staticmethod
    def to_csv_text(df: pd.DataFrame) -> str:
        return ExportUtils.format_frame(df).to_csv(index=False, lineterminator="\n")

    @staticmethod
    def write_csv(df: pd.DataFrame, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(ExportUtils.to_csv_text(df), encoding="utf-8", newline="")
        return path

    @staticmethod
    def to_json_text(df: pd.DataFrame) -> str:
        """Records carrying the same formatted strings as the CSV, so both read back identically."""
        return ExportUtils.format_frame(df).to_json(orient="records", indent=2) + "\n"

    @staticmethod
    def write_json(df: pd.DataFrame, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(ExportUtils.to_json_text(df), encoding="utf-8", newline="")
        return path

    @staticmethod
    def write_xlsx(df: pd.DataFrame, path: Union[str, Path]) -> Path:
        path = Path(path)
        ExportUtils.format_frame(df).to_excel(path, index=False)
        wb = load_workbook(path)
        ws = wb.active

        for cell in ws[1]:
            cell.font = Font(bold=True)

        source_col = list(df.columns).index("source")
        for r_idx in range(2, ws.max_row + 1):
            source = ws.cell(row=r_idx, column=source_col + 1).value
            color = COLORS.get(source)
            if not color:
                continue
            for c_idx in range(1, ws.max_column + 1):
                ws.cell(row=r_idx, column=c_idx).fill = PatternFill(start_color=color, end_color=color,
                                                                    fill_type="solid")
        wb.save(path)
        return path

    @staticmethod
    def write(df: pd.DataFrame, path: Union[str, Path], fmt: OutputFormat) -> Path:
        fmt = OutputFormat(fmt)
        logger.info("writing %d rows as %s to %s", len(df), fmt.value, path)
        if fmt == OutputFormat.CSV:
            return ExportUtils.write_csv(df, path)
        if fmt == OutputFormat.JSON:
            return ExportUtils.write_json(df, path)
        if fmt == OutputFormat.XLSX:
            return ExportUtils.write_xlsx(df, path)
        raise DomainError(f"unsupported output format {fmt!r}")

    @staticmethod
    def read_rows(path: Union[str, Path]) -> pd.DataFrame:
        """Read a CSV or JSON export back as strings, empty fields as ''."""
        path = Path(path)
        if path.suffix.lower() == ".json":
            return pd.read_json(path, orient="records", dtype=False).fillna("").astype(str)
        return pd.read_csv(path, dtype=str, keep_default_na=False)
