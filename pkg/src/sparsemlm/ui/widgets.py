"""
UI helper functions for the run viewer.
"""

import json
from pathlib import Path

import pandas as pd
from textual.widgets import DataTable

from ..constants import COEF_AXIS_LABEL, TABLE_MAX_ROWS
from ..services.matrix_io import detect_delimiter, load_matrix


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


class UIHelper:
    """Helper class for UI-related operations."""

    @staticmethod
    def load_frame(path: Path) -> pd.DataFrame:
        """
        Read any output file as a DataFrame for display.

        Headerless numeric files go through load_matrix; files whose first cell
        is not a number are read with a header line, and coefficient files
        (corner cell COEF_AXIS_LABEL) with their row labels as the index.

        Args:
            path: A .csv, .tsv or .json file

        Returns:
            DataFrame with the file's labels where it has any
        """
        if path.suffix.lower() == ".json":
            payload = json.loads(path.read_text(encoding="utf-8"))
            return pd.DataFrame(payload["data"], columns=payload.get("columns"), index=payload.get("index"))

        with path.open(encoding="utf-8") as handle:
            first_line = handle.readline().rstrip("\r\n")
        delimiter = detect_delimiter(first_line)
        first_cell = first_line.split(delimiter)[0].strip()
        if _is_number(first_cell):
            return pd.DataFrame(load_matrix(path).values)
        index_col = 0 if first_cell == COEF_AXIS_LABEL else None
        return pd.read_csv(path, sep=delimiter, index_col=index_col, float_precision="round_trip")

    @staticmethod
    def format_cell(value) -> str:
        if isinstance(value, float):
            return f"{value:.6g}"
        return str(value)

    @staticmethod
    def fill_table(table: DataTable, frame: pd.DataFrame, max_rows: int = TABLE_MAX_ROWS) -> int:
        """
        Replace the table contents with the first max_rows rows of frame.

        Returns:
            Number of rows shown
        """
        table.clear(columns=True)
        index_name = frame.index.name or ""
        table.add_columns(index_name, *[str(c) for c in frame.columns])
        shown = frame.head(max_rows)
        for label, row in zip(shown.index, shown.itertuples(index=False)):
            table.add_row(str(label), *[UIHelper.format_cell(v) for v in row])
        return len(shown)

    @staticmethod
    def describe(path: Path, frame: pd.DataFrame, shown: int) -> str:
        """
        Status line for a loaded file.

        Returns:
            e.g. "coefficients.csv: 5 x 4" or "... (first 500 rows)"
        """
        status = f"{path.name}: {frame.shape[0]} x {frame.shape[1]}"
        if shown < frame.shape[0]:
            status += f" (first {shown} rows)"
        return status
