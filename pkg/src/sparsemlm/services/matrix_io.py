"""
Service for reading and writing dense matrices as delimited text or JSON.
"""

import io
import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..app_types import LabeledMatrix
from ..constants import FLOAT_FORMAT, MATRIX_SUFFIXES
from ..errors import DataError
from ..settings import OutputFormat

logger = logging.getLogger(__name__)

MatrixLike = Union[LabeledMatrix, np.ndarray]


def detect_delimiter(first_line: str) -> str:
    """Tab when the first line has one, otherwise comma."""
    return "\t" if "\t" in first_line else ","


def _check_rectangular(lines: List[str], delimiter: str, path: Path) -> None:
    expected = None
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            raise DataError(f"{path}: line {number} is blank")
        width = line.count(delimiter) + 1
        if expected is None:
            expected = width
        elif width != expected:
            raise DataError(f"{path}: line {number} has {width} fields, expected {expected}")


def _to_float(frame: pd.DataFrame, path: Path, first_data_line: int) -> np.ndarray:
    try:
        return frame.to_numpy(dtype=float)
    except ValueError:
        for i, row in enumerate(frame.itertuples(index=False)):
            for j, cell in enumerate(row):
                try:
                    float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: line {first_data_line + i}, column {j + 1}: non-numeric cell {cell!r}"
                    ) from None
        raise


class MatrixFileManager:
    """Loads and saves matrices as delimited text or JSON."""

    def is_matrix_file(self, file_path: Path) -> bool:
        """
        Check if a file has a matrix extension.

        Args:
            file_path: Path to check

        Returns:
            True for .csv, .tsv and .json files
        """
        return file_path.suffix.lower() in MATRIX_SUFFIXES

    def load_matrix(self, path: Path, has_header: bool = False, row_labels: bool = False) -> LabeledMatrix:
        """
        Load a rectangular real matrix.

        Args:
            path: .json file written by save_matrix, or UTF-8 delimited text with
                comma or tab separators (detected from the first line)
            has_header: First line holds column labels
            row_labels: First column holds row labels

        Returns:
            LabeledMatrix with any labels that were read

        Raises:
            DataError: missing or empty file, ragged rows, non-numeric cells
        """
        path = Path(path)
        if not path.exists():
            raise DataError(f"file not found: {path}")
        text = path.read_text(encoding="utf-8")
        if not text.strip():
            raise DataError(f"{path}: file is empty")

        if path.suffix.lower() == ".json":
            matrix = self._load_json(text, path)
        else:
            matrix = self._load_delimited(text, path, has_header, row_labels)
        logger.debug("loaded %s with shape %s", path, matrix.values.shape)
        return matrix

    def _load_delimited(self, text: str, path: Path, has_header: bool, row_labels: bool) -> LabeledMatrix:
        lines = text.rstrip("\r\n").splitlines()
        delimiter = detect_delimiter(lines[0])
        _check_rectangular(lines, delimiter, path)
        if has_header and len(lines) < 2:
            raise DataError(f"{path}: header line but no data rows")

        frame = pd.read_csv(
            io.StringIO(text),
            sep=delimiter,
            header=0 if has_header else None,
            index_col=0 if row_labels else None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        )
        if frame.shape[1] == 0:
            raise DataError(f"{path}: no numeric columns")
        values = _to_float(frame, path, first_data_line=2 if has_header else 1)
        return LabeledMatrix(
            values=values,
            column_labels=[str(c).strip() for c in frame.columns] if has_header else None,
            row_labels=[str(r).strip() for r in frame.index] if row_labels else None,
        )

    def _load_json(self, text: str, path: Path) -> LabeledMatrix:
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise DataError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
        rows = payload.get("data") if isinstance(payload, dict) else payload
        if not isinstance(rows, list) or not rows:
            raise DataError(f"{path}: no data rows")
        widths = {len(row) if isinstance(row, list) else -1 for row in rows}
        if len(widths) != 1 or -1 in widths:
            raise DataError(f"{path}: rows are ragged")
        try:
            values = np.array(rows, dtype=float)
        except (TypeError, ValueError):
            raise DataError(f"{path}: non-numeric entries") from None
        columns = payload.get("columns") if isinstance(payload, dict) else None
        index = payload.get("index") if isinstance(payload, dict) else None
        return LabeledMatrix(values=values, column_labels=columns, row_labels=index)

    def save_matrix(
        self,
        matrix: MatrixLike,
        path: Path,
        output_format: Optional[OutputFormat] = None,
        column_labels: Optional[Sequence[str]] = None,
        row_labels: Optional[Sequence[str]] = None,
        axis_label: Optional[str] = None,
    ) -> Path:
        """
        Write a matrix that load_matrix reads back bit for bit.

        Args:
            matrix: Values, optionally carrying labels
            path: Target; the suffix picks the format unless output_format is given
                (.tsv writes tab-separated text)
            column_labels: Header labels; a header line is written only with labels
            row_labels: Written as a leading column
            axis_label: Header cell above the row labels

        Returns:
            The path written
        """
        if isinstance(matrix, LabeledMatrix):
            values = matrix.values
            column_labels = matrix.column_labels if column_labels is None else column_labels
            row_labels = matrix.row_labels if row_labels is None else row_labels
        else:
            values = np.asarray(matrix, dtype=float)
        if values.ndim != 2:
            raise DataError(f"expected a 2-d matrix, got shape {values.shape}")
        path = Path(path)
        output_format = OutputFormat(output_format) if output_format else (
            OutputFormat.JSON if path.suffix.lower() == ".json" else OutputFormat.CSV
        )

        if output_format is OutputFormat.JSON:
            payload = {
                "columns": list(column_labels) if column_labels is not None else None,
                "index": list(row_labels) if row_labels is not None else None,
                "data": values.tolist(),
            }
            path.write_text(json.dumps(payload) + "\n", encoding="utf-8")
            return path

        frame = pd.DataFrame(
            values,
            columns=list(column_labels) if column_labels is not None else None,
            index=list(row_labels) if row_labels is not None else None,
        )
        frame.to_csv(
            path,
            sep="\t" if path.suffix.lower() == ".tsv" else ",",
            header=column_labels is not None,
            index=row_labels is not None,
            index_label=axis_label if row_labels is not None else None,
            float_format=FLOAT_FORMAT,
            lineterminator="\n",
        )
        return path

def load_matrix(path: Path, has_header: bool = False, row_labels: bool = False) -> LabeledMatrix:
    return MatrixFileManager().load_matrix(path, has_header=has_header, row_labels=row_labels)


def save_matrix(matrix: MatrixLike, path: Path, **kwargs) -> Path:
    return MatrixFileManager().save_matrix(matrix, path, **kwargs)
