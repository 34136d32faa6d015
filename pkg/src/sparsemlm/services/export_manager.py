"""
Service for writing run outputs: coefficient matrices, tables and the manifest.
"""

import json
import logging
import platform
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import scipy

from ..app_types import CoefficientMatrix, MLMProblem
from ..constants import APP_VERSION, COEF_AXIS_LABEL, FLOAT_FORMAT, MANIFEST_NAME
from ..settings import Command, OutputFormat, RunConfig
from .matrix_io import MatrixFileManager

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    return value.item() if isinstance(value, np.generic) else value


def package_versions() -> Dict[str, str]:
    return {
        "sparsemlm": APP_VERSION,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
    }


class ExportManager:
    """Writes one run's files into its output directory and can undo them."""

    def __init__(self, output_dir: Path, output_format: OutputFormat = OutputFormat.CSV):
        self.output_dir = Path(output_dir)
        self.output_format = OutputFormat(output_format)
        self.matrix_io = MatrixFileManager()
        self.files: List[Path] = []
        self.manifest_path: Optional[Path] = None
        self._created_dir = False

    @property
    def extension(self) -> str:
        return "json" if self.output_format is OutputFormat.JSON else "csv"

    def ensure_output_directory(self) -> Path:
        """
        Ensure the output directory exists.

        Returns:
            Path to the output directory
        """
        if not self.output_dir.exists():
            self.output_dir.mkdir(parents=True)
            self._created_dir = True
        return self.output_dir

    def output_path(self, name: str, extension: Optional[str] = None) -> Path:
        return self.output_dir / f"{name}.{extension or self.extension}"

    def _register(self, path: Path) -> Path:
        if path not in self.files:
            self.files.append(path)
        return path

    def write_matrix(
        self,
        name: str,
        values: np.ndarray,
        column_labels: Optional[Sequence[str]] = None,
        row_labels: Optional[Sequence[str]] = None,
        axis_label: Optional[str] = None,
    ) -> Path:
        self.ensure_output_directory()
        path = self._register(self.output_path(name))
        return self.matrix_io.save_matrix(
            values,
            path,
            output_format=self.output_format,
            column_labels=column_labels,
            row_labels=row_labels,
            axis_label=axis_label,
        )

    def write_coefficients(self, name: str, B: CoefficientMatrix, prob: MLMProblem) -> Path:
        """
        Write a p x q coefficient matrix with the X labels down the side, the
        Z labels across the top and COEF_AXIS_LABEL in the corner.
        """
        return self.write_matrix(
            name,
            B.values,
            column_labels=prob.z_labels,
            row_labels=prob.x_labels,
            axis_label=COEF_AXIS_LABEL,
        )

    def write_table(self, name: str, table: pd.DataFrame) -> Path:
        """
        Write a table with a header line and no index.

        Numeric columns use the round-trip float format; JSON output uses the
        same columns/index/data layout as matrices.
        """
        self.ensure_output_directory()
        path = self._register(self.output_path(name))
        if self.output_format is OutputFormat.JSON:
            payload = {
                "columns": [str(c) for c in table.columns],
                "index": None,
                "data": [[_plain(v) for v in row] for row in table.itertuples(index=False)],
            }
            path.write_text(json.dumps(payload) + "\n", encoding="utf-8")
        else:
            table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return path

    def write_text(self, name: str, extension: str, content: str) -> Path:
        self.ensure_output_directory()
        path = self._register(self.output_path(name, extension))
        path.write_text(content, encoding="utf-8")
        return path

    def write_manifest(self, config: RunConfig, results: Dict[str, Any]) -> Path:
        """
        Write the run manifest: the full config (minus the output directory,
        which does not affect results), package versions, the files written
        and command-specific results such as convergence flags.
        """
        self.ensure_output_directory()
        path = self.output_dir / MANIFEST_NAME
        manifest = {
            "command": Command(config.command).value,
            "config": config.model_dump(mode="json", exclude={"output_dir"}),
            "versions": package_versions(),
            "files": sorted(p.name for p in self.files),
            "results": results,
        }
        self._register(path)
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=_plain) + "\n", encoding="utf-8")
        self.manifest_path = path
        return path

    def rollback(self) -> None:
        """Remove every file written so far, and the directory if this run created it."""
        for path in reversed(self.files):
            path.unlink(missing_ok=True)
        if self._created_dir and self.output_dir.exists() and not any(self.output_dir.iterdir()):
            self.output_dir.rmdir()
        logger.info("removed %d partial outputs from %s", len(self.files), self.output_dir)
        self.files.clear()
        self.manifest_path = None
