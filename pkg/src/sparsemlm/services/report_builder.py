"""
Service for summarizing a run directory as Markdown and standalone HTML.
"""

import json
import logging
from pathlib import Path
from typing import List, Optional

import pandas as pd
from markdown import markdown

from ..constants import (
    CV_MEAN_NAME,
    ERROR_CONTENT_TEMPLATE,
    HTML_STYLE,
    MANIFEST_NAME,
    NNZ_SUMMARY_NAME,
    REPORT_NAME,
    TABLE_MAX_ROWS,
)
from ..errors import DataError

logger = logging.getLogger(__name__)

# summary tables rendered in this order when present
REPORT_TABLES = [
    (NNZ_SUMMARY_NAME, "Sparsity along the path"),
    (CV_MEAN_NAME, "Cross-validation"),
    ("auc", "Support recovery"),
    ("timing_ratio", "Timing ratios"),
    ("kkt_violations", "KKT violations"),
]


def read_table(path: Path) -> pd.DataFrame:
    """Read a table written by ExportManager.write_table (csv or json)."""
    if path.suffix == ".json":
        payload = json.loads(path.read_text(encoding="utf-8"))
        return pd.DataFrame(payload["data"], columns=payload["columns"])
    return pd.read_csv(path, float_precision="round_trip")


def markdown_table(table: pd.DataFrame, max_rows: int = TABLE_MAX_ROWS) -> str:
    """Pipe table; floats in 6 significant digits."""
    def cell(value) -> str:
        if isinstance(value, float):
            return f"{value:.6g}"
        return str(value)

    header = "| " + " | ".join(str(c) for c in table.columns) + " |"
    rule = "|" + "|".join(" ---: " for _ in table.columns) + "|"
    rows = [
        "| " + " | ".join(cell(v) for v in row) + " |"
        for row in table.head(max_rows).itertuples(index=False)
    ]
    if len(table) > max_rows:
        rows.append(f"\n*{len(table) - max_rows} more rows not shown*")
    return "\n".join([header, rule, *rows])


class ReportBuilder:
    """Builds the report for one run directory."""

    def __init__(self, run_dir: Path):
        self.run_dir = Path(run_dir)

    def _find(self, name: str) -> Optional[Path]:
        for suffix in (".csv", ".json"):
            path = self.run_dir / f"{name}{suffix}"
            if path.exists():
                return path
        return None

    def load_manifest(self) -> dict:
        path = self.run_dir / MANIFEST_NAME
        if not path.exists():
            raise DataError(f"no {MANIFEST_NAME} in {self.run_dir}; not a run directory")
        return json.loads(path.read_text(encoding="utf-8"))

    def build_markdown(self) -> str:
        """
        Render the manifest summary and every known table.

        Returns:
            Markdown document
        """
        manifest = self.load_manifest()
        config = manifest.get("config", {})
        solver = config.get("solver", {})
        parts: List[str] = [
            f"# sparsemlm {manifest.get('command', '')} run",
            "",
            f"- algorithm: `{solver.get('algorithm', '')}`",
            f"- tolerance: `{solver.get('tol', '')}`",
            f"- versions: "
            + ", ".join(f"{k} {v}" for k, v in sorted(manifest.get("versions", {}).items())),
        ]
        results = manifest.get("results", {})
        scalars = {k: v for k, v in results.items() if not isinstance(v, (list, dict))}
        if scalars:
            parts += ["", "## Results", ""]
            parts += [f"- {key}: `{value}`" for key, value in sorted(scalars.items())]

        for name, title in REPORT_TABLES:
            path = self._find(name)
            if path is None:
                continue
            parts += ["", f"## {title}", "", markdown_table(read_table(path))]

        files = manifest.get("files", [])
        if files:
            parts += ["", "## Files", ""]
            parts += [f"- `{name}`" for name in files]
        parts += ["", "## Configuration", "", "```json", json.dumps(config, indent=2, sort_keys=True), "```", ""]
        return "\n".join(parts)

    def build_safely(self) -> str:
        """Markdown for the run, or an error page when the directory cannot be read."""
        try:
            return self.build_markdown()
        except (DataError, OSError, ValueError, KeyError) as e:
            return ERROR_CONTENT_TEMPLATE.format(message=f"Could not read run: {self.run_dir}\n\nError: {e}")

    def generate_html(self, content: str, title: str) -> str:
        html_content = markdown(content, extensions=["tables", "fenced_code"])
        return f"""<!DOCTYPE html>
<html>
<head>
    <meta charset="utf-8">
    <title>{title}</title>
    <style>
{HTML_STYLE}
    </style>
</head>
<body>
    {html_content}
</body>
</html>"""

    def write(self, output_dir: Optional[Path] = None) -> List[Path]:
        """
        Write report.md and report.html.

        Args:
            output_dir: Target directory, the run directory by default

        Returns:
            The two paths written
        """
        content = self.build_markdown()
        target = Path(output_dir) if output_dir else self.run_dir
        target.mkdir(parents=True, exist_ok=True)
        md_path = target / f"{REPORT_NAME}.md"
        html_path = target / f"{REPORT_NAME}.html"
        md_path.write_text(content, encoding="utf-8")
        html_path.write_text(self.generate_html(content, self.run_dir.name), encoding="utf-8")
        logger.info("wrote report for %s", self.run_dir)
        return [md_path, html_path]
