import asyncio

import numpy as np
import pandas as pd
import pytest
from textual.widgets import DataTable

from sparsemlm.app import RunViewerApp
from sparsemlm.constants import DEFAULT_CONTENT
from sparsemlm.core.problem import build_problem
from sparsemlm.services import ExportManager, ReportBuilder
from sparsemlm.settings import RunConfig
from sparsemlm.solvers import fit
from sparsemlm.ui import UIHelper


@pytest.fixture
def run_dir(tmp_path):
    rng = np.random.default_rng(0)
    prob = build_problem(rng.normal(size=(8, 6)), rng.normal(size=(8, 2)), rng.normal(size=(6, 1)))
    result = fit(prob, 1.0)
    exporter = ExportManager(tmp_path / "run")
    exporter.write_coefficients("coefficients", result.B, prob)
    exporter.write_table("nnz_per_lambda", pd.DataFrame({"lambda": [1.0], "nnz": [result.B.nnz]}))
    exporter.write_manifest(RunConfig(command="simulate"), {"nnz": result.B.nnz})
    return tmp_path / "run"


def test_load_frame_reads_labelled_coefficients(run_dir):
    frame = UIHelper.load_frame(run_dir / "coefficients.csv")
    assert frame.shape == (3, 2)
    assert list(frame.index) == ["(intercept)", "x1", "x2"]


def test_load_frame_reads_headerless_matrix(tmp_path):
    path = tmp_path / "Y.csv"
    path.write_text("1,2\n3,4\n")
    frame = UIHelper.load_frame(path)
    assert frame.to_numpy().tolist() == [[1.0, 2.0], [3.0, 4.0]]


def test_describe_reports_truncation(tmp_path):
    frame = pd.DataFrame(np.zeros((10, 2)))
    assert UIHelper.describe(tmp_path / "big.csv", frame, 10) == "big.csv: 10 x 2"
    assert UIHelper.describe(tmp_path / "big.csv", frame, 4) == "big.csv: 10 x 2 (first 4 rows)"


def test_report_builder_markdown(run_dir):
    content = ReportBuilder(run_dir).build_markdown()
    assert content.startswith("# sparsemlm simulate run")
    assert "## Sparsity along the path" in content
    assert "- nnz: `" in content


def test_report_builder_error_page(tmp_path):
    assert ReportBuilder(tmp_path).build_safely().startswith("# Error")


def test_viewer_shows_report_and_tables(run_dir):
    async def drive():
        app = RunViewerApp(run_dir)
        async with app.run_test() as pilot:
            assert "sparsemlm simulate run" in app.markdown_content
            await pilot.press("f")
            assert not app.show_file_tree
            await pilot.press("f")
            assert app.show_file_tree

            app.show_matrix(run_dir / "coefficients.csv")
            await pilot.pause()
            assert app.show_table
            assert app.query_one("#matrix-view", DataTable).row_count == 3
            assert app.sub_title == "coefficients.csv: 3 x 2"

            await pilot.press("r")
            assert not app.show_table

            await pilot.press("e")
            assert (run_dir / "report.html").exists()

    asyncio.run(drive())


def test_viewer_without_run_dir_shows_help(tmp_path):
    app = RunViewerApp(tmp_path / "missing")
    assert app.markdown_content == DEFAULT_CONTENT
