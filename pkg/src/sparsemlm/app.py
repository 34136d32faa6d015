"""
Terminal viewer for a run directory: file tree, rendered report, matrix tables.
"""

import webbrowser
from pathlib import Path

from textual.app import App, ComposeResult
from textual.containers import Horizontal, VerticalScroll
from textual.reactive import reactive
from textual.widgets import DataTable, DirectoryTree, Footer, Header, Markdown

from .constants import APP_NAME, DEFAULT_CONTENT, ERROR_CONTENT_TEMPLATE, NOTIFICATION_DURATION, REPORT_NAME
from .errors import SparseMLMError
from .services import MatrixFileManager, ReportBuilder
from .ui import APP_BINDINGS, APP_CSS, UIHelper


class RunViewerApp(App):
    """A Textual app for browsing sparsemlm outputs."""

    CSS = APP_CSS
    BINDINGS = APP_BINDINGS

    show_file_tree = reactive(True)
    show_table = reactive(False)

    def __init__(self, run_dir: Path):
        """
        Initialize the run viewer.

        Args:
            run_dir: Directory written by a sparsemlm command
        """
        super().__init__()
        self.run_dir = Path(run_dir)
        self.file_manager = MatrixFileManager()
        self.report_builder = ReportBuilder(self.run_dir)
        self.ui_helper = UIHelper()
        if self.run_dir.is_dir():
            self.markdown_content = self.report_builder.build_safely()
        else:
            self.markdown_content = DEFAULT_CONTENT

    def compose(self) -> ComposeResult:
        """Compose the application UI."""
        yield Header()

        with Horizontal(id="main-container"):
            yield DirectoryTree(self.run_dir if self.run_dir.is_dir() else Path.cwd(), id="file-tree")
            with VerticalScroll(id="content-area"):
                yield Markdown(self.markdown_content, id="markdown-view")
                yield DataTable(id="matrix-view", zebra_stripes=True)

        yield Footer()

    def on_mount(self) -> None:
        self.query_one("#file-tree").add_class("visible")
        self.title = f"{APP_NAME} - {self.run_dir}"

    def watch_show_file_tree(self, show_file_tree: bool) -> None:
        file_tree = self.query_one("#file-tree")
        if show_file_tree:
            file_tree.add_class("visible")
        else:
            file_tree.remove_class("visible")

    def watch_show_table(self, show_table: bool) -> None:
        markdown_view = self.query_one("#markdown-view")
        matrix_view = self.query_one("#matrix-view")
        if show_table:
            markdown_view.add_class("hidden")
            matrix_view.add_class("visible")
        else:
            markdown_view.remove_class("hidden")
            matrix_view.remove_class("visible")

    def on_directory_tree_file_selected(self, event: DirectoryTree.FileSelected) -> None:
        """Show matrices as tables and Markdown files as documents."""
        path = Path(event.path)
        if self.file_manager.is_matrix_file(path):
            self.show_matrix(path)
        elif path.suffix.lower() == ".md":
            self.show_markdown(path.read_text(encoding="utf-8"))

    def show_matrix(self, path: Path) -> None:
        """Load a matrix or table file into the table view."""
        table = self.query_one("#matrix-view", DataTable)
        try:
            frame = self.ui_helper.load_frame(path)
        except (SparseMLMError, OSError, ValueError, KeyError) as e:
            self.show_markdown(ERROR_CONTENT_TEMPLATE.format(message=f"Could not read {path.name}: {e}"))
            return
        shown = self.ui_helper.fill_table(table, frame)
        self.sub_title = self.ui_helper.describe(path, frame, shown)
        self.show_table = True

    def show_markdown(self, content: str) -> None:
        self.markdown_content = content
        self.query_one("#markdown-view", Markdown).update(content)
        self.show_table = False

    def action_toggle_dark(self) -> None:
        """Toggle dark mode."""
        self.theme = "textual-dark" if self.theme == "textual-light" else "textual-light"

    def action_toggle_file_tree(self) -> None:
        self.show_file_tree = not self.show_file_tree

    def action_show_report(self) -> None:
        """Rebuild and show the run report."""
        self.show_markdown(self.report_builder.build_safely())
        self.sub_title = ""

    def action_export_report(self) -> None:
        """Write report.md and report.html into the run directory."""
        try:
            paths = self.report_builder.write()
        except (SparseMLMError, OSError) as e:
            self.sub_title = f"Export failed: {e}"
            return
        self.sub_title = f"Wrote {paths[-1].name}"
        self.set_timer(NOTIFICATION_DURATION, lambda: setattr(self, "sub_title", ""))

    def action_open_browser(self) -> None:
        """Open the exported HTML report, exporting it first if needed."""
        html_path = self.run_dir / f"{REPORT_NAME}.html"
        if not html_path.exists():
            self.action_export_report()
        if html_path.exists():
            webbrowser.open(f"file://{html_path.absolute()}")
