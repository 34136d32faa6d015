"""
Services package for file input and output.
"""

from .export_manager import ExportManager
from .matrix_io import MatrixFileManager, load_matrix, save_matrix
from .report_builder import ReportBuilder

__all__ = [
    'ExportManager',
    'MatrixFileManager',
    'ReportBuilder',
    'load_matrix',
    'save_matrix',
]
