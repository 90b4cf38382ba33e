"""Figure rendering for ontological-model experiment CSVs."""

__version__ = "0.1.0"

from .figures import KINDS, SCHEMA, FigureSpec, SchemaError, build_figure, read_rows, render

__all__ = ["KINDS", "SCHEMA", "FigureSpec", "SchemaError", "build_figure", "read_rows", "render"]
