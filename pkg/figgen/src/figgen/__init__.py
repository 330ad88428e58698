"""Static figure generation from sweep result CSVs."""

__version__ = "0.1.0"

from .figures import STYLES, FigureError, FigureSpec, render
from .manifest import parse_manifest

__all__ = ["STYLES", "FigureError", "FigureSpec", "render", "parse_manifest"]
