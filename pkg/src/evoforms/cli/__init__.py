"""Command-line interface and workspace files."""
from __future__ import annotations

from .main import build_parser, main, run
from .workspace import Workspace, load_workspace, parse_locus

__all__ = ["Workspace", "build_parser", "load_workspace", "main", "parse_locus", "run"]
