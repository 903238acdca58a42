"""Symbolic-numeric exterior calculus for evolutionary relations."""
from __future__ import annotations

__version__ = "0.1.0"
