"""Rendering of simulator sweep exports into publication-style figures."""

__version__ = "0.1.0"

from .render import FigureKind, FigureSpec, render

__all__ = ["FigureKind", "FigureSpec", "render"]
