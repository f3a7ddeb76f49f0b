"""Exact evaluation of trigonometric Dirichlet series at real quadratic irrationalities."""

__version__ = "0.1.0"
