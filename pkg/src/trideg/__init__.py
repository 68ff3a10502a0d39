"""Exact computations in the bounded homotopy category of a quiver algebra."""

__version__ = "0.1.0"
