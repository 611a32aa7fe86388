"""Model checking for ATL over game structures."""

__version__ = "0.1.0"
