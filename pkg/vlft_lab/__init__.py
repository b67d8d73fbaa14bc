"""Finite-length and periodic-decoding bounds for variable-length feedback codes."""

__version__ = "0.1.0"
