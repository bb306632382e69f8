"""Turing machines as fixed-point iterations: tape phases, debugger runs and orbit analysis."""

__version__ = "0.1.0"
