"""Collective-spin open quantum battery simulator."""

__version__ = "1.0.0"
