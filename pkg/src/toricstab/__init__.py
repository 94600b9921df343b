"""Exact K-stability invariants of toric Fano varieties."""

__version__ = "0.1.0"
