"""Exact confusion-matrix metrics and the MCC -> Fowlkes-Mallows limit as TN grows."""

__version__ = "0.1.0"
