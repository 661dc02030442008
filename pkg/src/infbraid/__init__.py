"""Infinite braids, Jones-Wenzl projectors and the stabilization of their invariants."""

__version__ = "0.1.0"
