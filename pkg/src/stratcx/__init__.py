"""Exact chain-level machinery for stratified degenerations."""

__version__ = "0.1.0"
