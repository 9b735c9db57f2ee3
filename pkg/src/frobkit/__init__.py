"""Frobenius and homological invariants of ring maps over prime fields."""

__version__ = "0.1.0"
