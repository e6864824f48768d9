"""Exact construction and verification of anharmonic Riccati equations."""

__version__ = "0.1.0"
