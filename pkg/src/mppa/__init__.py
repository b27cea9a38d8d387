"""Exact verification engine for multiplicative preprojective algebras and their Calabi-Yau witnesses."""

__version__ = "0.1.0"
