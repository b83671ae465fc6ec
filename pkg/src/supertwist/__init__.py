"""Exact computer algebra for holomorphic twists of superconformal algebras."""

__version__ = "0.1.0"
