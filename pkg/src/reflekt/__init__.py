"""Exact arithmetic for reflective modular forms and uniruledness certificates."""

__version__ = "0.1.0"
