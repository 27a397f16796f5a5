"""Cyclic rational parking functions, chain operators and a Macdonald oracle."""

__version__ = "0.1.0"
