"""Cayley graphs on 2-groups generated by involutions, and their census."""

__version__ = "0.1.0"
