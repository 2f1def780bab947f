"""Deciding semistability of kernel sheaves on smooth projective curves."""

__version__ = "0.1.0"
