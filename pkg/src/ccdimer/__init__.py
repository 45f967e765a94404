"""Coupled-channel bound states and light shifts for bialkali dimers."""

__version__ = "0.1.0"
