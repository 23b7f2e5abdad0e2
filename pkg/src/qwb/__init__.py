"""Deciders for finite quantaloids, their enriched categories and modules, and locale maps."""

__version__ = "0.1.0"
