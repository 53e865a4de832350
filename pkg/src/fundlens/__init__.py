"""fundlens: topic modeling and sentiment-performance analytics for fund documents."""

__version__ = "0.1.0"

OUTLIER = -1
"""Sentinel topic label for chunks no model is willing to assign."""
