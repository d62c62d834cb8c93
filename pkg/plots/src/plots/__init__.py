"""Render shadowcell sweep CSVs into deterministic figures."""

__version__ = "0.1.0"
