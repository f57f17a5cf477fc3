"""Cremona hexahedral cubic surfaces, Cremona planes and singular Lüroth quartics."""

__version__ = "0.1.0"
