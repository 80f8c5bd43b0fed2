"""Certificates for the cubic Cayley graphs Gamma_m of Alt(2^m - 1)."""

__version__ = "0.1.0"
