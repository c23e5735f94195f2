"""Dilworth truncations, Hadamard products of linear spaces, and amoeba dimensions over GF(p)."""

__version__ = "0.1.0"
