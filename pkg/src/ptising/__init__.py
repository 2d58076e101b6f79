"""Exact solution and phase diagram of the PT-symmetric Ising ring in a staggered complex field."""

__version__ = "0.1.0"
