"""Spectral statistics of products of random matrices, composed random
quantum operations and the stochastic quantum baker map."""

__version__ = "0.1.0"
