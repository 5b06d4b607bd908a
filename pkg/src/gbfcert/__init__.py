"""Exact tools for generalized bent functions and the primes t_p attached to them."""

__version__ = "0.1.0"
