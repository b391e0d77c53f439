"""Numerical workbench for Selberg sieve weight correlations, the pair
correlation form factor of zeta zeros, and the variance of primes in short
intervals."""

__version__ = "0.1.0"
