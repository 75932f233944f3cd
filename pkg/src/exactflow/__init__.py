"""Exact rotational Euler/Navier-Stokes solutions as a verification toolkit."""

__version__ = "0.1.0"
