"""Bound states of a Rashba spin-orbit quantum ring with a finite-depth annular well."""

__version__ = "0.1.0"
