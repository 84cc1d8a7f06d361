"""Inverse Wronski problems, real Schubert calculus and their supporting combinatorics."""

__version__ = "0.1.0"
