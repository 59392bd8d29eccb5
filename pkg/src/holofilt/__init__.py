"""Exact filtrations, holonomicity evidence and Bernstein-Sato searches for Weyl algebras."""

__version__ = "0.1.0"
