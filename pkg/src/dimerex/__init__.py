"""Dimer models, their quivers, and exceptional collections on toric weak Fano stacks."""

__version__ = "0.1.0"
