"""Symbolic and numeric workbench for a particle in a uniform field on rotationally invariant noncommutative space."""

__version__ = "0.1.0"
