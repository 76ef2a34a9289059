"""Equivariant simplicial solvers for Kakutani-type problems on Borsuk-Ulam-type manifolds."""

__version__ = "0.1.0"
