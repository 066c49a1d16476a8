"""Dirichlet eigenstates and nodal-domain counts for planar separable
billiards: circular, elliptic, and parabolic families, with difference-table
verification of the closed-form nodal-count formulas."""

__version__ = "0.1.0"
